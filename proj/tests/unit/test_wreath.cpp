#include <doctest.h>

#include "plhom/error.hpp"
#include "plhom/towers.hpp"
#include "plhom/wreath.hpp"
#include "test_support.hpp"

using namespace plhom;
using plhom::testsupport::Rng;

namespace {

Interval iv(long al, long ad, long bl, long bd) { return Interval{Rat(al, ad), Rat(bl, bd)}; }

}  // namespace

TEST_CASE("bump_on") {
  CHECK(bump_on(iv(0, 1, 1, 1)) ==
        PLMap::from_nodes({{Rat(0), Rat(0)}, {Rat(1, 4), Rat(1, 2)}, {Rat(1), Rat(1)}}));
  PLMap b = bump_on(iv(1, 4, 1, 2));
  CHECK(b == PLMap::from_nodes({{Rat(0), Rat(0)},
                                {Rat(1, 4), Rat(1, 4)},
                                {Rat(5, 16), Rat(3, 8)},
                                {Rat(1, 2), Rat(1, 2)},
                                {Rat(1), Rat(1)}}));
  auto orbs = orbitals_of_map(b);
  REQUIRE(orbs.size() == 1);
  CHECK(orbs[0].interval == iv(1, 4, 1, 2));
  CHECK(orbs[0].direction == Direction::Right);
  CHECK(edge_slopes(b, iv(1, 4, 1, 2)) == std::pair{Rat(2), Rat(2, 3)});
}

TEST_CASE("rescale_into") {
  CHECK(rescale_into(PLMap::identity(), iv(1, 4, 1, 2)).is_identity());
  CHECK(rescale_into(bump_on(iv(0, 1, 1, 1)), iv(0, 1, 1, 2)) ==
        PLMap::from_nodes(
            {{Rat(0), Rat(0)}, {Rat(1, 8), Rat(1, 4)}, {Rat(1, 2), Rat(1, 2)}, {Rat(1), Rat(1)}}));
  // Affine conjugation is a homomorphism.
  Rng rng(13);
  for (int i = 0; i < 25; ++i) {
    PLMap f = plhom::testsupport::random_plmap(rng);
    PLMap g = plhom::testsupport::random_plmap(rng);
    Interval A = iv(1, 8, 5, 8);
    CHECK(rescale_into(compose(f, g), A) == compose(rescale_into(f, A), rescale_into(g, A)));
  }
}

TEST_CASE("wreath_with_Z places base copies in one fundamental domain") {
  GroupSpec Z = GroupSpec::checked("", {{"b", bump_on(iv(0, 1, 1, 1))}});
  auto w = wreath_with_Z(Z, iv(0, 1, 1, 1), 3);
  REQUIRE(w.base_generators.size() == 1);
  const PLMap& top = w.top_generator.second;
  const PLMap& base = w.base_generators[0].second;

  // Support of the base sits inside [x0, x0*t).
  Rat x0(1, 4);
  auto hull = support_hull_in(base, iv(0, 1, 1, 1));
  REQUIRE(hull.has_value());
  CHECK(x0 <= hull->first);
  CHECK(hull->second < top(x0));
  CHECK(fits_fundamental_domain(top, iv(0, 1, 1, 1), hull->first, hull->second));

  // Distinct materialized copies commute exactly; conjugation shifts copies.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(commutator(w.copy(0, i), w.copy(0, j)).is_identity());
  CHECK(conjugate(w.copy(0, 1), top) == w.copy(0, 2));

  // Trivial base: the realization is just the top bump.
  auto zw = wreath_with_Z(GroupSpec{"", {}}, iv(0, 1, 1, 1), 1);
  CHECK(zw.base_generators.empty());
  CHECK(zw.top_generator.second == bump_on(iv(0, 1, 1, 1)));
}

TEST_CASE("build_family W") {
  GroupSpec W1 = build_family(FamilyKind::W, 1, 1);
  REQUIRE(W1.size() == 1);
  CHECK(W1.generators[0].second == bump_on(iv(0, 1, 1, 1)));

  GroupSpec W3 = build_family(FamilyKind::W, 3, 1);
  REQUIRE(W3.size() == 3);
  // Nested orbitals t1 inside t2 inside t3.
  auto o1 = orbital_intervals(W3.generators[0].second);
  auto o2 = orbital_intervals(W3.generators[1].second);
  auto o3 = orbital_intervals(W3.generators[2].second);
  REQUIRE((o1.size() == 1 && o2.size() == 1 && o3.size() == 1));
  CHECK(o2[0].contains_closure(o1[0]));
  CHECK(o3[0].contains_closure(o2[0]));
  CHECK(o3[0] == iv(0, 1, 1, 1));

  auto depth = depth_lower_bound(W3, 1);
  CHECK(depth.n == 3);
}

TEST_CASE("build_family G") {
  GroupSpec G12 = build_family(FamilyKind::G, 1, 2);
  REQUIRE(G12.size() == 2);
  auto orbs = group_orbitals(G12);
  REQUIRE(orbs.size() == 2);
  CHECK(depth_lower_bound(G12, 2).n == 1);

  GroupSpec G22 = build_family(FamilyKind::G, 2, 2);
  CHECK(G22.size() == 6);
  CHECK(depth_lower_bound(G22, 2).n == 2);
  CHECK_THROWS_AS(build_family(FamilyKind::W, 0, 1), DomainError);
}

TEST_CASE("mutual efficiency") {
  PLMap g = PLMap::from_nodes({{Rat(0), Rat(0)}, {Rat(1, 4), Rat(1, 2)}, {Rat(1), Rat(1)}});
  PLMap small = bump_on(iv(1, 16, 1, 8));
  auto bad = mutual_efficiency(g, small);
  CHECK(!bad.ok);
  CHECK(*bad.violating == iv(0, 1, 1, 1));
  CHECK(mutual_efficiency(power(g, 2), small).ok);
  CHECK(mutual_efficiency(bump_on(iv(1, 8, 1, 4)), bump_on(iv(1, 2, 3, 4))).ok);  // disjoint
  // Interleaved orbital families violate the precondition outright.
  CHECK_THROWS_AS(mutual_efficiency(bump_on(iv(0, 1, 3, 4)), bump_on(iv(1, 2, 1, 1))), DomainError);
}

TEST_CASE("efficiency exponents") {
  PLMap g = PLMap::from_nodes({{Rat(0), Rat(0)}, {Rat(1, 4), Rat(1, 2)}, {Rat(1), Rat(1)}});
  PLMap small = bump_on(iv(1, 16, 1, 8));
  CHECK(efficiency_exponents(g, small) == std::pair{2L, 1L});
  CHECK(efficiency_exponents(power(g, 2), small) == std::pair{1L, 1L});
  CHECK(efficiency_exponents(bump_on(iv(1, 8, 1, 4)), bump_on(iv(1, 2, 3, 4))) ==
        std::pair{1L, 1L});

  // Monotonicity: larger exponents keep the pair efficient.
  auto [j, k] = efficiency_exponents(g, small);
  CHECK(mutual_efficiency(power(g, j), power(small, k)).ok);
  CHECK(mutual_efficiency(power(g, j + 1), power(small, k)).ok);
  CHECK(mutual_efficiency(power(g, j), power(small, k + 1)).ok);
}

TEST_CASE("double commutator facts on nested pairs") {
  PLMap h = bump_on(iv(1, 16, 7, 64));
  PLMap k = PLMap::from_nodes({{Rat(0), Rat(0)}, {Rat(1, 4), Rat(1, 2)}, {Rat(1), Rat(1)}});
  auto rep = dc_properties_check(h, k);
  CHECK(rep.nested_orbitals_preserved);
  CHECK(rep.orbitals_confined);
  auto orbs = orbital_intervals(rep.f);
  CHECK(std::find(orbs.begin(), orbs.end(), iv(1, 16, 7, 64)) != orbs.end());

  CHECK(dc_properties_check(PLMap::identity(), k).f.is_identity());
  CHECK_THROWS_AS(dc_properties_check(bump_on(iv(1, 16, 1, 8)), k), DomainError);
}

TEST_CASE("obstruction demo: disjoint commuting pair") {
  PLMap alpha = bump_on(iv(0, 1, 1, 4));
  PLMap beta = bump_on(iv(1, 2, 1, 1));
  PLMap gamma = bump_on(iv(9, 16, 5, 8));
  auto res = obstruction_demo(alpha, beta, gamma);
  CHECK(!res.gamma_final.is_identity());
  for (auto& C : orbital_intervals(res.gamma_final))
    for (auto& A : orbital_intervals(alpha)) CHECK(!intervals_overlap(C, A));
  CHECK(commutator(res.gamma_final, alpha).is_identity());
}

TEST_CASE("obstruction demo: equal maps degenerate as documented") {
  PLMap alpha = bump_on(iv(0, 1, 1, 1));
  PLMap gamma = bump_on(iv(1, 16, 7, 64));
  CHECK_THROWS_AS(obstruction_demo(alpha, alpha, gamma), ObstructionDegenerateError);
  try {
    obstruction_demo(alpha, alpha, gamma);
  } catch (const ObstructionDegenerateError& e) {
    CHECK(!e.log.empty());
  }
}

TEST_CASE("obstruction demo: shared orbital solved by a slope-pruned theta") {
  PLMap alpha = bump_on(iv(0, 1, 1, 2));
  PLMap beta = compose(bump_on(iv(1, 2, 1, 1)), power(bump_on(iv(0, 1, 1, 2)), 2));
  PLMap gamma = bump_on(iv(9, 16, 5, 8));
  auto res = obstruction_demo(alpha, beta, gamma);
  CHECK(!res.gamma_final.is_identity());
  CHECK(commutator(res.gamma_final, alpha).is_identity());
  bool theta_logged = false;
  for (auto& e : res.log) theta_logged = theta_logged || e.note.rfind("theta = alpha^2 beta^-1", 0) == 0;
  CHECK(theta_logged);
}

TEST_CASE("obstruction demo preconditions") {
  PLMap a = bump_on(iv(0, 1, 3, 4));
  PLMap b = bump_on(iv(1, 2, 1, 1));
  CHECK_THROWS_AS(obstruction_demo(a, b, bump_on(iv(9, 16, 5, 8))), DomainError);  // don't commute
  CHECK_THROWS_AS(obstruction_demo(a, a, PLMap::identity()), DomainError);         // trivial gamma
}
