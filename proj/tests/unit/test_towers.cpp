#include <doctest.h>

#include "plhom/error.hpp"
#include "plhom/groups.hpp"
#include "plhom/towers.hpp"
#include "plhom/wreath.hpp"
#include "test_support.hpp"

using namespace plhom;

namespace {

Interval iv(long al, long ad, long bl, long bd) { return Interval{Rat(al, ad), Rat(bl, bd)}; }

SignedOrbital level(const Interval& A, const PLMap& m) { return SignedOrbital{A, m, std::nullopt}; }

}  // namespace

TEST_CASE("signed orbitals up to a length bound") {
  GroupSpec id = GroupSpec::checked("", {{"e", PLMap::identity()}});
  CHECK(signed_orbitals_up_to(id, 3).empty());

  GroupSpec one = GroupSpec::checked("", {{"b", bump_on(iv(1, 4, 1, 2))}});
  auto S = signed_orbitals_up_to(one, 2);
  CHECK(!S.empty());
  for (auto& so : S) CHECK(so.orbital == iv(1, 4, 1, 2));

  GroupSpec F = f_generators(2);
  auto SF = signed_orbitals_up_to(F, 1);
  // x0 and x0^-1 on (0,1); x1 and x1^-1 on (1/2,1).
  CHECK(SF.size() == 4);
}

TEST_CASE("max_tower finds the longest properly nested chain") {
  PLMap f1 = bump_on(iv(1, 4, 1, 2));
  PLMap f2 = bump_on(iv(1, 8, 3, 4));
  Tower t = max_tower({level(iv(1, 4, 1, 2), f1), level(iv(1, 8, 3, 4), f2)});
  REQUIRE(t.height() == 2);
  CHECK(t.levels[0].orbital == iv(1, 4, 1, 2));
  CHECK(t.levels[1].orbital == iv(1, 8, 3, 4));

  Tower disjoint = max_tower({level(iv(1, 8, 1, 4), bump_on(iv(1, 8, 1, 4))),
                              level(iv(1, 2, 3, 4), bump_on(iv(1, 2, 3, 4)))});
  CHECK(disjoint.height() == 1);

  Tower interleaved = max_tower({level(iv(0, 1, 3, 4), bump_on(iv(0, 1, 3, 4))),
                                 level(iv(1, 2, 1, 1), bump_on(iv(1, 2, 1, 1)))});
  CHECK(interleaved.height() == 1);

  CHECK(max_tower({}).height() == 0);
}

TEST_CASE("max_tower tie-breaking is deterministic") {
  // Two disjoint height-1 chains: the left one wins.
  PLMap a = bump_on(iv(1, 8, 1, 4));
  PLMap b = bump_on(iv(1, 2, 3, 4));
  Tower t = max_tower({level(iv(1, 2, 3, 4), b), level(iv(1, 8, 1, 4), a)});
  REQUIRE(t.height() == 1);
  CHECK(t.levels[0].orbital == iv(1, 8, 1, 4));

  // Same orbital, two signatures: the smaller map in the left order wins.
  PLMap c = bump_on(iv(1, 8, 1, 4));
  PLMap c2 = power(c, 2);
  PLMap expect = compare_left_order(c, c2) == std::strong_ordering::less ? c : c2;
  Tower t2 = max_tower({level(iv(1, 8, 1, 4), c), level(iv(1, 8, 1, 4), c2)});
  REQUIRE(t2.height() == 1);
  CHECK(t2.levels[0].signature == expect);
}

TEST_CASE("tower validation") {
  PLMap b = bump_on(iv(1, 4, 1, 2));
  Tower bad;
  bad.levels = {level(iv(1, 8, 3, 4), b)};  // not an orbital of b
  CHECK_THROWS_AS(validate_tower(bad), DomainError);

  Tower not_nested;
  not_nested.levels = {level(iv(1, 8, 3, 4), bump_on(iv(1, 8, 3, 4))), level(iv(1, 4, 1, 2), b)};
  CHECK_THROWS_AS(validate_tower(not_nested), DomainError);
}

TEST_CASE("is_exemplary") {
  Tower single;
  single.levels = {level(iv(1, 4, 1, 2), bump_on(iv(1, 4, 1, 2)))};
  CHECK(is_exemplary(single).exemplary);

  Tower good;
  good.levels = {level(iv(1, 4, 1, 2), bump_on(iv(1, 4, 1, 2))),
                 level(iv(1, 8, 3, 4), bump_on(iv(1, 8, 3, 4)))};
  CHECK(is_exemplary(good).exemplary);

  // Lower orbital shares the end 1/8 of the upper orbital: condition 2.
  Tower shares;
  shares.levels = {level(iv(1, 8, 3, 8), bump_on(iv(1, 8, 3, 8))),
                   level(iv(1, 8, 3, 4), bump_on(iv(1, 8, 3, 4)))};
  auto rep = is_exemplary(shares);
  CHECK(!rep.exemplary);
  CHECK(rep.condition == 2);
  CHECK(rep.offending == iv(1, 8, 3, 8));

  // Another orbital of the lower signature contains an end of the upper
  // orbital: condition 1.
  PLMap lower = compose(bump_on(iv(1, 4, 3, 8)), bump_on(iv(1, 2, 7, 8)));
  Tower contains;
  contains.levels = {level(iv(1, 4, 3, 8), lower), level(iv(1, 8, 3, 4), bump_on(iv(1, 8, 3, 4)))};
  auto rep2 = is_exemplary(contains);
  CHECK(!rep2.exemplary);
  CHECK(rep2.condition == 1);
}

TEST_CASE("conjugate towers preserve height, nesting and exemplary status") {
  Tower t;
  t.levels = {level(iv(1, 4, 1, 2), bump_on(iv(1, 4, 1, 2))),
              level(iv(1, 8, 3, 4), bump_on(iv(1, 8, 3, 4)))};
  PLMap k = PLMap::from_nodes(
      {{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1, 4)}, {Rat(3, 4), Rat(1, 2)}, {Rat(1), Rat(1)}});
  Tower tc = conjugate_tower(t, k);
  CHECK(tc.height() == 2);
  validate_tower(tc);
  CHECK(is_exemplary(tc).exemplary);
  CHECK(tc.levels[0].orbital == Interval{k(Rat(1, 4)), k(Rat(1, 2))});

  Tower back = conjugate_tower(tc, inverse(k));
  CHECK(back.levels[0].orbital == t.levels[0].orbital);
  CHECK(back.levels[0].signature == t.levels[0].signature);
  CHECK(back.levels[1].signature == t.levels[1].signature);

  Tower same = conjugate_tower(t, PLMap::identity());
  CHECK(same.levels[0].signature == t.levels[0].signature);
}

TEST_CASE("fundamental domain criterion") {
  PLMap g = PLMap::from_nodes({{Rat(0), Rat(0)}, {Rat(1, 4), Rat(1, 2)}, {Rat(1), Rat(1)}});
  Interval A = iv(0, 1, 1, 1);
  CHECK(!fits_fundamental_domain(g, A, Rat(1, 16), Rat(1, 8)));  // 1/16*g = 1/8, not beyond
  CHECK(fits_fundamental_domain(g, A, Rat(1, 16), Rat(7, 64)));
  CHECK(fits_fundamental_domain(power(g, 2), A, Rat(1, 16), Rat(1, 8)));
  // Left-moving maps are normalized first.
  CHECK(fits_fundamental_domain(inverse(power(g, 2)), A, Rat(1, 16), Rat(1, 8)));
  CHECK_THROWS_AS(fits_fundamental_domain(g, A, Rat(0), Rat(1, 8)), DomainError);
  CHECK_THROWS_AS(fits_fundamental_domain(g, iv(1, 4, 1, 2), Rat(5, 16), Rat(3, 8)), DomainError);
}

TEST_CASE("derive_tower on a hand-made height-2 tower") {
  // Witness: bump inside one fundamental domain of g^2.
  PLMap g = PLMap::from_nodes({{Rat(0), Rat(0)}, {Rat(1, 4), Rat(1, 2)}, {Rat(1), Rat(1)}});
  PLMap b = bump_on(iv(1, 16, 1, 8));
  GroupSpec G = GroupSpec::checked("", {{"b", b}, {"g", g}});
  Tower t;
  t.levels = {SignedOrbital{iv(1, 16, 1, 8), b, Word::letter(0, 1)},
              SignedOrbital{iv(0, 1, 1, 1), g, Word::letter(1, 1)}};
  auto cert = derive_tower(G, t);
  REQUIRE(cert.tower.height() == 1);
  CHECK(cert.tower.levels[0].orbital == iv(1, 16, 1, 8));
  // The signature is the commutator of b with the powered top map.
  CHECK(cert.tower.levels[0].signature == commutator(b, power(g, 2)));
  replay_certificate(cert);
}

TEST_CASE("derive_tower input checking") {
  PLMap b = bump_on(iv(1, 4, 1, 2));
  GroupSpec G = GroupSpec::checked("", {{"b", b}});
  Tower t;
  t.levels = {SignedOrbital{iv(1, 4, 1, 2), b, Word::letter(0, 1)}};
  CHECK_THROWS_AS(derive_tower(G, t), DomainError);  // height 1

  // Non-exemplary towers are rejected.
  GroupSpec G2 = GroupSpec::checked("", {{"a", bump_on(iv(1, 8, 3, 8))}, {"c", bump_on(iv(1, 8, 3, 4))}});
  Tower bad;
  bad.levels = {SignedOrbital{iv(1, 8, 3, 8), bump_on(iv(1, 8, 3, 8)), Word::letter(0, 1)},
                SignedOrbital{iv(1, 8, 3, 4), bump_on(iv(1, 8, 3, 4)), Word::letter(1, 1)}};
  CHECK_THROWS_AS(derive_tower(G2, bad), DomainError);
}

TEST_CASE("iterated derivation down a wreath tower") {
  for (int k = 2; k <= 4; ++k) {
    GroupSpec W = build_family(FamilyKind::W, k, 1);
    auto depth = depth_lower_bound(W, 1);
    REQUIRE(depth.n == k);
    Tower t = depth.certificate.tower;
    for (int step = 0; step < k - 1; ++step) {
      auto cert = derive_tower(W, t);
      CHECK(cert.tower.height() == t.height() - 1);
      t = cert.tower;
    }
    CHECK(t.height() == 1);
    CHECK(!t.levels[0].signature.is_identity());
  }
}

TEST_CASE("builders reject invalid witnesses") {
  GroupSpec F = f_generators(2);
  ImbalanceWitness bogus{Word::letter(0, 1), F.generators[0].second, iv(0, 1, 1, 1),
                         RealizationTag::TrailingOnly};
  // x0 realizes both ends of (0,1), so this witness is invalid.
  CHECK_THROWS_AS(build_exemplary_tower(F, bogus, 2), DomainError);

  auto good = imbalance_search(F, 1);
  REQUIRE(good.has_value());
  CHECK_THROWS_AS(build_exemplary_tower(F, *good, 0), DomainError);
}

TEST_CASE("imbalance builder: exactness of small runs") {
  GroupSpec F = f_generators(2);
  auto w = imbalance_search(F, 1);
  REQUIRE(w.has_value());
  for (int k = 1; k <= 3; ++k) {
    auto cert = build_exemplary_tower(F, *w, k);
    CHECK(cert.tower.height() == static_cast<std::size_t>(k));
    CHECK(is_exemplary(cert.tower).exemplary);
    validate_tower(cert.tower);
    for (auto& lv : cert.tower.levels) {
      CHECK(iv(0, 1, 1, 1).contains_interval(lv.orbital));
      CHECK(word_to_map(F, *lv.witness) == lv.signature);
    }
    replay_certificate(cert);
  }
}

TEST_CASE("leading-only imbalance witnesses build mirrored towers") {
  // Reflecting the F generators' roles: a group whose witness realizes only
  // the leading end.
  GroupSpec G = GroupSpec::checked("", {{"a", bump_on(iv(0, 1, 3, 4))},
                                        {"t", bump_on(iv(0, 1, 1, 1))}});
  auto w = imbalance_search(G, 1);
  REQUIRE(w.has_value());
  CHECK(w->end == RealizationTag::LeadingOnly);
  auto cert = build_exemplary_tower(G, *w, 4);
  CHECK(cert.tower.height() == 4);
  CHECK(is_exemplary(cert.tower).exemplary);
}

TEST_CASE("inconsistent builder") {
  PLMap h = compose(inverse(bump_on(iv(0, 1, 1, 4))), bump_on(iv(1, 2, 1, 1)));
  GroupSpec G = GroupSpec::checked("", {{"h", h}, {"g", bump_on(iv(0, 1, 1, 1))}});
  auto w = inconsistent_search(G, 1);
  REQUIRE(w.has_value());
  auto cert = build_exemplary_tower(G, *w, 2);
  CHECK(cert.tower.height() == 2);
  CHECK(is_exemplary(cert.tower).exemplary);
  replay_certificate(cert);
}

TEST_CASE("transition builder covers the pure-chain case") {
  GroupSpec G = GroupSpec::checked("", {{"a", bump_on(iv(0, 1, 3, 4))},
                                        {"b", bump_on(iv(1, 2, 1, 1))}});
  auto w = detect_transition_chain(G, 1);
  REQUIRE(w.has_value());
  auto cert = build_exemplary_tower(G, *w, 2);
  CHECK(cert.tower.height() == 2);
  CHECK(is_exemplary(cert.tower).exemplary);
}

TEST_CASE("transition builder: consistent-realization branch") {
  // One generator realizes both ends of the joint orbital moving the same
  // way; the witness pair still interleaves inside it.
  PLMap g = compose(bump_on(iv(0, 1, 1, 2)), bump_on(iv(5, 8, 1, 1)));
  PLMap h = bump_on(iv(3, 8, 3, 4));
  GroupSpec G = GroupSpec::checked("", {{"g", g}, {"h", h}});
  auto w = detect_transition_chain(G, 1);
  REQUIRE(w.has_value());
  auto cert = build_exemplary_tower(G, *w, 2);
  CHECK(cert.tower.height() == 2);
  CHECK(is_exemplary(cert.tower).exemplary);
  replay_certificate(cert);
}

TEST_CASE("depth lower bound") {
  GroupSpec one = GroupSpec::checked("", {{"b", bump_on(iv(1, 4, 1, 2))}});
  auto d1 = depth_lower_bound(one, 4);
  CHECK(d1.n == 1);
  CHECK(d1.certificate.tower.height() == 1);

  GroupSpec W2 = build_family(FamilyKind::W, 2, 1);
  CHECK(depth_lower_bound(W2, 4).n == 2);

  auto dF = depth_lower_bound(f_generators(2), 2, 6);
  CHECK(dF.n == 6);
  CHECK(dF.certificate.tower.height() == 6);
  CHECK(is_exemplary(dF.certificate.tower).exemplary);
}

TEST_CASE("certificate replay detects divergence") {
  GroupSpec F = f_generators(2);
  auto cert = build_exemplary_tower(F, *imbalance_search(F, 1), 2);
  replay_certificate(cert);

  // Tampering with an exponent in the log diverges at that step's level.
  auto tampered = cert;
  for (auto& s : tampered.log)
    if (s.kind == "conjugate" && s.exponent >= 1) {
      s.exponent += 1;
      break;
    }
  CHECK_THROWS_AS(replay_certificate(tampered), VerifyError);

  // Tampering with a recorded node list is also caught.
  auto tampered2 = cert;
  tampered2.tower.levels[0].signature = power(tampered2.tower.levels[0].signature, 2);
  CHECK_THROWS_AS(replay_certificate(tampered2), VerifyError);
}
