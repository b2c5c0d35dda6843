#include <doctest.h>

#include "plhom/error.hpp"
#include "plhom/geometry.hpp"
#include "plhom/groups.hpp"
#include "plhom/wreath.hpp"
#include "test_support.hpp"

using namespace plhom;
using plhom::testsupport::Rng;

namespace {

Interval iv(long al, long ad, long bl, long bd) { return Interval{Rat(al, ad), Rat(bl, bd)}; }

GroupSpec f2() { return f_generators(2); }

}  // namespace

TEST_CASE("words reduce and measure") {
  Word w = Word::letter(0, 2) * Word::letter(0, -2) * Word::letter(1, 3);
  CHECK(w == Word::letter(1, 3));
  CHECK(w.length() == 3);
  CHECK((w * w.inverse()).empty());
  CHECK(Word::letter(0, 1).pow(-3) == Word::letter(0, -3));
  Word c = Word::letter(0, 1).conjugated_by(Word::letter(1, 2));
  CHECK(c.letters().size() == 3);
  CHECK(c.length() == 5);
}

TEST_CASE("word order: length first, then letters with positive before negative") {
  CHECK(word_less(Word::letter(0, 1), Word::letter(0, 2)));
  CHECK(word_less(Word::letter(0, 1), Word::letter(0, -1)));
  CHECK(word_less(Word::letter(0, 1), Word::letter(1, 1)));
  CHECK(word_less(Word::letter(0, 2), Word::letter(0, 1) * Word::letter(1, 1)));
  CHECK(!word_less(Word(), Word()));
}

TEST_CASE("group spec validation") {
  CHECK_THROWS_AS(GroupSpec::checked("", {}), DomainError);
  CHECK_THROWS_AS(GroupSpec::checked("", {{"", PLMap::identity()}}), DomainError);
  CHECK_THROWS_AS(
      GroupSpec::checked("", {{"a", PLMap::identity()}, {"a", PLMap::identity()}}),
      DomainError);
}

TEST_CASE("group orbitals") {
  GroupSpec id = GroupSpec::checked("", {{"e", PLMap::identity()}});
  CHECK(group_orbitals(id).empty());

  CHECK(group_orbitals(f2()) == std::vector<Interval>{iv(0, 1, 1, 1)});

  GroupSpec disjoint = GroupSpec::checked("", {{"a", bump_on(iv(1, 8, 1, 4))},
                                               {"b", bump_on(iv(1, 2, 3, 4))}});
  CHECK(group_orbitals(disjoint) == std::vector<Interval>{iv(1, 8, 1, 4), iv(1, 2, 3, 4)});

  // Touching orbitals stay separate components; the shared point is fixed.
  GroupSpec touching = GroupSpec::checked("", {{"a", bump_on(iv(0, 1, 1, 2))},
                                               {"b", bump_on(iv(1, 2, 1, 1))}});
  CHECK(group_orbitals(touching).size() == 2);
}

TEST_CASE("orbit containment: short words stay inside their group orbital") {
  Rng rng(31);
  GroupSpec F = f2();
  auto enumeration = enumerate_elements(F, 6);
  Interval A = group_orbitals(F)[0];
  std::uniform_int_distribution<std::size_t> pick(0, enumeration.elements.size() - 1);
  for (int i = 0; i < 120; ++i) {
    Rat x = plhom::testsupport::random_dyadic(rng);
    const Element& e = enumeration.elements[pick(rng)];
    CHECK(A.contains(e.map(x)));
  }
}

TEST_CASE("find_mover: single-generator case") {
  GroupSpec G = GroupSpec::checked("", {{"b", bump_on(iv(0, 1, 1, 1))}});
  auto mv = find_mover(G, iv(0, 1, 1, 1), Rat(1, 8), Rat(7, 8));
  CHECK(mv.map(Rat(1, 8)) > Rat(7, 8));
  REQUIRE(mv.word.letters().size() == 1);
  CHECK(mv.word.letters()[0].exponent >= 1);
}

TEST_CASE("find_mover: two-orbital greedy cover") {
  GroupSpec G = GroupSpec::checked("", {{"g1", bump_on(iv(0, 1, 5, 8))},
                                        {"g2", bump_on(iv(3, 8, 1, 1))}});
  auto mv = find_mover(G, iv(0, 1, 1, 1), Rat(1, 4), Rat(3, 4));
  CHECK(mv.map(Rat(1, 4)) > Rat(3, 4));
  REQUIRE(mv.word.letters().size() == 2);
  for (auto& l : mv.word.letters()) CHECK(l.exponent >= 1);  // both bumps move right
  CHECK(word_to_map(G, mv.word) == mv.map);
}

TEST_CASE("find_mover: inverted generators are used when the bump moves left") {
  GroupSpec G = GroupSpec::checked("", {{"b", inverse(bump_on(iv(0, 1, 1, 1)))}});
  auto mv = find_mover(G, iv(0, 1, 1, 1), Rat(1, 8), Rat(1, 2));
  CHECK(mv.map(Rat(1, 8)) > Rat(1, 2));
  REQUIRE(mv.word.letters().size() == 1);
  CHECK(mv.word.letters()[0].exponent <= -1);
}

TEST_CASE("find_mover rejects bad inputs") {
  GroupSpec G = GroupSpec::checked("", {{"b", bump_on(iv(1, 4, 1, 2))}});
  CHECK_THROWS_AS(find_mover(G, iv(0, 1, 1, 1), Rat(1, 8), Rat(1, 2)), DomainError);
  CHECK_THROWS_AS(find_mover(G, iv(1, 4, 1, 2), Rat(3, 8), Rat(3, 8)), DomainError);
}

TEST_CASE("classify_realization") {
  GroupSpec F = f2();
  const PLMap& x1 = F.generators[1].second;
  CHECK(classify_realization(x1, iv(0, 1, 1, 1)).tag == RealizationTag::TrailingOnly);
  CHECK(classify_realization(bump_on(iv(1, 4, 1, 2)), iv(0, 1, 1, 1)).tag == RealizationTag::NoEnd);
  CHECK(classify_realization(bump_on(iv(0, 1, 1, 1)), iv(0, 1, 1, 1)).tag ==
        RealizationTag::ConsistentBoth);

  PLMap inc = compose(inverse(bump_on(iv(0, 1, 1, 4))), bump_on(iv(1, 2, 1, 1)));
  auto cls = classify_realization(inc, iv(0, 1, 1, 1));
  CHECK(cls.tag == RealizationTag::InconsistentBoth);
  CHECK(cls.leading->direction == Direction::Left);
  CHECK(cls.trailing->direction == Direction::Right);

  // Straddling orbital: hard error, not a guess.
  CHECK_THROWS_AS(classify_realization(bump_on(iv(1, 4, 3, 4)), iv(1, 2, 1, 1)), DomainError);
}

TEST_CASE("realization class is stable under powers") {
  PLMap inc = compose(inverse(bump_on(iv(0, 1, 1, 4))), bump_on(iv(1, 2, 1, 1)));
  Interval A = iv(0, 1, 1, 1);
  CHECK(classify_realization(power(inc, 3), A).tag == RealizationTag::InconsistentBoth);
  CHECK(classify_realization(power(inc, -2), A).tag == RealizationTag::InconsistentBoth);
  PLMap cons = bump_on(A);
  CHECK(classify_realization(power(cons, 2), A).tag == RealizationTag::ConsistentBoth);
  CHECK(classify_realization(power(cons, -3), A).tag == RealizationTag::ConsistentBoth);
}

TEST_CASE("transition chain detection") {
  GroupSpec interleaved = GroupSpec::checked("", {{"a", bump_on(iv(0, 1, 3, 4))},
                                                  {"b", bump_on(iv(1, 2, 1, 1))}});
  auto w = detect_transition_chain(interleaved, 1);
  REQUIRE(w.has_value());
  CHECK(w->first.orbital == iv(0, 1, 3, 4));
  CHECK(w->second.orbital == iv(1, 2, 1, 1));
  CHECK(w->first.orbital.left < w->second.orbital.left);
  CHECK(w->second.orbital.left < w->first.orbital.right);
  CHECK(w->first.orbital.right < w->second.orbital.right);

  GroupSpec nested = GroupSpec::checked("", {{"a", bump_on(iv(1, 4, 1, 2))},
                                             {"b", bump_on(iv(1, 8, 3, 4))}});
  CHECK(!detect_transition_chain(nested, 1).has_value());

  // Thompson's group: no witness at L=1, one appears at L=2.
  CHECK(!detect_transition_chain(f2(), 1).has_value());
  auto fw = detect_transition_chain(f2(), 2);
  REQUIRE(fw.has_value());
  CHECK(fw->first.orbital.left < fw->second.orbital.left);
  CHECK(fw->second.orbital.left < fw->first.orbital.right);
  CHECK(fw->first.orbital.right < fw->second.orbital.right);
  CHECK(word_to_map(f2(), *fw->first.witness) == fw->first.signature);
}

TEST_CASE("imbalance search") {
  auto w = imbalance_search(f2(), 1);
  REQUIRE(w.has_value());
  CHECK(w->orbital == iv(0, 1, 1, 1));
  CHECK(w->end == RealizationTag::TrailingOnly);
  CHECK(word_to_string(f2(), w->word) == "x1");

  GroupSpec one = GroupSpec::checked("", {{"b", bump_on(iv(0, 1, 1, 1))}});
  CHECK(!imbalance_search(one, 3).has_value());
  GroupSpec small = GroupSpec::checked("", {{"b", bump_on(iv(1, 4, 1, 2))}});
  CHECK(!imbalance_search(small, 3).has_value());
}

TEST_CASE("inconsistent search") {
  PLMap inc = compose(inverse(bump_on(iv(0, 1, 1, 4))), bump_on(iv(1, 2, 1, 1)));
  GroupSpec G = GroupSpec::checked("", {{"h", inc}, {"g", bump_on(iv(0, 1, 1, 1))}});
  auto w = inconsistent_search(G, 1);
  REQUIRE(w.has_value());
  CHECK(w->orbital == iv(0, 1, 1, 1));
  CHECK(!inconsistent_search(GroupSpec::checked("", {{"b", bump_on(iv(0, 1, 1, 1))}}), 2)
             .has_value());
}
