#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plhom/plmap.hpp"

namespace plhom {

/// A letter block of a word: generator index raised to a nonzero exponent.
struct Letter {
  int generator;
  long exponent;
  friend bool operator==(const Letter& a, const Letter& b) {
    return a.generator == b.generator && a.exponent == b.exponent;
  }
};

/// Freely reduced word over the generators of some GroupSpec: adjacent
/// letters always name distinct generators. The empty word is the identity.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);  // merges and drops as needed
  static Word letter(int generator, long exponent);

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  /// Sum of the absolute exponents.
  long length() const;

  Word operator*(const Word& o) const;  // concatenation with reduction
  Word inverse() const;
  Word pow(long n) const;
  Word conjugated_by(const Word& h) const { return h.inverse() * *this * h; }

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }

 private:
  std::vector<Letter> letters_;
};

/// Orders words by length, then lexicographically over single letters with
/// generator index ascending and positive sign before negative.
bool word_less(const Word& a, const Word& b);

/// A finitely generated subgroup, presented by named generator maps.
struct GroupSpec {
  std::string name;
  std::vector<std::pair<std::string, PLMap>> generators;

  static GroupSpec checked(std::string name, std::vector<std::pair<std::string, PLMap>> gens);
  std::size_t size() const { return generators.size(); }
};

PLMap word_to_map(const GroupSpec& G, const Word& w);
std::string word_to_string(const GroupSpec& G, const Word& w);

/// A group element together with the word that produced it.
struct Element {
  Word word;
  PLMap map;
};

/// Rewrites a word over derived generators into a word over the ambient
/// group's generators by substituting each derived generator's word.
Word word_substitute(const Word& w, const std::vector<Element>& derived_generators);

/// An interval paired with an element having it as an orbital; the element
/// is the signature, the optional word its provenance.
struct SignedOrbital {
  Interval orbital;
  PLMap signature;
  std::optional<Word> witness;
};

/// Two signed orbitals with strictly interleaved endpoints:
/// first = (a1, a2), second = (b1, b2) with a1 < b1 < a2 < b2.
struct TransitionChainWitness {
  SignedOrbital first, second;
};

enum class RealizationTag { NoEnd, LeadingOnly, TrailingOnly, ConsistentBoth, InconsistentBoth };

const char* to_string(RealizationTag t);

/// How an element h realizes the ends of a fixed interval A: which ends of
/// A are shared by orbitals of h inside A, and with what movement.
struct RealizationClass {
  RealizationTag tag;
  std::optional<Orbital> leading;   // orbital of h sharing the leading end
  std::optional<Orbital> trailing;  // orbital of h sharing the trailing end
};

struct ImbalanceWitness {
  Word word;
  PLMap map;
  Interval orbital;        // the group orbital realized at one end only
  RealizationTag end;      // LeadingOnly or TrailingOnly
};

struct InconsistentWitness {
  Word word;
  PLMap map;
  Interval orbital;  // realized at both ends with opposite movement
};

/// Orbitals of the group: connected components of the union of the
/// generator supports, left to right. Every component is invariant under
/// each generator and every point of it is moved by some generator.
std::vector<Interval> group_orbitals(const GroupSpec& G);
std::vector<Interval> group_orbitals_of(const std::vector<PLMap>& maps);

struct SearchLimits {
  long max_steps = 1L << 20;  // shared budget for exponent iteration
};

/// An element g of the group with evaluate(g, c) > d, built as a product of
/// positive powers of (possibly inverted) generators along a minimal chain
/// of generator orbitals covering [c, d]. Requires c < d with [c,d] inside
/// the group orbital A.
Element find_mover(const GroupSpec& G, const Interval& A, const Rat& c, const Rat& d,
                   const SearchLimits& lim = {});

/// Same search over arbitrary elements (words already expressed over some
/// ambient group); A must be a component of the union of their supports.
Element find_mover_over(const std::vector<Element>& gens, const Interval& A, const Rat& c,
                        const Rat& d, const SearchLimits& lim = {});

/// Classifies which ends of A are realized by h. Every orbital of h that
/// meets A must lie inside A; a straddling orbital raises DomainError.
RealizationClass classify_realization(const PLMap& h, const Interval& A);

struct GroupSearchConfig {
  long max_word_length = 8;
  std::size_t max_elements = 50000;
  std::size_t max_commutators_per_level = 200000;
  /// Breadth kept per derived level; sampling stops early once reached.
  std::size_t max_sample_per_level = 4000;
  bool strict = false;  // throw ResourceError on caps instead of truncating
};

/// Searches words of length <= L for a pair of signed orbitals with
/// strictly interleaved endpoints. Absence only means "none up to L".
std::optional<TransitionChainWitness> detect_transition_chain(const GroupSpec& G, long L,
                                                              const GroupSearchConfig& caps = {});

/// Searches words of length <= L for an element realizing exactly one end
/// of a group orbital: a certificate of imbalance, hence of non-solvability.
std::optional<ImbalanceWitness> imbalance_search(const GroupSpec& G, long L,
                                                 const GroupSearchConfig& caps = {});

/// Searches words of length <= L for an element realizing both ends of a
/// group orbital with opposite movement.
std::optional<InconsistentWitness> inconsistent_search(const GroupSpec& G, long L,
                                                       const GroupSearchConfig& caps = {});

}  // namespace plhom
