#pragma once

#include <string>
#include <variant>
#include <vector>

#include "plhom/geometry.hpp"

namespace plhom {

/// A finite chain of signed orbitals under proper orbital nesting, stored
/// smallest orbital first. Height = number of levels.
struct Tower {
  std::vector<SignedOrbital> levels;
  std::size_t height() const { return levels.size(); }
};

/// Checks the chain condition (distinct, properly nested orbitals) and that
/// each level's interval is an orbital of its signature. Throws DomainError.
void validate_tower(const Tower& T);

struct ExemplaryReport {
  bool exemplary = true;
  std::size_t lower = 0, upper = 0;  // offending pair of levels (indices)
  Interval offending;                // the orbital of the lower signature at fault
  int condition = 0;                 // 1: contains an end, 2: shares an end from inside
  std::string describe() const;
};

/// A tower is exemplary when, for every pair of levels (A,g) <= (B,h), no
/// orbital of g contains an end of B and no orbital of g inside B shares an
/// end with B.
ExemplaryReport is_exemplary(const Tower& T);

/// Image tower under k: orbitals are k-images, signatures k-conjugates.
/// Word provenance is dropped unless the conjugator's word is supplied.
Tower conjugate_tower(const Tower& T, const PLMap& k);

/// Decides whether the closed interval S = [s_lo, s_hi] fits inside a single
/// fundamental domain [x, x*g) of g on its orbital A; with g normalized to
/// move points rightward this is exactly evaluate(g, s_lo) > s_hi.
bool fits_fundamental_domain(const PLMap& g, const Interval& A, const Rat& s_lo, const Rat& s_hi);

/// One step of a replayable construction log. "word" defines an element
/// directly as a word over the certificate's group; the remaining define
/// ops combine previously defined names. "level" appends a tower level.
struct LogStep {
  std::string kind;  // word | inverse | power | product | conjugate | commutator | level | note
  std::string name;  // defined symbol
  Word word;
  std::string a, b;                  // operands (base / by, or commutator arguments)
  std::vector<std::string> factors;  // product operands
  long exponent = 0;                 // power exponent, or the conjugator's power
  int level = -1;
  Interval orbital;
  std::string element;  // level signature symbol
  std::string note;
};

/// A tower with the construction log that produced it. Replaying the log
/// over the stored group must reproduce the tower exactly.
struct TowerCertificate {
  GroupSpec group;
  Tower tower;
  std::vector<LogStep> log;
  bool exemplary_claimed = false;
};

/// Re-executes the construction log and checks the reproduced tower against
/// the stored one (orbitals, words, node lists), then re-validates the
/// tower and the exemplary claim. Throws VerifyError at the first
/// divergence, carrying the step index.
void replay_certificate(const TowerCertificate& cert);

/// All (orbital, map, word) triples over deduplicated non-identity words of
/// length <= L.
std::vector<SignedOrbital> signed_orbitals_up_to(const GroupSpec& G, long L,
                                                 const GroupSearchConfig& caps = {});

/// A longest chain of properly nested orbitals selectable from S, one
/// signature per orbital. Ties prefer the lexicographically smallest
/// sequence of left endpoints, then right endpoints, then the signature
/// smallest in the left order.
Tower max_tower(const std::vector<SignedOrbital>& S);

struct BuildLimits {
  long max_steps = 1L << 20;  // total exponent-search iterations per build
};

/// The derivation step behind the depth/derived-length correspondence:
/// given an exemplary tower of height n >= 2 (signatures normalized to move
/// rightward on their orbitals), powers each signature so the level below
/// fits one fundamental domain, then replaces levels with commutators.
/// The result has height n-1 and every signature lies in the derived
/// subgroup; it is returned with a replayable certificate.
TowerCertificate derive_tower(const GroupSpec& G, const Tower& T, const BuildLimits& lim = {});

using BuildWitness = std::variant<ImbalanceWitness, InconsistentWitness, TransitionChainWitness>;

/// Constructs an exemplary tower of height exactly k whose orbitals all lie
/// inside the witness's ambient group orbital, replaying the constructive
/// proof matching the witness kind. The log records every exponent chosen.
TowerCertificate build_exemplary_tower(const GroupSpec& G, const BuildWitness& witness, int k,
                                       const BuildLimits& lim = {});

struct DepthBound {
  int n = 0;
  TowerCertificate certificate;
};

/// Certified depth lower bound: the best tower over words of length <= L,
/// pushed to k_target levels through a constructive builder whenever an
/// imbalance / inconsistency / transition-chain witness is found.
DepthBound depth_lower_bound(const GroupSpec& G, long L, std::optional<int> k_target = {},
                             const GroupSearchConfig& caps = {}, const BuildLimits& lim = {});

}  // namespace plhom
