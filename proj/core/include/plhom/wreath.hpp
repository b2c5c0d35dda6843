#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plhom/error.hpp"
#include "plhom/groups.hpp"

namespace plhom {

/// One-orbital building block on A = (a,b): the map through
/// (a,a), (a + (b-a)/4, a + (b-a)/2), (b,b), identity outside A.
/// Single orbital A moving right, edge slopes (2, 2/3).
PLMap bump_on(const Interval& A);

/// Affine copy of f supported in A, identity outside. Conjugation by the
/// affine identification of [0,1] with [a,b], so it commutes with
/// composition: rescale_into(compose(f,g), A) equals the composition of the
/// rescaled maps.
PLMap rescale_into(const PLMap& f, const Interval& A);

/// A wreath product with Z realized on an interval: the top generator is a
/// bump on the ambient interval, the base generators are rescaled into one
/// of its fundamental domains, and conjugation by the top map shifts copies.
struct WreathRealization {
  std::vector<std::pair<std::string, PLMap>> base_generators;
  std::pair<std::string, PLMap> top_generator;
  Interval ambient;
  int copies_materialized = 1;

  GroupSpec group() const;
  /// Copy j of base generator i: the conjugate by the j-th power of the top.
  PLMap copy(std::size_t base_index, int j) const;
};

WreathRealization wreath_with_Z(const GroupSpec& G, const Interval& ambient, int copies);

enum class FamilyKind { W, G };

/// Iterated wreath families: W_i = W_{i-1} wr Z and the truncated direct
/// sums G_i = sum over m side-by-side copies of (G_{i-1} wr Z) placed in
/// disjoint equal subintervals. Generator names carry the nesting level
/// ("t1".."ti", innermost first) and, for kind G, "@j" copy suffixes.
GroupSpec build_family(FamilyKind kind, int i, int m);

struct EfficiencyCheck {
  bool ok = true;
  std::optional<Interval> violating;  // the containing orbital where the fit fails
  std::string detail;
};

/// Mutual efficiency: whenever an orbital of one map properly contains an
/// orbital of the other, the other's support there fits a single
/// fundamental domain. Requires the two orbital families to pairwise nest
/// or coincide (DomainError otherwise, naming the interleaved pair).
EfficiencyCheck mutual_efficiency(const PLMap& h, const PLMap& k);

/// Smallest exponent pair (j, k), lexicographic, with
/// mutual_efficiency(power(h,j), power(k,k)) true. The two sides are
/// independent, so the lexicographic minimum is the pair of per-side minima.
std::pair<long, long> efficiency_exponents(const PLMap& h, const PLMap& k, long cap = 1L << 16);

struct DcEntry {
  Interval orbital;
  std::string classification;
};

struct DcReport {
  PLMap f;  // the double commutator [[h,k],k]
  bool nested_orbitals_preserved = true;   // h-orbitals properly inside k-orbitals are f-orbitals
  bool orbitals_confined = true;           // f-orbitals sit properly inside k-orbitals meeting h
  std::vector<DcEntry> entries;
};

/// Checks both structural properties of the double commutator against the
/// exactly computed orbital sets. Requires mutual_efficiency(h, k).
DcReport dc_properties_check(const PLMap& h, const PLMap& k);

struct ObstructionBounds {
  long theta_exponent_bound = 32;
  long efficiency_cap = 1L << 16;
  long max_steps = 1L << 20;
};

struct ObstructionLogEntry {
  std::string note;
  std::optional<PLMap> map;  // intermediate element, when one was produced
};

struct ObstructionResult {
  std::vector<ObstructionLogEntry> log;
  PLMap gamma_final;
};

/// Improvement loop raised by the commuting pair (alpha, beta): repeatedly
/// replaces gamma by double commutators against beta and against products
/// theta = alpha^m beta^n that die on each shared orbital, ending with a
/// nontrivial gamma' whose support misses the support of alpha entirely and
/// which therefore commutes with alpha. All postconditions are checked.
ObstructionResult obstruction_demo(const PLMap& alpha, const PLMap& beta, const PLMap& gamma,
                                   const ObstructionBounds& bounds = {});

/// gamma became trivial during an improvement step (documented degenerate
/// input: the loop's guarantees presuppose a genuine wreath structure).
struct ObstructionDegenerateError : Error {
  explicit ObstructionDegenerateError(std::vector<ObstructionLogEntry> log_)
      : Error("gamma became trivial during improvement (degenerate input)"), log(std::move(log_)) {}
  std::vector<ObstructionLogEntry> log;
};

/// No exponent pair within bounds produced a product trivial on the shared
/// orbital; the search is inconclusive for that orbital.
struct ObstructionInconclusiveError : Error {
  ObstructionInconclusiveError(const Interval& A, std::vector<ObstructionLogEntry> log_)
      : Error("theta search inconclusive on shared orbital (" + A.left.str() + ", " +
              A.right.str() + ")"),
        orbital(A),
        log(std::move(log_)) {}
  Interval orbital;
  std::vector<ObstructionLogEntry> log;
};

}  // namespace plhom
