#pragma once

#include <optional>
#include <vector>

#include "plhom/towers.hpp"

namespace plhom {

struct EnumerationResult {
  std::vector<Element> elements;  // breadth-first: by length, then lexicographic
  bool truncated = false;
};

/// All distinct group elements representable by words of length <= L,
/// deduplicated by canonical node-list equality, each with a shortest
/// witnessing word (ties resolved lexicographically). The identity with the
/// empty word comes first. Throws ResourceError on the element cap when
/// caps.strict, otherwise truncates and flags.
EnumerationResult enumerate_elements(const GroupSpec& G, long L, const GroupSearchConfig& caps = {});

struct DerivedSample {
  std::vector<Element> elements;  // nontrivial sampled members of the level
  bool truncated = false;
};

/// Samples the derived series: level 1 collects commutators of pairs of
/// enumerated elements, level i commutators of pairs from the level i-1
/// sample. Identity results are dropped; caps bound the sampling.
DerivedSample derived_sample(const GroupSpec& G, int level, long L, const GroupSearchConfig& caps = {});

/// Standard generators of the Thompson group F_n realized with slopes in
/// powers of n and breaks in n-adic rationals; n = 2 gives the classical
/// pair. Requires n >= 2.
GroupSpec f_generators(int n);

/// The defining relation family x_j^{x_i} = x_{j+n-1} for i < j, checked by
/// exact composition; returns the first violated relation if any.
std::optional<std::string> f_relator_violation(int n);

enum class VerdictKind { NonsolvableCertified, DerivedLengthAtLeast, InconclusiveUpTo };
enum class CertificateKind { Imbalance, TransitionChain, Inconsistent };

const char* to_string(VerdictKind v);
const char* to_string(CertificateKind k);

struct DerivedLevelStatus {
  int level = 0;
  bool nontrivial_found = false;
  std::optional<Word> witness;
};

struct AnalyzeConfig {
  long L = 4;
  std::optional<int> k_target;
  GroupSearchConfig caps;
  BuildLimits build;
};

/// Everything the pipeline can certify about a group at a given search
/// level: orbitals, witnesses, a depth lower bound with its tower
/// certificate, derived-series sampling, and the combined verdict.
struct AnalysisReport {
  std::vector<Interval> orbitals;
  std::optional<TransitionChainWitness> transition_chain;
  std::optional<ImbalanceWitness> imbalance;
  std::optional<InconsistentWitness> inconsistent;
  int depth_lower_bound = 0;
  std::optional<TowerCertificate> certificate;
  std::vector<DerivedLevelStatus> derived_series;
  VerdictKind verdict = VerdictKind::DerivedLengthAtLeast;
  CertificateKind verdict_certificate = CertificateKind::Imbalance;  // when NonsolvableCertified
  int verdict_n = 0;                                                 // when DerivedLengthAtLeast
  long verdict_L = 0;                                                // when InconclusiveUpTo
  bool truncated = false;
  /// Depth bound n was accompanied by a nontrivial derived element at every
  /// level below n (sampled, or extracted by iterated tower derivation).
  bool cross_check_ok = true;
  AnalyzeConfig config;
};

AnalysisReport analyze(const GroupSpec& G, const AnalyzeConfig& config = {});

}  // namespace plhom
