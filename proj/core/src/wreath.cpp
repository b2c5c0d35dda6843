#include "plhom/wreath.hpp"

#include <algorithm>
#include <sstream>

#include "plhom/error.hpp"

namespace plhom {

PLMap bump_on(const Interval& A) {
  const Rat& a = A.left;
  const Rat& b = A.right;
  Rat w = A.width();
  std::vector<Node> nodes;
  nodes.push_back({Rat(0), Rat(0)});
  if (a != Rat(0)) nodes.push_back({a, a});
  nodes.push_back({a + w / Rat(4), a + w / Rat(2)});
  if (b != Rat(1)) nodes.push_back({b, b});
  nodes.push_back({Rat(1), Rat(1)});
  return PLMap::from_nodes(std::move(nodes));
}

PLMap rescale_into(const PLMap& f, const Interval& A) {
  const Rat& a = A.left;
  Rat w = A.width();
  std::vector<Node> nodes;
  nodes.push_back({Rat(0), Rat(0)});
  if (a != Rat(0)) nodes.push_back({a, a});
  for (const Node& n : f.nodes()) {
    if (n.x == Rat(0) || n.x == Rat(1)) continue;
    nodes.push_back({a + w * n.x, a + w * n.y});
  }
  if (A.right != Rat(1)) nodes.push_back({A.right, A.right});
  nodes.push_back({Rat(1), Rat(1)});
  return PLMap::from_nodes(std::move(nodes));
}

GroupSpec WreathRealization::group() const {
  std::vector<std::pair<std::string, PLMap>> gens = base_generators;
  gens.push_back(top_generator);
  return GroupSpec::checked("", std::move(gens));
}

PLMap WreathRealization::copy(std::size_t base_index, int j) const {
  if (base_index >= base_generators.size())
    throw DomainError("wreath copy: base generator index out of range");
  return conjugate(base_generators[base_index].second, power(top_generator.second, j));
}

WreathRealization wreath_with_Z(const GroupSpec& G, const Interval& ambient, int copies) {
  if (copies < 1) throw DomainError("wreath_with_Z: copies must be >= 1");
  PLMap top = bump_on(ambient);
  Rat x0 = ambient.left + ambient.width() / Rat(4);
  Interval fd{x0, top(x0)};  // one fundamental domain [x0, x0*t)

  WreathRealization out;
  out.ambient = ambient;
  out.copies_materialized = copies;
  for (auto& [name, m] : G.generators) out.base_generators.emplace_back(name, rescale_into(m, fd));
  std::string tname = "t";
  for (int suffix = 1;; ++suffix) {
    bool clash = false;
    for (auto& [name, m] : out.base_generators) clash = clash || name == tname;
    if (!clash) break;
    tname = "t" + std::to_string(suffix);
  }
  out.top_generator = {tname, std::move(top)};
  return out;
}

namespace {

constexpr std::size_t kNodeCap = 100000;

void check_node_cap(const std::vector<std::pair<std::string, PLMap>>& gens) {
  std::size_t total = 0;
  for (auto& [name, m] : gens) total += m.nodes().size();
  if (total > kNodeCap)
    throw ResourceError("build_family: generator node count " + std::to_string(total) +
                        " exceeds cap " + std::to_string(kNodeCap));
}

// Generators of G_i realized on (0,1), copies suffixed "@j".
std::vector<std::pair<std::string, PLMap>> family_g(int i, int m) {
  if (i == 0) return {};
  auto sub = family_g(i - 1, m);
  // One block: (G_{i-1} wr Z) on (0,1).
  PLMap top = bump_on(Interval{Rat(0), Rat(1)});
  Rat x0(1, 4);
  Interval fd{x0, top(x0)};
  std::vector<std::pair<std::string, PLMap>> block;
  for (auto& [name, map] : sub) block.emplace_back(name, rescale_into(map, fd));
  block.emplace_back("t" + std::to_string(i), std::move(top));
  // m disjoint copies in equal subintervals.
  std::vector<std::pair<std::string, PLMap>> out;
  for (int j = 1; j <= m; ++j) {
    Interval slot{Rat(j - 1, m), Rat(j, m)};
    for (auto& [name, map] : block)
      out.emplace_back(name + "@" + std::to_string(j), rescale_into(map, slot));
  }
  return out;
}

}  // namespace

GroupSpec build_family(FamilyKind kind, int i, int m) {
  if (i < 1) throw DomainError("build_family: index must be >= 1");
  if (m < 1) throw DomainError("build_family: truncation must be >= 1");
  if (kind == FamilyKind::W) {
    // W_i = W_{i-1} wr Z, iterated from the innermost level outward.
    std::vector<std::pair<std::string, PLMap>> gens;
    for (int level = 1; level <= i; ++level) {
      PLMap top = bump_on(Interval{Rat(0), Rat(1)});
      Rat x0(1, 4);
      Interval fd{x0, top(x0)};
      for (auto& [name, map] : gens) map = rescale_into(map, fd);
      gens.emplace_back("t" + std::to_string(level), std::move(top));
      check_node_cap(gens);
    }
    // Rescaling pushed the earlier levels inward, so the order is already
    // t1 (innermost) through ti (the ambient bump).
    return GroupSpec::checked("W_" + std::to_string(i), std::move(gens));
  }
  auto gens = family_g(i, m);
  if (gens.empty()) throw DomainError("build_family: empty family");
  check_node_cap(gens);
  return GroupSpec::checked("G_" + std::to_string(i) + "_m" + std::to_string(m), std::move(gens));
}

namespace {

PLMap rightward_on(const PLMap& f, const Interval& A) {
  for (auto& o : orbitals_of_map(f))
    if (o.interval == A) return o.direction == Direction::Right ? f : inverse(f);
  std::ostringstream os;
  os << "interval " << A << " is not an orbital of the map";
  throw DomainError(os.str());
}

void check_nesting_precondition(const PLMap& h, const PLMap& k, const char* who) {
  auto oh = orbital_intervals(h);
  auto ok = orbital_intervals(k);
  for (const Interval& A : oh)
    for (const Interval& B : ok) {
      if (!intervals_overlap(A, B)) continue;
      if (A == B || B.contains_closure(A) || A.contains_closure(B)) continue;
      std::ostringstream os;
      os << who << ": orbitals " << A << " and " << B << " interleave";
      throw DomainError(os.str());
    }
}

}  // namespace

EfficiencyCheck mutual_efficiency(const PLMap& h, const PLMap& k) {
  check_nesting_precondition(h, k, "mutual_efficiency");
  EfficiencyCheck out;
  auto one_side = [&](const PLMap& outer, const PLMap& inner, const char* label) {
    for (const Interval& C : orbital_intervals(outer)) {
      bool contains_inner = false;
      for (const Interval& B : orbital_intervals(inner))
        if (C.properly_contains(B)) contains_inner = true;
      if (!contains_inner) continue;
      auto hull = support_hull_in(inner, C);
      if (!hull) continue;
      if (!fits_fundamental_domain(outer, C, hull->first, hull->second)) {
        out.ok = false;
        out.violating = C;
        std::ostringstream os;
        os << "support of " << label << " in " << C << " spans more than one fundamental domain";
        out.detail = os.str();
        return false;
      }
    }
    return true;
  };
  if (!one_side(h, k, "the second map")) return out;
  one_side(k, h, "the first map");
  return out;
}

std::pair<long, long> efficiency_exponents(const PLMap& h, const PLMap& k, long cap) {
  check_nesting_precondition(h, k, "efficiency_exponents");
  // The two sides are independent: powering h only widens its fundamental
  // domains and leaves every support unchanged.
  auto side_min = [&](const PLMap& outer, const PLMap& inner) {
    long need = 1;
    for (const Interval& C : orbital_intervals(outer)) {
      bool contains_inner = false;
      for (const Interval& B : orbital_intervals(inner))
        if (C.properly_contains(B)) contains_inner = true;
      if (!contains_inner) continue;
      auto hull = support_hull_in(inner, C);
      if (!hull) continue;
      PLMap fwd = rightward_on(outer, C);
      Rat val = hull->first;
      long e = 0;
      do {
        if (++e > cap)
          throw ResourceError("efficiency_exponents: cap " + std::to_string(cap) + " exhausted");
        val = fwd(val);
      } while (!(val > hull->second));
      need = std::max(need, e);
    }
    return need;
  };
  return {side_min(h, k), side_min(k, h)};
}

DcReport dc_properties_check(const PLMap& h, const PLMap& k) {
  {
    auto eff = mutual_efficiency(h, k);
    if (!eff.ok) throw DomainError("dc_properties_check: " + eff.detail);
  }
  DcReport rep;
  rep.f = double_commutator(h, k);
  auto of = orbital_intervals(rep.f);
  auto oh = orbital_intervals(h);
  auto ok = orbital_intervals(k);
  auto is_orbital_of_f = [&](const Interval& A) {
    return std::find(of.begin(), of.end(), A) != of.end();
  };
  for (const Interval& A : oh) {
    bool nested = false;
    for (const Interval& B : ok)
      if (B.properly_contains(A)) nested = true;
    if (!nested) continue;
    std::ostringstream os;
    bool kept = is_orbital_of_f(A);
    os << "orbital of h properly inside an orbital of k: " << (kept ? "preserved by f" : "LOST by f");
    rep.entries.push_back({A, os.str()});
    if (!kept) rep.nested_orbitals_preserved = false;
  }
  for (const Interval& C : of) {
    bool confined = false;
    for (const Interval& B : ok) {
      if (!B.properly_contains(C)) continue;
      for (const Interval& A : oh)
        if (B.contains_interval(A)) confined = true;
    }
    std::ostringstream os;
    os << "orbital of f: " << (confined ? "properly inside an orbital of k meeting h"
                                        : "NOT confined to an orbital of k meeting h");
    rep.entries.push_back({C, os.str()});
    if (!confined) rep.orbitals_confined = false;
  }
  return rep;
}

namespace {

void obstruction_note(std::vector<ObstructionLogEntry>& log, std::string text) {
  log.push_back({std::move(text), std::nullopt});
}

void obstruction_note_map(std::vector<ObstructionLogEntry>& log, std::string text, PLMap m) {
  log.push_back({std::move(text), std::move(m)});
}

}  // namespace

ObstructionResult obstruction_demo(const PLMap& alpha, const PLMap& beta, const PLMap& gamma,
                                   const ObstructionBounds& bounds) {
  std::vector<ObstructionLogEntry> log;
  if (!commutator(alpha, beta).is_identity())
    throw DomainError("obstruction_demo: alpha and beta do not commute");
  if (gamma.is_identity()) throw DomainError("obstruction_demo: gamma is trivial");
  obstruction_note_map(log, "alpha", alpha);
  obstruction_note_map(log, "beta", beta);
  obstruction_note_map(log, "gamma", gamma);

  // Step 1: confine gamma to the orbitals of beta.
  auto [j1, k1] = efficiency_exponents(gamma, beta, bounds.efficiency_cap);
  obstruction_note(log, "efficiency exponents against beta: (j, k) = (" + std::to_string(j1) +
                            ", " + std::to_string(k1) + ")");
  PLMap cur = double_commutator(power(gamma, j1), power(beta, k1));
  obstruction_note_map(log, "gamma <- [[gamma^j, beta^k], beta^k]", cur);
  if (cur.is_identity()) throw ObstructionDegenerateError(std::move(log));
  {
    auto ob = orbital_intervals(beta);
    for (const Interval& C : orbital_intervals(cur)) {
      bool inside = false;
      for (const Interval& B : ob)
        if (B.contains_closure(C)) inside = true;
      if (!inside)
        throw DomainError("obstruction_demo: improved gamma escapes the orbitals of beta");
    }
  }

  // Step 2: kill gamma's presence on every orbital shared by alpha and beta.
  std::vector<Interval> shared;
  {
    auto oa = orbital_intervals(alpha);
    auto ob = orbital_intervals(beta);
    for (const Interval& A : oa)
      if (std::find(ob.begin(), ob.end(), A) != ob.end()) shared.push_back(A);
  }
  for (const Interval& A : shared) {
    obstruction_note(log, "shared orbital (" + A.left.str() + ", " + A.right.str() + ")");
    // theta = alpha^m beta^n trivial on A; the leading slopes prune the
    // exponent search to the solutions of slope_a^m * slope_b^n = 1.
    Rat sa = edge_slopes(alpha, A).first;
    Rat sb = edge_slopes(beta, A).first;
    std::optional<std::pair<long, long>> found;
    PLMap theta;
    for (long am = 1; am <= bounds.theta_exponent_bound && !found; ++am) {
      for (long sgn : {1L, -1L}) {
        long mm = sgn * am;
        Rat target = rat_pow(sa, -mm);
        for (long nn = -bounds.theta_exponent_bound; nn <= bounds.theta_exponent_bound; ++nn) {
          if (nn == 0) continue;
          if (!(rat_pow(sb, nn) == target)) continue;
          PLMap cand = compose(power(alpha, mm), power(beta, nn));
          if (project(cand, A).is_identity()) {
            found = {mm, nn};
            theta = std::move(cand);
            break;
          }
        }
        if (found) break;
      }
    }
    if (!found) throw ObstructionInconclusiveError(A, std::move(log));
    obstruction_note_map(log,
                         "theta = alpha^" + std::to_string(found->first) + " beta^" +
                             std::to_string(found->second) + " (trivial on the shared orbital)",
                         theta);
    if (theta.is_identity()) obstruction_note(log, "theta is globally trivial");
    auto [j2, k2] = efficiency_exponents(cur, theta, bounds.efficiency_cap);
    obstruction_note(log, "efficiency exponents against theta: (j, k) = (" + std::to_string(j2) +
                              ", " + std::to_string(k2) + ")");
    cur = double_commutator(power(cur, j2), power(theta, k2));
    obstruction_note_map(log, "gamma <- [[gamma^j, theta^k], theta^k]", cur);
    if (cur.is_identity()) throw ObstructionDegenerateError(std::move(log));
    auto ob = orbital_intervals(beta);
    for (const Interval& C : orbital_intervals(cur)) {
      if (intervals_overlap(C, A))
        throw DomainError("obstruction_demo: gamma retains support on a processed orbital");
      bool inside = false;
      for (const Interval& B : ob)
        if (B.contains_interval(C)) inside = true;
      if (!inside)
        throw DomainError("obstruction_demo: improved gamma escapes the orbitals of beta");
    }
  }

  // Postconditions, checked rather than assumed.
  if (cur.is_identity()) throw ObstructionDegenerateError(std::move(log));
  for (const Interval& C : orbital_intervals(cur))
    for (const Interval& A : orbital_intervals(alpha))
      if (intervals_overlap(C, A))
        throw DomainError("obstruction_demo: final gamma still meets the support of alpha");
  if (!commutator(cur, alpha).is_identity())
    throw DomainError("obstruction_demo: final gamma does not commute with alpha");
  obstruction_note_map(log, "final gamma: support disjoint from alpha, commutes with alpha", cur);
  return {std::move(log), std::move(cur)};
}

}  // namespace plhom
