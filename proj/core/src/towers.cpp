#include "plhom/towers.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "plhom/error.hpp"
#include "plhom/groups.hpp"

namespace plhom {

namespace {

Direction direction_on(const PLMap& f, const Interval& A) {
  for (auto& o : orbitals_of_map(f))
    if (o.interval == A) return o.direction;
  std::ostringstream os;
  os << "interval " << A << " is not an orbital of the map";
  throw DomainError(os.str());
}

bool has_orbital(const PLMap& f, const Interval& A) {
  for (auto& o : orbitals_of_map(f))
    if (o.interval == A) return true;
  return false;
}

}  // namespace

void validate_tower(const Tower& T) {
  for (std::size_t i = 0; i < T.levels.size(); ++i) {
    const SignedOrbital& lv = T.levels[i];
    if (!has_orbital(lv.signature, lv.orbital)) {
      std::ostringstream os;
      os << "tower level " << i << ": " << lv.orbital << " is not an orbital of its signature";
      throw DomainError(os.str());
    }
    if (i > 0 && !lv.orbital.properly_contains(T.levels[i - 1].orbital)) {
      std::ostringstream os;
      os << "tower level " << i << ": " << lv.orbital << " does not properly contain "
         << T.levels[i - 1].orbital;
      throw DomainError(os.str());
    }
  }
}

std::string ExemplaryReport::describe() const {
  if (exemplary) return "exemplary";
  std::ostringstream os;
  os << "levels " << lower << " <= " << upper << ": orbital " << offending
     << (condition == 1 ? " contains an end of the higher orbital"
                        : " shares an end of the higher orbital from inside");
  return os.str();
}

ExemplaryReport is_exemplary(const Tower& T) {
  ExemplaryReport rep;
  for (std::size_t j = 1; j < T.levels.size(); ++j) {
    const Interval& B = T.levels[j].orbital;
    for (std::size_t i = 0; i < j; ++i) {
      for (const auto& o : orbitals_of_map(T.levels[i].signature)) {
        if (o.interval.contains(B.left) || o.interval.contains(B.right)) {
          rep.exemplary = false;
          rep.lower = i;
          rep.upper = j;
          rep.offending = o.interval;
          rep.condition = 1;
          return rep;
        }
        if (B.contains_interval(o.interval) &&
            (o.interval.left == B.left || o.interval.right == B.right)) {
          rep.exemplary = false;
          rep.lower = i;
          rep.upper = j;
          rep.offending = o.interval;
          rep.condition = 2;
          return rep;
        }
      }
    }
  }
  return rep;
}

Tower conjugate_tower(const Tower& T, const PLMap& k) {
  Tower out;
  out.levels.reserve(T.levels.size());
  for (const SignedOrbital& lv : T.levels) {
    Interval img{k(lv.orbital.left), k(lv.orbital.right)};
    out.levels.push_back({std::move(img), conjugate(lv.signature, k), std::nullopt});
  }
  return out;
}

bool fits_fundamental_domain(const PLMap& g, const Interval& A, const Rat& s_lo, const Rat& s_hi) {
  Direction dir = direction_on(g, A);  // also checks A is an orbital of g
  if (!(A.left < s_lo && s_lo <= s_hi && s_hi < A.right)) {
    std::ostringstream os;
    os << "fits_fundamental_domain: [" << s_lo << ", " << s_hi << "] not inside " << A;
    throw DomainError(os.str());
  }
  if (dir == Direction::Right) return g(s_lo) > s_hi;
  return inverse(g)(s_lo) > s_hi;
}

// ---------------------------------------------------------------------------
// Construction arena: named intermediate elements plus the replayable log.

namespace {

struct Budget {
  long remaining;
  std::size_t* steps_done = nullptr;
  void charge(const char* what) {
    if (--remaining < 0)
      throw ResourceError(std::string("exponent search budget exhausted during ") + what);
  }
};

struct Arena {
  const GroupSpec& G;
  std::vector<LogStep> log;
  std::map<std::string, Element> table;

  explicit Arena(const GroupSpec& g) : G(g) {}

  const Element& get(const std::string& n) const {
    auto it = table.find(n);
    if (it == table.end()) throw DomainError("undefined construction symbol \"" + n + "\"");
    return it->second;
  }

  const Element& put(const std::string& name, Element e, LogStep step) {
    step.name = name;
    log.push_back(std::move(step));
    auto [it, fresh] = table.emplace(name, std::move(e));
    if (!fresh) throw DomainError("construction symbol redefined: " + name);
    return it->second;
  }

  const Element& def_word(const std::string& name, Word w) {
    PLMap m = word_to_map(G, w);
    LogStep s;
    s.kind = "word";
    s.word = w;
    return put(name, Element{std::move(w), std::move(m)}, std::move(s));
  }
  const Element& def_inverse(const std::string& name, const std::string& a) {
    const Element& ea = get(a);
    LogStep s;
    s.kind = "inverse";
    s.a = a;
    return put(name, Element{ea.word.inverse(), inverse(ea.map)}, std::move(s));
  }
  const Element& def_power(const std::string& name, const std::string& a, long e) {
    const Element& ea = get(a);
    LogStep s;
    s.kind = "power";
    s.a = a;
    s.exponent = e;
    return put(name, Element{ea.word.pow(e), power(ea.map, e)}, std::move(s));
  }
  const Element& def_product(const std::string& name, std::vector<std::string> fs) {
    Word w;
    PLMap m;
    for (auto& f : fs) {
      const Element& e = get(f);
      w = w * e.word;
      m = compose(m, e.map);
    }
    LogStep s;
    s.kind = "product";
    s.factors = std::move(fs);
    return put(name, Element{std::move(w), std::move(m)}, std::move(s));
  }
  /// a conjugated by by^e.
  const Element& def_conjugate(const std::string& name, const std::string& a, const std::string& by,
                               long e) {
    const Element& ea = get(a);
    const Element& eb = get(by);
    Word w = ea.word.conjugated_by(eb.word.pow(e));
    PLMap m = conjugate(ea.map, power(eb.map, e));
    LogStep s;
    s.kind = "conjugate";
    s.a = a;
    s.b = by;
    s.exponent = e;
    return put(name, Element{std::move(w), std::move(m)}, std::move(s));
  }
  const Element& def_commutator(const std::string& name, const std::string& a,
                                const std::string& b) {
    const Element& ea = get(a);
    const Element& eb = get(b);
    Word w = ea.word.inverse() * eb.word.inverse() * ea.word * eb.word;
    PLMap m = commutator(ea.map, eb.map);
    LogStep s;
    s.kind = "commutator";
    s.a = a;
    s.b = b;
    return put(name, Element{std::move(w), std::move(m)}, std::move(s));
  }
  void note(std::string text) {
    LogStep s;
    s.kind = "note";
    s.note = std::move(text);
    log.push_back(std::move(s));
  }
  void level(int idx, const std::string& elem, const Interval& orb) {
    LogStep s;
    s.kind = "level";
    s.level = idx;
    s.element = elem;
    s.orbital = orb;
    log.push_back(std::move(s));
  }
};

void internal_check(bool ok, const std::string& what) {
  if (!ok) throw DomainError("construction invariant failed: " + what);
}

// ---------------------------------------------------------------------------
// Exemplary tower from an imbalance witness. Mirrors the bi-infinite
// construction near the shared end of A, materializing k consecutive levels:
// conjugates of the witness nest toward the shared end, multiplying by a
// fixed conjugate chops the shared end off, and conjugation by powers of the
// nesting maps stacks the chopped orbitals. `side` says which end of A the
// witness realizes; the Leading case is the mirror image of the Trailing one.

std::vector<SignedOrbital> build_imbalanced(Arena& ar, Budget& bud,
                                            const std::vector<Element>& gens, const Interval& A,
                                            const std::string& witness_sym, RealizationTag side,
                                            int k_levels, const SearchLimits& mover_lim) {
  const bool trailing = side == RealizationTag::TrailingOnly;
  const Rat shared_end = trailing ? A.right : A.left;
  const Rat far_end = trailing ? A.left : A.right;
  // x is beyond y, looking toward the shared end.
  auto ahead = [&](const Rat& x, const Rat& y) { return trailing ? x > y : x < y; };
  auto proj = [&](const PLMap& m) { return project(m, A); };
  auto shared_orbital = [&](const PLMap& pm) -> Orbital {
    auto os = orbitals_of_map(pm);
    internal_check(!os.empty(), "projected element lost its support");
    return trailing ? os.back() : os.front();
  };
  auto inner_end = [&](const Interval& iv) { return trailing ? iv.left : iv.right; };
  auto supp_far_edge = [&](const PLMap& pm) {  // support edge nearest the far end
    auto os = orbitals_of_map(pm);
    internal_check(!os.empty(), "projected element lost its support");
    return trailing ? os.front().interval.left : os.back().interval.right;
  };

  // Orient the witness to move toward the shared end on the orbital B0
  // realizing it.
  std::string g0 = witness_sym;
  {
    Orbital B0 = shared_orbital(proj(ar.get(witness_sym).map));
    internal_check(inner_end(B0.interval) != far_end, "witness realizes both ends");
    internal_check((trailing ? B0.interval.right : B0.interval.left) == shared_end,
                   "witness orbital does not share the claimed end");
    bool toward = (B0.direction == Direction::Right) == trailing;
    if (!toward) {
      ar.def_inverse("g0", witness_sym);
      g0 = "g0";
    }
  }
  PLMap pg0 = proj(ar.get(g0).map);
  Orbital B0 = shared_orbital(pg0);
  Rat a0 = inner_end(B0.interval);
  Rat s_edge = supp_far_edge(pg0);
  Rat w_pt = midpoint(far_end, s_edge);

  // A transporter moving w_pt past a0 toward the shared end.
  std::string alpha = "alpha";
  if (trailing) {
    Element mv = find_mover_over(gens, A, w_pt, a0, mover_lim);
    ar.def_word(alpha, word_substitute(mv.word, gens));
  } else {
    Element mv = find_mover_over(gens, A, a0, w_pt, mover_lim);
    ar.def_word("alpha_fwd", word_substitute(mv.word, gens));
    ar.def_inverse(alpha, "alpha_fwd");
  }
  Rat r_pt = ar.get(alpha).map(w_pt);
  internal_check(ahead(r_pt, a0), "transporter did not clear the witness orbital");
  ar.note("w = " + w_pt.str() + ", r = w*alpha = " + r_pt.str());

  // The chopping conjugate: same germ at the shared end as every g_k, with
  // support strictly beyond r, so each u_k = g_k * g_neg1^-1 dies near the
  // shared end.
  ar.def_conjugate("g_neg1", g0, alpha, 1);
  ar.def_inverse("g_neg1_inv", "g_neg1");
  {
    Rat r1 = supp_far_edge(proj(ar.get("g_neg1").map));
    internal_check(ahead(r1, r_pt), "chopping conjugate reaches behind r");
  }

  std::vector<SignedOrbital> out;
  std::string prev_v;
  Rat prev_inner_a = a0;  // inner end of the previous g_k's shared orbital
  for (int k = 0; k < k_levels; ++k) {
    std::string gk = g0;
    if (k > 0) {
      gk = "g" + std::to_string(k);
      ar.def_conjugate(gk, g0, alpha, -static_cast<long>(k));
    }
    PLMap pgk = proj(ar.get(gk).map);
    Orbital Bk = shared_orbital(pgk);
    internal_check((trailing ? Bk.interval.right : Bk.interval.left) == shared_end,
                   "conjugate lost the shared end");
    Rat a_k = inner_end(Bk.interval);
    if (k > 0) {
      // The new shared orbital must reach behind the whole previous support.
      PLMap prev = proj(ar.get(k == 1 ? g0 : "g" + std::to_string(k - 1)).map);
      internal_check(ahead(supp_far_edge(prev), a_k), "conjugates failed to nest");
    }
    prev_inner_a = a_k;
    (void)prev_inner_a;

    std::string uk = "u" + std::to_string(k);
    ar.def_product(uk, {gk, "g_neg1_inv"});
    PLMap puk = proj(ar.get(uk).map);
    internal_check(!puk.is_identity(), "chopped element is trivial");

    // C_k: the orbital of u_k based at a_k, cut short of the shared end.
    std::optional<Orbital> Ck;
    for (auto& o : orbitals_of_map(puk))
      if (inner_end(o.interval) == a_k) Ck = o;
    internal_check(Ck.has_value(), "chopped element has no orbital based at a_k");
    Rat d_k = trailing ? Ck->interval.right : Ck->interval.left;
    internal_check(ahead(shared_end, d_k), "chopped orbital still reaches the shared end");
    internal_check((Ck->direction == Direction::Right) == trailing,
                   "chopped orbital moves the wrong way");

    std::string vk;
    Interval Dk;
    if (k == 0) {
      vk = uk;
      Dk = Ck->interval;
    } else {
      // Push the free end of C_k past the previous level's whole support.
      auto hull = support_hull_in(ar.get(prev_v).map, A);
      internal_check(hull.has_value(), "previous level lost its support");
      Rat target = trailing ? hull->second : hull->first;
      internal_check(ahead(shared_end, target), "previous support touches the shared end");
      const PLMap& gk_map = ar.get(gk).map;
      Rat val = d_k;
      long m = 0;
      do {
        bud.charge("level nesting");
        ++m;
        val = gk_map(val);
      } while (!ahead(val, target));
      vk = "v" + std::to_string(k);
      ar.def_conjugate(vk, uk, gk, m);
      Dk = trailing ? Interval{a_k, val} : Interval{val, a_k};
      internal_check(has_orbital(proj(ar.get(vk).map), Dk), "conjugated orbital mismatch");
      internal_check(Dk.left < hull->first && hull->second < Dk.right,
                     "previous support escapes the new orbital");
    }
    const Element& ev = ar.get(vk);
    internal_check(has_orbital(ev.map, Dk), "level orbital is not an orbital of the full element");
    ar.level(k, vk, Dk);
    out.push_back({Dk, ev.map, ev.word});
    prev_v = vk;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exemplary tower from an inconsistent realization: the witness moves left
// on its first orbital in A and right on its last (after normalization), so
// conjugating the commutator-like seed g0 by powers of the witness pushes
// its orbital out toward both ends of A at once.

std::vector<SignedOrbital> build_inconsistent(Arena& ar, Budget& bud,
                                              const std::vector<Element>& gens, const Interval& A,
                                              const std::string& witness_sym, int k_levels,
                                              const SearchLimits& mover_lim) {
  auto proj = [&](const PLMap& m) { return project(m, A); };

  std::string h = witness_sym;
  {
    auto cls = classify_realization(ar.get(witness_sym).map, A);
    internal_check(cls.tag == RealizationTag::InconsistentBoth, "witness is not inconsistent on A");
    if (cls.leading->direction == Direction::Right) {
      ar.def_inverse("h_norm", witness_sym);
      h = "h_norm";
    }
  }
  const PLMap& h_map = ar.get(h).map;
  PLMap ph = proj(h_map);
  auto orbs = orbitals_of_map(ph);
  internal_check(orbs.front().interval.left == A.left && orbs.front().direction == Direction::Left,
                 "first orbital not moving left toward the leading end");
  internal_check(orbs.back().interval.right == A.right && orbs.back().direction == Direction::Right,
                 "last orbital not moving right toward the trailing end");
  Rat r = orbs.front().interval.right;  // min of the fixed set of h in A
  Rat s = orbs.back().interval.left;    // max of the fixed set of h in A

  // Transporter g with r*g beyond s.
  Rat d_target = r < s ? s : midpoint(r, A.right);
  Element mv = find_mover_over(gens, A, r, d_target, mover_lim);
  ar.def_word("g", word_substitute(mv.word, gens));
  const PLMap& g_map = ar.get("g").map;
  Rat t = g_map(r), u = g_map(s);
  internal_check(s < t && u < A.right, "transporter output out of range");

  long k_exp = 0;
  {
    Rat val = t;
    do {
      bud.charge("fixed-set clearing");
      ++k_exp;
      val = h_map(val);
    } while (!(val > u));
  }
  ar.note("t = " + t.str() + ", u = " + u.str() + ", witness exponent k = " + std::to_string(k_exp));

  // g0 = h^-k g h^k g^-1: trivial near both ends of A, and pushes [r,s]
  // entirely past s.
  ar.def_conjugate("g_c", "g", h, k_exp);
  ar.def_inverse("g_inv", "g");
  ar.def_product("g0", {"g_c", "g_inv"});
  PLMap pg0 = proj(ar.get("g0").map);
  internal_check(!pg0.is_identity(), "seed element is trivial");
  internal_check(pg0(r) > s, "seed fails to move [r,s] off itself");
  {
    auto os0 = orbitals_of_map(pg0);
    internal_check(os0.front().interval.left > A.left && os0.back().interval.right < A.right,
                   "seed support reaches an end of A");
  }

  std::optional<Orbital> B0;
  for (auto& o : orbitals_of_map(pg0))
    if (o.interval.contains(r)) B0 = o;
  internal_check(B0.has_value() && B0->interval.right > s && B0->direction == Direction::Right,
                 "seed orbital does not carry [r,s] rightward");

  std::vector<SignedOrbital> out;
  std::string cur = "g0";
  Interval curB = B0->interval;
  for (int i = 0; i < k_levels; ++i) {
    if (i > 0) {
      auto hull = support_hull_in(ar.get(cur).map, A);
      internal_check(hull.has_value(), "level lost its support");
      internal_check(A.left < hull->first && hull->second < A.right,
                     "level support reaches an end of A");
      Rat val_lam = curB.left, val_rho = curB.right;
      internal_check(val_lam < r && val_rho > s, "level orbital no longer spans the fixed set");
      long n = 0;
      do {
        bud.charge("orbital expansion");
        ++n;
        val_lam = h_map(val_lam);
        val_rho = h_map(val_rho);
      } while (!(val_lam < hull->first && val_rho > hull->second));
      std::string next = "w" + std::to_string(i);
      ar.def_conjugate(next, cur, h, n);
      Interval Bi{val_lam, val_rho};
      internal_check(has_orbital(proj(ar.get(next).map), Bi), "conjugated orbital mismatch");
      cur = next;
      curB = Bi;
    }
    const Element& ev = ar.get(cur);
    internal_check(has_orbital(ev.map, curB), "level orbital is not an orbital of the full element");
    ar.level(i, cur, curB);
    out.push_back({curB, ev.map, ev.word});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exemplary tower from a transition chain: pass to the subgroup generated by
// the two witness signatures and classify how the left-realizing one meets
// its orbital O. One-end-only and inconsistent cases reduce directly; the
// consistent case manufactures an imbalanced two-generator subgroup first.

std::vector<SignedOrbital> build_transition(Arena& ar, Budget& bud, const GroupSpec& G,
                                            const TransitionChainWitness& w, int k_levels,
                                            const SearchLimits& mover_lim) {
  (void)G;
  const Interval& F1 = w.first.orbital;
  const Interval& F2 = w.second.orbital;
  internal_check(F1.left < F2.left && F2.left < F1.right && F1.right < F2.right,
                 "witness endpoints do not interleave");
  if (!w.first.witness || !w.second.witness)
    throw DomainError("transition-chain witness lacks word provenance");
  ar.def_word("tc_g", *w.first.witness);
  ar.def_word("tc_h", *w.second.witness);
  internal_check(ar.get("tc_g").map == w.first.signature &&
                     ar.get("tc_h").map == w.second.signature,
                 "witness words do not reproduce the signatures");
  internal_check(has_orbital(w.first.signature, F1) && has_orbital(w.second.signature, F2),
                 "witness intervals are not orbitals of their signatures");

  std::vector<Element> pair = {ar.get("tc_g"), ar.get("tc_h")};
  Interval O;
  {
    bool found = false;
    for (auto& c : group_orbitals_of({pair[0].map, pair[1].map}))
      if (c.left <= F1.left && F2.right <= c.right) {
        O = c;
        found = true;
      }
    internal_check(found, "no subgroup orbital contains the chain");
  }

  auto clsg = classify_realization(pair[0].map, O);
  std::string primary = "tc_g";
  RealizationClass pcls = clsg;
  if (!clsg.leading) {
    auto clsh = classify_realization(pair[1].map, O);
    internal_check(clsh.leading.has_value(), "neither signature realizes the leading end");
    primary = "tc_h";
    pcls = clsh;
  }

  if (pcls.tag == RealizationTag::LeadingOnly)
    return build_imbalanced(ar, bud, pair, O, primary, RealizationTag::LeadingOnly, k_levels,
                            mover_lim);
  if (pcls.tag == RealizationTag::InconsistentBoth)
    return build_inconsistent(ar, bud, pair, O, primary, k_levels, mover_lim);
  internal_check(pcls.tag == RealizationTag::ConsistentBoth, "unexpected realization class");

  // Consistent case. Normalize the primary to move rightward on its first
  // and last orbitals in O.
  std::string second = primary == "tc_g" ? "tc_h" : "tc_g";
  if (pcls.leading->direction == Direction::Left) {
    ar.def_inverse("tc_prim", primary);
    primary = "tc_prim";
  }
  const PLMap& prim_map = ar.get(primary).map;
  const PLMap& sec_map = ar.get(second).map;
  PLMap pprim = project(prim_map, O);
  auto porbs = orbitals_of_map(pprim);
  internal_check(porbs.size() >= 2 && porbs.front().interval.left == O.left &&
                     porbs.back().interval.right == O.right &&
                     porbs.front().direction == Direction::Right &&
                     porbs.back().direction == Direction::Right,
                 "primary does not realize O consistently rightward");

  // Fixed set of the primary inside O: the gaps between its orbitals.
  struct Piece {
    Rat lo, hi;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < porbs.size(); ++i)
    pieces.push_back({porbs[i].interval.right, porbs[i + 1].interval.left});
  Rat minF = pieces.front().lo, maxF = pieces.back().hi;

  // Find n with second^n moving the whole fixed set off itself; each fixed
  // piece sits inside a single orbital of the second signature, so the hull
  // of the pieces per hosting orbital must clear itself.
  struct Host {
    Interval orbital;
    Direction dir;
    Rat lo, hi;  // hull of the fixed pieces inside this orbital
  };
  std::vector<Host> hosts;
  for (const Piece& p : pieces) {
    std::optional<Orbital> host;
    for (auto& o : orbitals_of_map(sec_map))
      if (o.interval.left < p.lo && p.hi < o.interval.right) host = o;
    internal_check(host.has_value(), "fixed piece not inside an orbital of the second signature");
    bool joined = false;
    for (auto& g : hosts)
      if (g.orbital == host->interval) {
        if (p.lo < g.lo) g.lo = p.lo;
        if (p.hi > g.hi) g.hi = p.hi;
        joined = true;
      }
    if (!joined) hosts.push_back({host->interval, host->direction, p.lo, p.hi});
  }
  long n_exp = 0;
  {
    std::vector<Rat> vals;
    for (auto& g : hosts) vals.push_back(g.dir == Direction::Right ? g.lo : g.hi);
    bool done = false;
    while (!done) {
      bud.charge("fixed-set displacement");
      ++n_exp;
      done = true;
      for (std::size_t i = 0; i < hosts.size(); ++i) {
        vals[i] = sec_map(vals[i]);
        bool cleared = hosts[i].dir == Direction::Right ? vals[i] > hosts[i].hi
                                                        : vals[i] < hosts[i].lo;
        if (!cleared) done = false;
      }
    }
  }
  ar.def_power("tc_sn", second, n_exp);
  ar.def_commutator("tc_k", primary, "tc_sn");
  const Element& kel = ar.get("tc_k");
  internal_check(!kel.map.is_identity(), "commutator seed is trivial");
  {
    auto kcls = classify_realization(kel.map, O);
    internal_check(kcls.tag == RealizationTag::NoEnd, "commutator seed realizes an end of O");
    auto sub = group_orbitals_of({prim_map, kel.map});
    internal_check(std::find(sub.begin(), sub.end(), O) != sub.end(),
                   "primary and seed no longer generate all of O");
  }

  Rat x1 = midpoint(O.left, minF), y1 = midpoint(maxF, O.right);
  std::vector<Element> H2 = {ar.get(primary), kel};
  Element mv = find_mover_over(H2, O, x1, y1, mover_lim);
  long m_total = 0;
  for (const Letter& l : mv.word.letters())
    if (l.generator == 0) m_total += l.exponent;
  ar.def_word("tc_qp", word_substitute(mv.word, H2));
  ar.def_power("tc_pm", primary, -m_total);
  ar.def_product("tc_q", {"tc_qp", "tc_pm"});
  const Element& q = ar.get("tc_q");
  PLMap pq = project(q.map, O);
  internal_check(!pq.is_identity(), "corrected mover is trivial");
  {
    auto qs = orbitals_of_map(pq);
    internal_check(qs.front().interval.left > O.left && qs.back().interval.right < O.right,
                   "corrected mover reaches an end of O");
  }
  Rat v_pt = q.map(x1);
  internal_check(v_pt > maxF, "corrected mover fails to clear the fixed set");

  std::optional<Orbital> C;
  for (auto& o : orbitals_of_map(pq))
    if (o.interval.contains(x1)) C = o;
  internal_check(C.has_value(), "x1 is not in the support of the corrected mover");
  Rat a3 = C->interval.left, b3 = C->interval.right;
  internal_check(a3 < minF && maxF < b3, "fixed set escapes the mover orbital");
  Rat x2 = orbitals_of_map(pq).front().interval.left;
  Rat y2 = orbitals_of_map(pq).back().interval.right;

  long i_exp = 0;
  {
    Rat val_x = x2, val_b = b3;
    do {
      bud.charge("imbalance placement");
      ++i_exp;
      val_x = prim_map(val_x);
      val_b = prim_map(val_b);
    } while (!(val_x > a3 && val_b > y2));
    ar.note("q placed with exponent i = " + std::to_string(i_exp) + ", b4 = " + val_b.str());
    ar.def_conjugate("tc_p", "tc_q", primary, i_exp);
    Interval A2{a3, val_b};
    std::vector<Element> H3 = {ar.get("tc_q"), ar.get("tc_p")};
    {
      auto sub = group_orbitals_of({H3[0].map, H3[1].map});
      internal_check(std::find(sub.begin(), sub.end(), A2) != sub.end(),
                     "imbalanced pair does not have the expected orbital");
      auto qcls = classify_realization(H3[0].map, A2);
      internal_check(qcls.tag == RealizationTag::LeadingOnly,
                     "mover is not leading-only on the new orbital");
    }
    return build_imbalanced(ar, bud, H3, A2, "tc_q", RealizationTag::LeadingOnly, k_levels,
                            mover_lim);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void replay_certificate(const TowerCertificate& cert) {
  std::map<std::string, Element> table;
  auto fetch = [&](const std::string& n, int step) -> const Element& {
    auto it = table.find(n);
    if (it == table.end()) throw VerifyError("step references undefined symbol \"" + n + "\"", step);
    return it->second;
  };
  std::vector<std::pair<Interval, std::string>> levels;
  for (std::size_t i = 0; i < cert.log.size(); ++i) {
    const LogStep& s = cert.log[i];
    int step = static_cast<int>(i);
    Element e;
    if (s.kind == "note") {
      continue;
    } else if (s.kind == "level") {
      const Element& el = fetch(s.element, step);
      if (!has_orbital(el.map, s.orbital)) {
        std::ostringstream os;
        os << "replayed element \"" << s.element << "\" does not have " << s.orbital
           << " as an orbital";
        throw VerifyError(os.str(), step);
      }
      std::size_t idx = levels.size();
      if (idx >= cert.tower.levels.size()) throw VerifyError("more levels replayed than recorded", step);
      const SignedOrbital& rec = cert.tower.levels[idx];
      if (!(rec.orbital == s.orbital)) throw VerifyError("level orbital diverges", step);
      if (!(rec.signature == el.map)) throw VerifyError("level signature diverges", step);
      if (!rec.witness || !(*rec.witness == el.word))
        throw VerifyError("level word diverges", step);
      levels.push_back({s.orbital, s.element});
      continue;
    } else if (s.kind == "word") {
      e = Element{s.word, word_to_map(cert.group, s.word)};
    } else if (s.kind == "inverse") {
      const Element& a = fetch(s.a, step);
      e = Element{a.word.inverse(), inverse(a.map)};
    } else if (s.kind == "power") {
      const Element& a = fetch(s.a, step);
      e = Element{a.word.pow(s.exponent), power(a.map, s.exponent)};
    } else if (s.kind == "product") {
      Word w;
      PLMap m;
      for (auto& f : s.factors) {
        const Element& a = fetch(f, step);
        w = w * a.word;
        m = compose(m, a.map);
      }
      e = Element{std::move(w), std::move(m)};
    } else if (s.kind == "conjugate") {
      const Element& a = fetch(s.a, step);
      const Element& b = fetch(s.b, step);
      e = Element{a.word.conjugated_by(b.word.pow(s.exponent)),
                  conjugate(a.map, power(b.map, s.exponent))};
    } else if (s.kind == "commutator") {
      const Element& a = fetch(s.a, step);
      const Element& b = fetch(s.b, step);
      e = Element{a.word.inverse() * b.word.inverse() * a.word * b.word, commutator(a.map, b.map)};
    } else {
      throw VerifyError("unknown log step kind \"" + s.kind + "\"", step);
    }
    if (!table.emplace(s.name, std::move(e)).second)
      throw VerifyError("symbol \"" + s.name + "\" redefined", step);
  }
  if (levels.size() != cert.tower.levels.size())
    throw VerifyError("replay produced " + std::to_string(levels.size()) + " levels, certificate records " +
                      std::to_string(cert.tower.levels.size()));
  try {
    validate_tower(cert.tower);
  } catch (const DomainError& e) {
    throw VerifyError(std::string("tower invariant violated: ") + e.what());
  }
  if (cert.exemplary_claimed) {
    auto rep = is_exemplary(cert.tower);
    if (!rep.exemplary) throw VerifyError("exemplary claim fails: " + rep.describe());
  }
}

std::vector<SignedOrbital> signed_orbitals_up_to(const GroupSpec& G, long L,
                                                 const GroupSearchConfig& caps) {
  auto enumeration = enumerate_elements(G, L, caps);
  std::vector<SignedOrbital> out;
  for (const Element& e : enumeration.elements) {
    if (e.map.is_identity()) continue;
    for (auto& o : orbitals_of_map(e.map)) out.push_back({o.interval, e.map, e.word});
  }
  return out;
}

namespace {

// Fenwick tree holding suffix maxima of chain lengths over right-end ranks.
struct SuffixMax {
  std::vector<int> t;
  explicit SuffixMax(std::size_t n) : t(n + 1, 0) {}
  void update(std::size_t i, int v) {  // i in [0, n)
    for (std::size_t k = t.size() - 1 - i; k > 0 && k < t.size(); k += k & (~k + 1))
      t[k] = std::max(t[k], v);
  }
  int query(std::size_t i) const {  // max over [i, n)
    int best = 0;
    for (std::size_t k = t.size() - 1 - i; k > 0; k -= k & (~k + 1)) best = std::max(best, t[k]);
    return best;
  }
};

}  // namespace

Tower max_tower(const std::vector<SignedOrbital>& S) {
  Tower out;
  if (S.empty()) return out;

  // One candidate per distinct orbital, signature minimal in the left order.
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  struct Item {
    Interval iv;
    const SignedOrbital* so;
  };
  std::vector<Item> items;
  for (const SignedOrbital& so : S) {
    auto key = std::make_pair(so.orbital.left.str(), so.orbital.right.str());
    auto [it, fresh] = index.emplace(key, items.size());
    if (fresh) {
      items.push_back({so.orbital, &so});
    } else if (compare_left_order(so.signature, items[it->second].so->signature) ==
               std::strong_ordering::less) {
      items[it->second].so = &so;
    }
  }

  // Longest chain of properly nested intervals. Sorting by (left asc,
  // right desc) turns containment into "earlier item with right >= mine".
  std::vector<std::size_t> ord(items.size());
  for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
  std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
    if (items[a].iv.left != items[b].iv.left) return items[a].iv.left < items[b].iv.left;
    return items[b].iv.right < items[a].iv.right;
  });
  std::vector<Rat> rights;
  for (const Item& it : items) rights.push_back(it.iv.right);
  std::sort(rights.begin(), rights.end());
  rights.erase(std::unique(rights.begin(), rights.end()), rights.end());
  auto rank = [&](const Rat& r) {
    return static_cast<std::size_t>(std::lower_bound(rights.begin(), rights.end(), r) -
                                    rights.begin());
  };

  // depth[i]: longest chain of supersets above item i (i included).
  std::vector<int> depth(items.size(), 1);
  SuffixMax fen(rights.size());
  for (std::size_t oi : ord) {
    std::size_t rk = rank(items[oi].iv.right);
    depth[oi] = 1 + fen.query(rk);
    fen.update(rk, depth[oi]);
  }
  int best = 0;
  for (int d : depth) best = std::max(best, d);

  // Greedy reconstruction bottom-up: at each level take the lexicographically
  // smallest feasible interval.
  const Item* prev = nullptr;
  for (int want = best; want >= 1; --want) {
    const Item* pick = nullptr;
    for (const Item& it : items) {
      if (depth[&it - items.data()] != want) continue;
      if (prev && !it.iv.properly_contains(prev->iv)) continue;
      if (!pick || interval_less(it.iv, pick->iv)) pick = &it;
    }
    if (!pick) throw DomainError("max_tower: chain reconstruction failed");
    out.levels.push_back(*pick->so);
    prev = pick;
  }
  return out;
}

TowerCertificate derive_tower(const GroupSpec& G, const Tower& T, const BuildLimits& lim) {
  if (T.height() < 2) throw DomainError("derive_tower: tower height must be at least 2");
  validate_tower(T);
  {
    auto rep = is_exemplary(T);
    if (!rep.exemplary) throw DomainError("derive_tower: tower is not exemplary: " + rep.describe());
  }
  for (const SignedOrbital& lv : T.levels) {
    if (lv.signature.is_identity()) throw DomainError("derive_tower: identity signature");
    if (!lv.witness) throw DomainError("derive_tower: tower levels lack word provenance");
  }

  Arena ar(G);
  Budget bud{lim.max_steps};
  std::size_t n = T.height();

  // Normalize every signature to move rightward on its tower orbital.
  std::vector<std::string> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SignedOrbital& lv = T.levels[i];
    Word w = *lv.witness;
    if (direction_on(lv.signature, lv.orbital) == Direction::Left) w = w.inverse();
    std::string base = "g" + std::to_string(i + 1);
    ar.def_word(base, w);
    internal_check(has_orbital(ar.get(base).map, lv.orbital),
                   "witness word does not reproduce the level signature");
    h[i] = base;
  }

  // Power each upper signature until the level below fits one of its
  // fundamental domains, then commute adjacent levels.
  for (std::size_t i = 1; i < n; ++i) {
    auto hull = support_hull_in(ar.get(h[i - 1]).map, T.levels[i].orbital);
    internal_check(hull.has_value(), "lower level has no support inside the upper orbital");
    const PLMap& gi = ar.get(h[i]).map;
    Rat val = hull->first;
    long ni = 0;
    do {
      bud.charge("fundamental domain fitting");
      ++ni;
      val = gi(val);
    } while (!(val > hull->second));
    if (ni > 1) {
      std::string powered = "h" + std::to_string(i + 1);
      ar.def_power(powered, h[i], ni);
      h[i] = powered;
    }
    ar.note("level " + std::to_string(i + 1) + " powered by n = " + std::to_string(ni));
  }

  TowerCertificate cert;
  cert.group = G;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::string vi = "v" + std::to_string(i + 1);
    ar.def_commutator(vi, h[i], h[i + 1]);
    const Element& ev = ar.get(vi);
    internal_check(has_orbital(ev.map, T.levels[i].orbital),
                   "commutator lost the derived orbital");
    ar.level(static_cast<int>(i), vi, T.levels[i].orbital);
    cert.tower.levels.push_back({T.levels[i].orbital, ev.map, ev.word});
  }
  cert.log = std::move(ar.log);
  cert.exemplary_claimed = is_exemplary(cert.tower).exemplary;
  validate_tower(cert.tower);
  return cert;
}

TowerCertificate build_exemplary_tower(const GroupSpec& G, const BuildWitness& witness, int k,
                                       const BuildLimits& lim) {
  if (k < 1) throw DomainError("build_exemplary_tower: height must be >= 1");
  Arena ar(G);
  Budget bud{lim.max_steps};
  SearchLimits mover_lim{lim.max_steps};

  std::vector<Element> gens;
  for (std::size_t i = 0; i < G.size(); ++i)
    gens.push_back({Word::letter(static_cast<int>(i), 1), G.generators[i].second});

  std::vector<SignedOrbital> levels;
  Interval ambient;
  if (const auto* w = std::get_if<ImbalanceWitness>(&witness)) {
    if (w->end != RealizationTag::LeadingOnly && w->end != RealizationTag::TrailingOnly)
      throw DomainError("imbalance witness must be leading-only or trailing-only");
    auto orbs = group_orbitals(G);
    if (std::find(orbs.begin(), orbs.end(), w->orbital) == orbs.end())
      throw DomainError("imbalance witness orbital is not a group orbital");
    if (!(word_to_map(G, w->word) == w->map))
      throw DomainError("imbalance witness word does not reproduce its map");
    if (classify_realization(w->map, w->orbital).tag != w->end)
      throw DomainError("imbalance witness does not realize the claimed end only");
    ambient = w->orbital;
    ar.def_word("g_wit", w->word);
    levels = build_imbalanced(ar, bud, gens, w->orbital, "g_wit", w->end, k, mover_lim);
  } else if (const auto* w2 = std::get_if<InconsistentWitness>(&witness)) {
    auto orbs = group_orbitals(G);
    if (std::find(orbs.begin(), orbs.end(), w2->orbital) == orbs.end())
      throw DomainError("inconsistent witness orbital is not a group orbital");
    if (!(word_to_map(G, w2->word) == w2->map))
      throw DomainError("inconsistent witness word does not reproduce its map");
    if (classify_realization(w2->map, w2->orbital).tag != RealizationTag::InconsistentBoth)
      throw DomainError("witness does not realize the orbital inconsistently");
    ambient = w2->orbital;
    ar.def_word("h_wit", w2->word);
    levels = build_inconsistent(ar, bud, gens, w2->orbital, "h_wit", k, mover_lim);
  } else {
    const auto& w3 = std::get<TransitionChainWitness>(witness);
    bool found = false;
    for (auto& c : group_orbitals(G))
      if (c.left <= w3.first.orbital.left && w3.second.orbital.right <= c.right) {
        ambient = c;
        found = true;
      }
    if (!found) throw DomainError("transition chain does not sit inside a group orbital");
    levels = build_transition(ar, bud, G, w3, k, mover_lim);
  }

  TowerCertificate cert;
  cert.group = G;
  cert.tower.levels = std::move(levels);
  cert.log = std::move(ar.log);
  cert.exemplary_claimed = true;

  internal_check(cert.tower.height() == static_cast<std::size_t>(k), "builder height mismatch");
  for (const SignedOrbital& lv : cert.tower.levels)
    internal_check(ambient.contains_interval(lv.orbital), "level escapes the ambient orbital");
  validate_tower(cert.tower);
  {
    auto rep = is_exemplary(cert.tower);
    internal_check(rep.exemplary, "built tower is not exemplary: " + rep.describe());
  }
  replay_certificate(cert);
  return cert;
}

DepthBound depth_lower_bound(const GroupSpec& G, long L, std::optional<int> k_target,
                             const GroupSearchConfig& caps, const BuildLimits& lim) {
  GroupSearchConfig soft = caps;
  soft.strict = false;
  auto S = signed_orbitals_up_to(G, L, soft);
  Tower best = max_tower(S);

  if (k_target && static_cast<std::size_t>(*k_target) > best.height()) {
    std::optional<BuildWitness> witness;
    if (auto w = imbalance_search(G, L, soft))
      witness = *w;
    else if (auto t = detect_transition_chain(G, L, soft))
      witness = *t;
    else if (auto ic = inconsistent_search(G, L, soft))
      witness = *ic;
    if (witness) {
      auto cert = build_exemplary_tower(G, *witness, *k_target, lim);
      return {*k_target, std::move(cert)};
    }
  }

  TowerCertificate cert;
  cert.group = G;
  cert.tower = best;
  Arena ar(G);
  for (std::size_t i = 0; i < best.levels.size(); ++i) {
    const SignedOrbital& lv = best.levels[i];
    internal_check(lv.witness.has_value(), "max_tower level lacks word provenance");
    std::string nm = "w" + std::to_string(i + 1);
    ar.def_word(nm, *lv.witness);
    ar.level(static_cast<int>(i), nm, lv.orbital);
  }
  cert.log = std::move(ar.log);
  cert.exemplary_claimed = is_exemplary(best).exemplary;
  replay_certificate(cert);
  return {static_cast<int>(best.height()), std::move(cert)};
}

}  // namespace plhom
