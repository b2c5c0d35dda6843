#include "plhom/geometry.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "plhom/error.hpp"
#include "plhom/groups.hpp"

namespace plhom {

Word::Word(std::vector<Letter> letters) {
  for (Letter& l : letters) {
    if (l.exponent == 0) continue;
    if (!letters_.empty() && letters_.back().generator == l.generator) {
      letters_.back().exponent += l.exponent;
      if (letters_.back().exponent == 0) letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

Word Word::letter(int generator, long exponent) {
  Word w;
  if (exponent != 0) w.letters_.push_back({generator, exponent});
  return w;
}

long Word::length() const {
  long n = 0;
  for (const Letter& l : letters_) n += l.exponent < 0 ? -l.exponent : l.exponent;
  return n;
}

Word Word::operator*(const Word& o) const {
  std::vector<Letter> ls = letters_;
  ls.insert(ls.end(), o.letters_.begin(), o.letters_.end());
  return Word(std::move(ls));
}

Word Word::inverse() const {
  std::vector<Letter> ls;
  ls.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    ls.push_back({it->generator, -it->exponent});
  Word w;
  w.letters_ = std::move(ls);  // reversal of a reduced word stays reduced
  return w;
}

Word Word::pow(long n) const {
  if (n == 0) return Word();
  Word base = n < 0 ? inverse() : *this;
  long k = n < 0 ? -n : n;
  Word acc;
  for (long i = 0; i < k; ++i) acc = acc * base;
  return acc;
}

bool word_less(const Word& a, const Word& b) {
  long la = a.length(), lb = b.length();
  if (la != lb) return la < lb;
  // Lexicographic over single letters; positive sign ranks before negative.
  auto rank = [](const Letter& l) { return 2 * l.generator + (l.exponent > 0 ? 0 : 1); };
  auto count = [](const Letter& l) { return l.exponent < 0 ? -l.exponent : l.exponent; };
  std::size_t ia = 0, ib = 0;
  long ra = 0, rb = 0;  // single letters consumed from the current block
  while (ia < a.letters().size() && ib < b.letters().size()) {
    int ka = rank(a.letters()[ia]);
    int kb = rank(b.letters()[ib]);
    if (ka != kb) return ka < kb;
    long step = std::min(count(a.letters()[ia]) - ra, count(b.letters()[ib]) - rb);
    ra += step;
    rb += step;
    if (ra == count(a.letters()[ia])) {
      ++ia;
      ra = 0;
    }
    if (rb == count(b.letters()[ib])) {
      ++ib;
      rb = 0;
    }
  }
  return ia == a.letters().size() && ib < b.letters().size();
}

GroupSpec GroupSpec::checked(std::string name, std::vector<std::pair<std::string, PLMap>> gens) {
  if (gens.empty()) throw DomainError("group needs at least one generator");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].first.empty()) throw DomainError("generator " + std::to_string(i) + " has an empty name");
    for (std::size_t j = 0; j < i; ++j)
      if (gens[i].first == gens[j].first)
        throw DomainError("duplicate generator name \"" + gens[i].first + "\"");
  }
  return GroupSpec{std::move(name), std::move(gens)};
}

PLMap word_to_map(const GroupSpec& G, const Word& w) {
  PLMap acc;
  for (const Letter& l : w.letters()) {
    if (l.generator < 0 || static_cast<std::size_t>(l.generator) >= G.size())
      throw DomainError("word references generator index " + std::to_string(l.generator));
    acc = compose(acc, power(G.generators[l.generator].second, l.exponent));
  }
  return acc;
}

std::string word_to_string(const GroupSpec& G, const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const Letter& l : w.letters()) {
    if (!first) os << " ";
    first = false;
    os << G.generators[l.generator].first;
    if (l.exponent != 1) os << "^" << l.exponent;
  }
  return os.str();
}

Word word_substitute(const Word& w, const std::vector<Element>& derived_generators) {
  Word out;
  for (const Letter& l : w.letters()) {
    if (l.generator < 0 || static_cast<std::size_t>(l.generator) >= derived_generators.size())
      throw DomainError("substitution: generator index out of range");
    out = out * derived_generators[l.generator].word.pow(l.exponent);
  }
  return out;
}

std::vector<Interval> group_orbitals_of(const std::vector<PLMap>& maps) {
  std::vector<Interval> all;
  for (const PLMap& m : maps)
    for (auto& o : orbitals_of_map(m)) all.push_back(o.interval);
  std::sort(all.begin(), all.end(), interval_less);
  std::vector<Interval> merged;
  for (Interval& iv : all) {
    // Merge only on open overlap: touching intervals stay separate, the
    // shared endpoint being fixed by every generator.
    if (!merged.empty() && iv.left < merged.back().right) {
      if (iv.right > merged.back().right) merged.back().right = iv.right;
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

std::vector<Interval> group_orbitals(const GroupSpec& G) {
  std::vector<PLMap> maps;
  maps.reserve(G.size());
  for (auto& [name, m] : G.generators) maps.push_back(m);
  return group_orbitals_of(maps);
}

const char* to_string(RealizationTag t) {
  switch (t) {
    case RealizationTag::NoEnd: return "no-end";
    case RealizationTag::LeadingOnly: return "leading-only";
    case RealizationTag::TrailingOnly: return "trailing-only";
    case RealizationTag::ConsistentBoth: return "consistent-both";
    case RealizationTag::InconsistentBoth: return "inconsistent-both";
  }
  return "?";
}

RealizationClass classify_realization(const PLMap& h, const Interval& A) {
  RealizationClass out{RealizationTag::NoEnd, {}, {}};
  for (const auto& o : orbitals_of_map(h)) {
    if (!intervals_overlap(o.interval, A)) continue;
    if (!A.contains_interval(o.interval)) {
      std::ostringstream os;
      os << "classify_realization: orbital " << o.interval << " straddles an end of " << A;
      throw DomainError(os.str());
    }
    if (o.interval.left == A.left) out.leading = o;
    if (o.interval.right == A.right) out.trailing = o;
  }
  if (out.leading && out.trailing) {
    out.tag = out.leading->direction == out.trailing->direction ? RealizationTag::ConsistentBoth
                                                                : RealizationTag::InconsistentBoth;
  } else if (out.leading) {
    out.tag = RealizationTag::LeadingOnly;
  } else if (out.trailing) {
    out.tag = RealizationTag::TrailingOnly;
  }
  return out;
}

namespace {

struct ChainLink {
  Interval orbital;
  std::size_t gen;  // index into the element list
  bool inverted;    // orient the element to move rightward on the orbital
};

}  // namespace

Element find_mover_over(const std::vector<Element>& gens, const Interval& A, const Rat& c,
                        const Rat& d, const SearchLimits& lim) {
  {
    std::vector<PLMap> ms;
    ms.reserve(gens.size());
    for (auto& e : gens) ms.push_back(e.map);
    auto orbs = group_orbitals_of(ms);
    if (std::find(orbs.begin(), orbs.end(), A) == orbs.end()) {
      std::ostringstream os;
      os << "find_mover: " << A << " is not an orbital of the group";
      throw DomainError(os.str());
    }
  }
  if (!(A.contains(c) && A.contains(d) && c < d)) {
    std::ostringstream os;
    os << "find_mover: need " << A.left << " < " << c.str() << " < " << d.str() << " < " << A.right;
    throw DomainError(os.str());
  }

  std::vector<ChainLink> candidates;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (const auto& o : orbitals_of_map(gens[i].map))
      if (A.contains_interval(o.interval))
        candidates.push_back({o.interval, i, o.direction == Direction::Left});

  // Greedy minimal chain of generator orbitals covering [c, d]: each pick
  // strictly contains the current position and reaches furthest right.
  std::vector<ChainLink> chain;
  Rat pos = c;
  while (true) {
    const ChainLink* best = nullptr;
    for (const ChainLink& cand : candidates) {
      if (!(cand.orbital.left < pos && pos < cand.orbital.right)) continue;
      if (!best || cand.orbital.right > best->orbital.right) best = &cand;
    }
    if (!best) {
      std::ostringstream os;
      os << "find_mover: no generator orbital covers " << pos.str() << " inside " << A;
      throw DomainError(os.str());
    }
    chain.push_back(*best);
    if (best->orbital.right > d) break;
    pos = best->orbital.right;
  }

  // Push c through the chain: on each orbital iterate the rightward-oriented
  // signature until past the next orbital's left end (past d on the last).
  long budget = lim.max_steps;
  Word word;
  PLMap map;
  Rat cur = c;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const ChainLink& link = chain[k];
    const Rat& threshold = k + 1 < chain.size() ? chain[k + 1].orbital.left : d;
    PLMap step = link.inverted ? inverse(gens[link.gen].map) : gens[link.gen].map;
    long m = 0;
    do {
      if (--budget < 0) throw ResourceError("find_mover: exponent budget exhausted");
      ++m;
      cur = step(cur);
    } while (!(cur > threshold));
    word = word * word_substitute(
                      Word::letter(static_cast<int>(link.gen), link.inverted ? -m : m), gens);
    map = compose(map, power(step, m));
  }
  if (!(map(c) > d)) throw DomainError("find_mover: constructed product failed to move c past d");
  return Element{std::move(word), std::move(map)};
}

Element find_mover(const GroupSpec& G, const Interval& A, const Rat& c, const Rat& d,
                   const SearchLimits& lim) {
  std::vector<Element> gens;
  gens.reserve(G.size());
  for (std::size_t i = 0; i < G.size(); ++i)
    gens.push_back({Word::letter(static_cast<int>(i), 1), G.generators[i].second});
  return find_mover_over(gens, A, c, d, lim);
}

std::optional<TransitionChainWitness> detect_transition_chain(const GroupSpec& G, long L,
                                                              const GroupSearchConfig& caps) {
  GroupSearchConfig soft = caps;
  soft.strict = false;
  auto enumeration = enumerate_elements(G, L, soft);

  // One representative per distinct orbital interval: the element with the
  // smallest word (elements arrive in breadth-first order).
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  struct Entry {
    Interval interval;
    std::size_t element;
  };
  std::vector<Entry> entries;
  for (std::size_t e = 0; e < enumeration.elements.size(); ++e) {
    for (auto& o : orbitals_of_map(enumeration.elements[e].map)) {
      auto key = std::make_pair(o.interval.left.str(), o.interval.right.str());
      if (seen.emplace(key, entries.size()).second) entries.push_back({o.interval, e});
    }
  }
  if (entries.size() < 2) return std::nullopt;

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return interval_less(a.interval, b.interval); });

  // Sparse table of range maxima over right endpoints (contiguous index
  // ranges in left-sorted order) keeps the no-witness case near-linear.
  std::size_t n = entries.size();
  std::vector<std::vector<std::size_t>> table;
  {
    std::vector<std::size_t> base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = i;
    table.push_back(std::move(base));
    for (std::size_t len = 1; 2 * len <= n; len *= 2) {
      const auto& prev = table.back();
      std::vector<std::size_t> row(n - 2 * len + 1);
      for (std::size_t i = 0; i + 2 * len <= n; ++i) {
        std::size_t x = prev[i], y = prev[i + len];
        row[i] = entries[x].interval.right >= entries[y].interval.right ? x : y;
      }
      table.push_back(std::move(row));
    }
  }
  auto argmax_right = [&](std::size_t lo, std::size_t hi) {  // over [lo, hi), nonempty
    std::size_t len = hi - lo, k = 0;
    while ((std::size_t{2} << k) <= len) ++k;
    std::size_t x = table[k][lo], y = table[k][hi - (std::size_t{1} << k)];
    return entries[x].interval.right >= entries[y].interval.right ? x : y;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const Interval& first = entries[i].interval;
    // Partners interleave first: left endpoint strictly inside it, right
    // endpoint strictly past it.
    auto lo = std::upper_bound(entries.begin(), entries.end(), first.left,
                               [](const Rat& v, const Entry& e) { return v < e.interval.left; });
    auto hi = std::lower_bound(entries.begin(), entries.end(), first.right,
                               [](const Entry& e, const Rat& v) { return e.interval.left < v; });
    std::size_t lo_i = static_cast<std::size_t>(lo - entries.begin());
    std::size_t hi_i = static_cast<std::size_t>(hi - entries.begin());
    if (lo_i >= hi_i) continue;
    if (!(entries[argmax_right(lo_i, hi_i)].interval.right > first.right)) continue;
    for (std::size_t j = lo_i; j < hi_i; ++j) {
      if (entries[j].interval.right > first.right) {
        const Element& e1 = enumeration.elements[entries[i].element];
        const Element& e2 = enumeration.elements[entries[j].element];
        return TransitionChainWitness{SignedOrbital{first, e1.map, e1.word},
                                      SignedOrbital{entries[j].interval, e2.map, e2.word}};
      }
    }
  }
  return std::nullopt;
}

std::optional<ImbalanceWitness> imbalance_search(const GroupSpec& G, long L,
                                                 const GroupSearchConfig& caps) {
  GroupSearchConfig soft = caps;
  soft.strict = false;
  auto enumeration = enumerate_elements(G, L, soft);
  auto orbitals = group_orbitals(G);
  for (const Element& e : enumeration.elements) {
    if (e.map.is_identity()) continue;
    for (const Interval& A : orbitals) {
      auto cls = classify_realization(e.map, A);
      if (cls.tag == RealizationTag::LeadingOnly || cls.tag == RealizationTag::TrailingOnly)
        return ImbalanceWitness{e.word, e.map, A, cls.tag};
    }
  }
  return std::nullopt;
}

std::optional<InconsistentWitness> inconsistent_search(const GroupSpec& G, long L,
                                                       const GroupSearchConfig& caps) {
  GroupSearchConfig soft = caps;
  soft.strict = false;
  auto enumeration = enumerate_elements(G, L, soft);
  auto orbitals = group_orbitals(G);
  for (const Element& e : enumeration.elements) {
    if (e.map.is_identity()) continue;
    for (const Interval& A : orbitals) {
      auto cls = classify_realization(e.map, A);
      if (cls.tag == RealizationTag::InconsistentBoth) return InconsistentWitness{e.word, e.map, A};
    }
  }
  return std::nullopt;
}

}  // namespace plhom
