#include "plhom/plmap.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "plhom/error.hpp"

namespace plhom {

Interval Interval::checked(Rat l, Rat r) {
  if (!(Rat(0) <= l && l < r && r <= Rat(1)))
    throw DomainError("invalid interval (" + l.str() + ", " + r.str() + ")");
  return Interval{std::move(l), std::move(r)};
}

bool interval_less(const Interval& a, const Interval& b) {
  if (a.left != b.left) return a.left < b.left;
  return a.right < b.right;
}

bool intervals_overlap(const Interval& a, const Interval& b) {
  return a.left < b.right && b.left < a.right;
}

std::ostream& operator<<(std::ostream& os, const Interval& iv) {
  return os << "(" << iv.left << ", " << iv.right << ")";
}

const char* to_string(Direction d) { return d == Direction::Left ? "left" : "right"; }

PLMap::PLMap() : nodes_{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}} {}

const PLMap& PLMap::identity() {
  static const PLMap id;
  return id;
}

namespace {

// Drops interior nodes whose two incident slopes agree. Assumes the node
// list is already strictly monotone with fixed endpoints.
std::vector<Node> canonicalize(std::vector<Node> nodes) {
  std::vector<Node> out;
  out.reserve(nodes.size());
  out.push_back(nodes.front());
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    const Node& a = out.back();
    const Node& b = nodes[i];
    const Node& c = nodes[i + 1];
    // slope(a,b) == slope(b,c) iff (b.y-a.y)(c.x-b.x) == (c.y-b.y)(b.x-a.x)
    if ((b.y - a.y) * (c.x - b.x) == (c.y - b.y) * (b.x - a.x)) continue;
    out.push_back(b);
  }
  out.push_back(nodes.back());
  return out;
}

}  // namespace

PLMap PLMap::from_nodes(std::vector<Node> nodes) {
  if (nodes.size() < 2) throw DomainError("node list needs at least the two endpoints");
  if (!(nodes.front().x == Rat(0) && nodes.front().y == Rat(0)))
    throw DomainError("first node must be (0, 0), got (" + nodes.front().x.str() + ", " +
                      nodes.front().y.str() + ")");
  if (!(nodes.back().x == Rat(1) && nodes.back().y == Rat(1)))
    throw DomainError("last node must be (1, 1), got (" + nodes.back().x.str() + ", " +
                      nodes.back().y.str() + ")");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i - 1].x < nodes[i].x))
      throw DomainError("node " + std::to_string(i) + ": x coordinate " + nodes[i].x.str() +
                        " does not increase past " + nodes[i - 1].x.str());
    if (!(nodes[i - 1].y < nodes[i].y))
      throw DomainError("node " + std::to_string(i) + ": y coordinate " + nodes[i].y.str() +
                        " does not increase past " + nodes[i - 1].y.str());
  }
  return PLMap(canonicalize(std::move(nodes)), Canonical{});
}

Rat PLMap::operator()(const Rat& x) const {
  if (x < Rat(0) || x > Rat(1)) throw DomainError("evaluate: " + x.str() + " outside [0, 1]");
  // Last node with node.x <= x.
  std::size_t lo = 0, hi = nodes_.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi + 1) / 2;
    if (nodes_[mid].x <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  if (nodes_[lo].x == x) return nodes_[lo].y;
  const Node& a = nodes_[lo];
  const Node& b = nodes_[lo + 1];
  return a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x);
}

Rat PLMap::preimage(const Rat& y) const {
  if (y < Rat(0) || y > Rat(1)) throw DomainError("preimage: " + y.str() + " outside [0, 1]");
  std::size_t lo = 0, hi = nodes_.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi + 1) / 2;
    if (nodes_[mid].y <= y)
      lo = mid;
    else
      hi = mid - 1;
  }
  if (nodes_[lo].y == y) return nodes_[lo].x;
  const Node& a = nodes_[lo];
  const Node& b = nodes_[lo + 1];
  return a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
}

Rat evaluate(const PLMap& f, const Rat& x) { return f(x); }

PLMap compose(const PLMap& f, const PLMap& g) {
  // Breakpoints of fg sit at breakpoints of f or at f-preimages of
  // breakpoints of g; evaluating g(f(x)) at all candidates is exact.
  std::vector<Rat> xs;
  xs.reserve(f.nodes_.size() + g.nodes_.size());
  for (const Node& n : f.nodes_) xs.push_back(n.x);
  for (const Node& n : g.nodes_) xs.push_back(f.preimage(n.x));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Node> nodes;
  nodes.reserve(xs.size());
  for (Rat& x : xs) {
    Rat y = g(f(x));
    nodes.push_back({std::move(x), std::move(y)});
  }
  return PLMap(canonicalize(std::move(nodes)), PLMap::Canonical{});
}

PLMap inverse(const PLMap& f) {
  std::vector<Node> nodes;
  nodes.reserve(f.nodes_.size());
  for (const Node& n : f.nodes_) nodes.push_back({n.y, n.x});
  // Reciprocal slopes break exactly where the original ones do.
  return PLMap(std::move(nodes), PLMap::Canonical{});
}

PLMap power(const PLMap& f, long n) {
  if (n == 0) return PLMap::identity();
  PLMap base = n < 0 ? inverse(f) : f;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-(n + 1)) + 1 : static_cast<unsigned long>(n);
  PLMap acc = PLMap::identity();
  while (e > 0) {
    if (e & 1) acc = compose(acc, base);
    e >>= 1;
    if (e > 0) base = compose(base, base);
  }
  return acc;
}

PLMap conjugate(const PLMap& g, const PLMap& h) { return compose(compose(inverse(h), g), h); }

PLMap commutator(const PLMap& a, const PLMap& b) {
  return compose(compose(compose(inverse(a), inverse(b)), a), b);
}

PLMap double_commutator(const PLMap& h, const PLMap& k) { return commutator(commutator(h, k), k); }

std::vector<AffinePiece> affine_components(const PLMap& f) {
  std::vector<AffinePiece> pieces;
  const auto& nodes = f.nodes();
  pieces.reserve(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    Rat slope = (nodes[i + 1].y - nodes[i].y) / (nodes[i + 1].x - nodes[i].x);
    Rat intercept = nodes[i].y - slope * nodes[i].x;
    pieces.push_back({Interval{nodes[i].x, nodes[i + 1].x}, std::move(slope), std::move(intercept)});
  }
  return pieces;
}

std::vector<Rat> breakpoints(const PLMap& f) {
  std::vector<Rat> bs;
  const auto& nodes = f.nodes();
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) bs.push_back(nodes[i].x);
  return bs;
}

std::vector<Orbital> orbitals_of_map(const PLMap& f) {
  // Assemble the fixed set (a finite union of closed intervals, possibly
  // degenerate) and read the orbitals off as the gaps.
  struct Piece {
    Rat lo, hi;
  };
  std::vector<Piece> fixed;
  auto add = [&fixed](Rat lo, Rat hi) {
    if (!fixed.empty() && lo <= fixed.back().hi) {
      if (hi > fixed.back().hi) fixed.back().hi = std::move(hi);
      return;
    }
    fixed.push_back({std::move(lo), std::move(hi)});
  };
  const auto& nodes = f.nodes();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const Node& a = nodes[i];
    const Node& b = nodes[i + 1];
    if (a.y == a.x) add(a.x, a.x);
    if (a.y == a.x && b.y == b.x) {
      add(a.x, b.x);
      continue;
    }
    // Interior crossing of the diagonal: y_a + s(x - x_a) = x.
    Rat dy = b.y - a.y, dx = b.x - a.x;
    if (dy != dx) {
      // x* = (y_a * dx - x_a * dy) / (dx - dy)
      Rat xstar = (a.y * dx - a.x * dy) / (dx - dy);
      if (a.x < xstar && xstar < b.x) add(xstar, xstar);
    }
  }
  add(Rat(1), Rat(1));

  std::vector<Orbital> orbitals;
  for (std::size_t i = 0; i + 1 < fixed.size(); ++i) {
    Interval iv{fixed[i].hi, fixed[i + 1].lo};
    Rat mid = midpoint(iv.left, iv.right);
    Direction dir = f(mid) > mid ? Direction::Right : Direction::Left;
    orbitals.push_back({std::move(iv), dir});
  }
  return orbitals;
}

std::vector<Interval> orbital_intervals(const PLMap& f) {
  std::vector<Interval> out;
  for (auto& o : orbitals_of_map(f)) out.push_back(o.interval);
  return out;
}

std::pair<Rat, Rat> edge_slopes(const PLMap& f, const Interval& A) {
  bool found = false;
  for (const auto& o : orbitals_of_map(f))
    if (o.interval == A) {
      found = true;
      break;
    }
  if (!found) {
    std::ostringstream os;
    os << "edge_slopes: " << A << " is not an orbital of the map";
    throw DomainError(os.str());
  }
  auto pieces = affine_components(f);
  const AffinePiece* first = nullptr;
  const AffinePiece* last = nullptr;
  for (const auto& p : pieces) {
    if (intervals_overlap(p.interval, A)) {
      if (!first) first = &p;
      last = &p;
    }
  }
  return {first->slope, last->slope};
}

std::strong_ordering compare_left_order(const PLMap& f, const PLMap& g) {
  if (f == g) return std::strong_ordering::equal;
  std::vector<Rat> xs;
  for (const Node& n : f.nodes()) xs.push_back(n.x);
  for (const Node& n : g.nodes()) xs.push_back(n.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  // Both maps are affine between consecutive merged coordinates, so the
  // first segment where the increments differ locates the breakdown point;
  // the right derivatives there decide the order.
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    Rat df = f(xs[i + 1]) - f(xs[i]);
    Rat dg = g(xs[i + 1]) - g(xs[i]);
    if (df != dg) return df > dg ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return std::strong_ordering::equal;  // unreachable for distinct maps
}

PLMap project(const PLMap& f, const Interval& A) {
  if (!(f(A.left) == A.left && f(A.right) == A.right)) {
    std::ostringstream os;
    os << "project: map does not preserve " << A;
    throw DomainError(os.str());
  }
  std::vector<Node> nodes;
  nodes.push_back({Rat(0), Rat(0)});
  if (A.left != Rat(0)) nodes.push_back({A.left, A.left});
  for (const Node& n : f.nodes_)
    if (A.left < n.x && n.x < A.right) nodes.push_back(n);
  if (A.right != Rat(1)) nodes.push_back({A.right, A.right});
  nodes.push_back({Rat(1), Rat(1)});
  return PLMap::from_nodes(std::move(nodes));
}

std::optional<std::pair<Rat, Rat>> support_hull_in(const PLMap& f, const Interval& A) {
  std::optional<std::pair<Rat, Rat>> hull;
  for (const auto& o : orbitals_of_map(f)) {
    if (!intervals_overlap(o.interval, A)) continue;
    Rat lo = std::max(o.interval.left, A.left, [](const Rat& a, const Rat& b) { return a < b; });
    Rat hi = std::min(o.interval.right, A.right, [](const Rat& a, const Rat& b) { return a < b; });
    if (!hull) {
      hull = {lo, hi};
    } else {
      if (lo < hull->first) hull->first = lo;
      if (hi > hull->second) hull->second = hi;
    }
  }
  return hull;
}

std::ostream& operator<<(std::ostream& os, const PLMap& f) {
  os << "[";
  bool first = true;
  for (const Node& n : f.nodes()) {
    if (!first) os << ",";
    first = false;
    os << "[\"" << n.x << "\",\"" << n.y << "\"]";
  }
  return os << "]";
}

}  // namespace plhom
