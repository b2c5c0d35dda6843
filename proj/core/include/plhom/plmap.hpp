#pragma once

#include <compare>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "plhom/rat.hpp"

namespace plhom {

/// An open subinterval (left, right) of [0,1].
struct Interval {
  Rat left, right;

  bool contains(const Rat& x) const { return left < x && x < right; }
  bool contains_closed(const Rat& x) const { return left <= x && x <= right; }
  /// Containment as open sets: (left,right) ⊇ (o.left,o.right).
  bool contains_interval(const Interval& o) const { return left <= o.left && o.right <= right; }
  bool properly_contains(const Interval& o) const { return contains_interval(o) && !(*this == o); }
  /// Closure of o lies inside this open interval.
  bool contains_closure(const Interval& o) const { return left < o.left && o.right < right; }
  Rat width() const { return right - left; }

  friend bool operator==(const Interval& a, const Interval& b) { return a.left == b.left && a.right == b.right; }

  /// Validates 0 <= left < right <= 1.
  static Interval checked(Rat l, Rat r);
};

/// Lexicographic (left, right) order, used wherever intervals are sorted.
bool interval_less(const Interval& a, const Interval& b);

/// Open intervals intersect.
bool intervals_overlap(const Interval& a, const Interval& b);

std::ostream& operator<<(std::ostream& os, const Interval& iv);

enum class Direction { Left, Right };

const char* to_string(Direction d);

struct Node {
  Rat x, y;
  friend bool operator==(const Node& a, const Node& b) { return a.x == b.x && a.y == b.y; }
};

/// One affine piece of a map: y = slope * x + intercept on the interval.
struct AffinePiece {
  Interval interval;
  Rat slope, intercept;
};

/// An orbital of a map: a maximal open interval of moved points, together
/// with the side the points move toward (uniform on the orbital).
struct Orbital {
  Interval interval;
  Direction direction;
  friend bool operator==(const Orbital& a, const Orbital& b) {
    return a.interval == b.interval && a.direction == b.direction;
  }
};

/// An orientation-preserving piecewise-linear homeomorphism of [0,1] with
/// finitely many breaks in slope, held in canonical breakpoint-list form:
/// the node list starts at (0,0), ends at (1,1), is strictly increasing in
/// both coordinates, and every interior node is a genuine slope break.
/// Canonical form makes equality decidable by node-list comparison.
///
/// Composition convention is the right action throughout the library:
/// compose(f, g) applies f first, then g.
class PLMap {
 public:
  PLMap();  // identity

  /// Validates the node list and drops interior nodes that are not slope
  /// breaks. Throws DomainError naming the offending node on bad input.
  static PLMap from_nodes(std::vector<Node> nodes);

  static const PLMap& identity();

  const std::vector<Node>& nodes() const { return nodes_; }
  bool is_identity() const { return nodes_.size() == 2; }

  /// Exact image of x; requires 0 <= x <= 1.
  Rat operator()(const Rat& x) const;

  /// Exact preimage of y; requires 0 <= y <= 1.
  Rat preimage(const Rat& y) const;

  friend bool operator==(const PLMap& a, const PLMap& b) { return a.nodes_ == b.nodes_; }

 private:
  struct Canonical {};
  PLMap(std::vector<Node> nodes, Canonical) : nodes_(std::move(nodes)) {}
  std::vector<Node> nodes_;

  friend PLMap compose(const PLMap&, const PLMap&);
  friend PLMap inverse(const PLMap&);
  friend PLMap project(const PLMap&, const Interval&);
};

Rat evaluate(const PLMap& f, const Rat& x);

/// Right action: evaluate(compose(f,g), x) == evaluate(g, evaluate(f, x)).
PLMap compose(const PLMap& f, const PLMap& g);

PLMap inverse(const PLMap& f);

/// Iterated composition; inverse iterates for negative n, identity for 0.
PLMap power(const PLMap& f, long n);

/// g^h = h^-1 g h. Orbitals of the result are the exact h-images of the
/// orbitals of g, with directions preserved.
PLMap conjugate(const PLMap& g, const PLMap& h);

/// [a,b] = a^-1 b^-1 a b.
PLMap commutator(const PLMap& a, const PLMap& b);

/// [[h,k],k].
PLMap double_commutator(const PLMap& h, const PLMap& k);

/// Maximal affine pieces, left to right; the first is the leading affine
/// component and the last the trailing one.
std::vector<AffinePiece> affine_components(const PLMap& f);

/// Interior x-coordinates where the slope breaks.
std::vector<Rat> breakpoints(const PLMap& f);

/// Connected components of the support {x : f(x) != x}, left to right.
std::vector<Orbital> orbitals_of_map(const PLMap& f);

std::vector<Interval> orbital_intervals(const PLMap& f);

/// Slopes of the first and last affine components of f meeting A.
/// Requires A to be an orbital of f.
std::pair<Rat, Rat> edge_slopes(const PLMap& f, const Interval& A);

/// Total "left order": compares right derivatives at the last point of
/// agreement from 0 (a node of one of the maps, or 0 itself).
std::strong_ordering compare_left_order(const PLMap& f, const PLMap& g);

/// Restriction of f to A extended by the identity. Requires f to map A
/// onto itself, i.e. f fixes both ends of A.
PLMap project(const PLMap& f, const Interval& A);

/// Hull [min,max] of the support of f inside the open interval A, or
/// nullopt when f fixes all of A.
std::optional<std::pair<Rat, Rat>> support_hull_in(const PLMap& f, const Interval& A);

std::ostream& operator<<(std::ostream& os, const PLMap& f);

}  // namespace plhom
