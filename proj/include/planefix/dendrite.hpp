#pragma once

// Finite metric trees with exact rational coordinates and piecewise-linear self maps.

#include <boost/rational.hpp>
#include <optional>
#include <vector>

namespace planefix::dendrite {

using Rational = boost::rational<long long>;

struct Edge {
  int u = 0, v = 0;
  Rational length{1};
};

struct Dendrite {
  int vertex_count = 0;
  std::vector<Edge> edges;

  void validate() const;
  int valence(int vertex) const;
  std::vector<std::vector<int>> incident() const;  // edge ids per vertex
};

// A vertex (vertex >= 0) or an interior point of an edge with parameter t in (0,1) from u to v.
struct TreePoint {
  int vertex = -1;
  int edge = -1;
  Rational t{0};

  static TreePoint at_vertex(int v);
  static TreePoint on_edge(const Dendrite& D, int edge, Rational t);  // canonicalizes t = 0, 1 to vertices
  bool operator==(const TreePoint& o) const;
  bool operator!=(const TreePoint& o) const { return !(*this == o); }
};

int point_valence(const Dendrite& D, const TreePoint& p);

// Subtree of D given by a connected set of its edges.
struct Subtree {
  std::vector<int> edges;

  std::vector<int> vertices(const Dendrite& D) const;
  bool has_edge(int e) const;
  bool contains(const Dendrite& D, const TreePoint& p) const;
};

Subtree whole(const Dendrite& D);
void validate_subtree(const Dendrite& D, const Subtree& S);

// One piece of a geodesic: edge parameter moving linearly from t0 to t1.
struct ArcPiece {
  int edge;
  Rational t0, t1;
};
std::vector<ArcPiece> geodesic(const Dendrite& D, const TreePoint& p, const TreePoint& q);
Rational distance(const Dendrite& D, const TreePoint& p, const TreePoint& q);

// Image of one domain edge: knots (s, f(point at s)) with s strictly increasing from 0 to 1.
struct Knot {
  Rational s;
  TreePoint image;
};

// s in [s0, s1] on domain edge `edge` maps to parameter a + b s on target edge `tedge`.
struct Cell {
  int edge;
  Rational s0, s1;
  int tedge;
  Rational a, b;
};

struct TreeMap {
  Dendrite tree;  // D2; the domain D1 is `domain`
  Subtree domain;
  std::vector<Cell> cells;

  static TreeMap from_knots(const Dendrite& D2, const Subtree& D1, const std::vector<std::vector<Knot>>& knots);
  TreePoint operator()(const TreePoint& p) const;
  std::vector<Cell> cells_on(int edge) const;
};

std::vector<int> boundary_set(const Dendrite& D2, const Subtree& D1);

// r: D2 -> D1, identity on D1, each component of D2 minus D1 collapsed to its attachment point.
TreeMap natural_retraction(const Dendrite& D2, const Subtree& D1);
TreeMap retracted_map(const TreeMap& f);
// f after g; the image of g must lie in the domain of f.
TreeMap compose(const TreeMap& f, const TreeMap& g, std::size_t cell_budget = 200000);
TreeMap iterate(const TreeMap& f, int n, std::size_t cell_budget = 200000);

struct ScrambleVerdict {
  bool scrambles = true;
  std::optional<int> violating;  // boundary vertex mapped into a component missing D1
};
ScrambleVerdict check_scrambling(const TreeMap& f);

// Exact fixed points; whole fixed intervals are reported by their endpoints.
std::vector<TreePoint> fixed_points(const TreeMap& f);

struct FixedPointResult {
  std::optional<TreePoint> point;
  bool scrambles = false;
  bool certified_none = false;
};
FixedPointResult find_fixed_point(const TreeMap& f);

// Fixed point strictly inside the arc (a, b), when a separates f(a) from b and b separates f(b) from a.
std::optional<TreePoint> fixed_point_between(const TreeMap& f, const TreePoint& a, const TreePoint& b);
bool separates(const Dendrite& D, const TreePoint& x, const TreePoint& p, const TreePoint& q);

// Branch at a: leave a along `edge`, toward v when `toward_v`.
struct Branch {
  int edge;
  bool toward_v;
};

struct WeakRepulsionReport {
  enum class Witness { none, separating, fixed_cutpoints };
  bool weakly_repelling = false;
  Witness kind = Witness::none;
  std::optional<TreePoint> witness;
  std::vector<bool> power_stable;  // verdict for the n-th iterate of r o f, n = 1..6
};
WeakRepulsionReport weakly_repelling(const TreeMap& f, const TreePoint& a, const Branch& B);

struct PeriodicPoint {
  TreePoint point;
  int period;
};
std::vector<PeriodicPoint> periodic_cutpoints(const TreeMap& f, int up_to, std::size_t cell_budget = 200000);

}  // namespace planefix::dendrite
