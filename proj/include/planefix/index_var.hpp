#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "planefix/geom.hpp"
#include "planefix/plane_map.hpp"

namespace planefix {

inline constexpr double kEpsFix = 1e-7;

struct CircleMapSamples {
  std::vector<double> t;      // angles in [0,1), increasing
  std::vector<Point> value;   // points on the unit circle
};

// Lift increment over one turn. `refine` (optional) evaluates g at any t and is used to split wide gaps.
int circle_map_degree(const CircleMapSamples& g, const std::function<Point(double)>& refine = {});

// Angle swept by f(z) - z along `path`. Linear pieces are exact; others are refined until steps are below pi/4.
struct SweepResult {
  double angle = 0.0;
  double min_norm = INFINITY;
};
SweepResult sweep_displacement(const std::vector<Point>& path, const PlaneMap& f, int min_pieces = 1);

PolyCurve counterclockwise(const PolyCurve& S);
// Counterclockwise sub-arc of a closed curve from a to b; a == b yields the whole loop.
std::vector<Point> sub_arc(const PolyCurve& S, Point a, Point b);

int index(const PolyCurve& S, const PlaneMap& f);
double fractional_index(const PolyCurve& S, Point a, Point b, const PlaneMap& f);

struct Ray {
  std::vector<Point> pts;  // starts at the junction vertex
  Point dir;               // the ray continues from pts.back() along dir
};

struct Junction {
  Point vertex;
  Ray plus, inner, minus;
  const Ray& ray(int k) const { return k == 0 ? plus : (k == 1 ? inner : minus); }
};

struct JunctionOptions {
  std::uint64_t seed = 0;  // nonzero routes through a random waypoint
  int resolution = 64;
};

Junction make_junction(Point v, const PolyContinuum* X, const PolyCurve& S, const JunctionOptions& opt = {});
Junction make_junction(Point v, const PolyContinuum& X, const PolyCurve& S, const JunctionOptions& opt = {});
// Rays pairwise disjoint off the vertex and disjoint from X and S off the vertex.
bool junction_clear(const Junction& J, const PolyContinuum* X, const PolyCurve& S);

struct ArcPartition {
  PolyCurve curve;          // closed, counterclockwise
  std::vector<Point> cuts;  // a_0 < a_1 < ... counterclockwise
  void validate() const;
  std::size_t arc_count() const { return cuts.size(); }
  Point start(std::size_t i) const { return cuts[i % cuts.size()]; }
  Point end(std::size_t i) const { return cuts[(i + 1) % cuts.size()]; }
  std::vector<Point> arc(std::size_t i) const;
  Point midpoint(std::size_t i) const;
};

// Image of a domain path, exact for PL maps and refined otherwise.
std::vector<Point> image_path(const std::vector<Point>& path, const PlaneMap& f);

struct Crossing {
  double param;  // position along the domain path (segment index + fraction)
  int ray;       // 0 = J^+, 1 = J^i, 2 = J^-
};
std::vector<Crossing> junction_crossings(const std::vector<Point>& image, const Junction& J);
int count_variation(const std::vector<Crossing>& m);

// Shared core: f(arc) must stay off the arc.
int variation_on_path(const std::vector<Point>& arc, const PlaneMap& f, const Junction& J);
int variation_arc(const PolyCurve& S, Point a, Point b, const PlaneMap& f, const Junction& J);

struct VariationReport {
  std::vector<int> per_arc;
  int total = 0;
  int index = 0;
  bool identity_holds = false;
};
VariationReport variation_total(const ArcPartition& P, const PlaneMap& f, std::uint64_t seed = 0);

struct LollipopReport {
  bool image_in_right = false;  // f(a_{n+1}) in R = T([a_0, a_{n+1}] + I)
  std::vector<int> per_arc;
  int variation_sum = 0;
  int lhs = 0;  // variation_sum + 1
  int rhs = 0;  // index on the boundary of R or L
  bool holds = false;
};
// `split` is n + 1: I joins cuts[0] to cuts[split].
LollipopReport lollipop_check(const ArcPartition& P, std::size_t split, const PolyCurve& I, const PlaneMap& f,
                              std::uint64_t seed = 0);

struct FixedPointEnclosure {
  Box box;
  Point center;
  int index = 0;
};
std::vector<FixedPointEnclosure> locate_fixed_points(const Box& region, const PlaneMap& f, int max_depth,
                                                     std::uint64_t seed = 0);
int box_index(const Box& b, const PlaneMap& f);

}  // namespace planefix
