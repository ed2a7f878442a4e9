#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace planefix {

inline constexpr double kEpsGeom = 1e-9;
inline constexpr int kArcSamples = 64;
inline constexpr double kPi = 3.14159265358979323846;

struct Point {
  double x = 0.0;
  double y = 0.0;

  Point() = default;
  Point(double x_, double y_) : x(x_), y(y_) {}
  explicit Point(std::complex<double> z) : x(z.real()), y(z.imag()) {}

  Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  Point operator-() const { return {-x, -y}; }
  Point operator*(double s) const { return {x * s, y * s}; }
  Point operator/(double s) const { return {x / s, y / s}; }
  Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
  Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }
  bool operator==(const Point&) const = default;

  std::complex<double> c() const { return {x, y}; }
};

inline Point operator*(double s, Point p) { return p * s; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point a) { return dot(a, a); }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point perp(Point a) { return {-a.y, a.x}; }
inline Point unit(Point a) { return a / norm(a); }
inline bool near(Point a, Point b, double eps = kEpsGeom) { return dist(a, b) <= eps; }
inline Point polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

struct Segment {
  Point a, b;
};

Point closest_on_segment(Point p, Point a, Point b);
double point_segment_distance(Point p, Point a, Point b);
// Parameter t in [0,1] of the closest point.
double segment_param(Point p, Point a, Point b);
// Closed segments share at least one point.
bool segments_intersect(Point a, Point b, Point c, Point d, double eps = kEpsGeom);
// Single transversal crossing of the open segments; returns (t on ab, u on cd).
std::optional<std::pair<double, double>> proper_crossing(Point a, Point b, Point c, Point d);
double segment_segment_distance(Point a, Point b, Point c, Point d);

struct Box {
  Point lo, hi;
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  Point center() const { return (lo + hi) * 0.5; }
  bool contains(Point p, double eps = 0.0) const {
    return p.x >= lo.x - eps && p.x <= hi.x + eps && p.y >= lo.y - eps && p.y <= hi.y + eps;
  }
  Box expanded(double factor) const;
  void include(Point p);
  static Box of(const std::vector<Point>& pts);
};

struct GeneralizedBall {
  enum class Kind { disk, half_plane, exterior_disk };
  Kind kind = Kind::disk;
  Point center;
  double radius = 0.0;
  // half-plane: a point on the boundary line and the unit normal pointing into the ball
  Point line_point;
  Point normal;

  static GeneralizedBall disk(Point c, double r);
  static GeneralizedBall exterior(Point c, double r);
  static GeneralizedBall half_plane(Point q, Point n);

  // Negative inside, zero on the boundary, positive outside (Euclidean distance to the boundary).
  double depth(Point p) const;
  bool contains(Point p, double eps = kEpsGeom) const { return depth(p) <= eps; }
  bool interior_contains(Point p, double eps = kEpsGeom) const { return depth(p) < -eps; }
  double boundary_distance(Point p) const { return std::abs(depth(p)); }
  Point project_to_boundary(Point p) const;
  bool on_boundary(Point p, double eps = 1e-7) const { return boundary_distance(p) <= eps; }

  // Normalized generalized-circle coefficients (A, Bx, By, C): the ball is A|z|^2 + B.z + C <= 0,
  // scaled so that |B|^2/4 - AC = 1.
  std::array<double, 4> coeffs() const;
  // -Q(p) in normalized coefficients; positive inside.
  double power(Point p) const;
};

struct PolyCurve {
  std::vector<Point> vertices;
  bool closed = false;

  PolyCurve() = default;
  PolyCurve(std::vector<Point> v, bool c) : vertices(std::move(v)), closed(c) {}

  std::size_t segment_count() const;
  Segment segment(std::size_t i) const;
  std::vector<double> cumulative_lengths() const;
  double length() const;
  Point at(double s) const;
  double project(Point p) const;
  double distance(Point p) const;
  double signed_area() const;
  bool is_simple() const;
  Box bbox() const { return Box::of(vertices); }
  PolyCurve reversed() const;
  void validate() const;
};

struct PolyContinuum {
  enum class Kind { polygon, tree, disjoint_union };
  Kind kind = Kind::polygon;
  PolyCurve boundary;
  std::vector<Point> nodes;
  std::vector<std::pair<int, int>> edges;
  std::vector<PolyContinuum> parts;

  static PolyContinuum polygon(std::vector<Point> v);
  static PolyContinuum tree(std::vector<Point> nodes, std::vector<std::pair<int, int>> edges);
  static PolyContinuum segment(Point a, Point b);
  static PolyContinuum disjoint_union(std::vector<PolyContinuum> parts);

  std::vector<Segment> segments() const;
  std::vector<Point> points() const;
  double distance(Point p) const;
  // p in T(X), boundary inclusive within eps
  bool hull_contains(Point p, double eps = kEpsGeom) const;
  Box bbox() const;
  void validate() const;
};

double winding_angle(const std::vector<Point>& ring, Point w);
int winding_number(const PolyCurve& curve, Point w);
// Winding number of a closed ring that may self-intersect.
int ring_winding(const std::vector<Point>& ring, Point w, double eps = kEpsGeom);
bool polygon_contains(const std::vector<Point>& ring, Point w);

struct Circle {
  Point center;
  double radius = 0.0;
};

std::optional<Circle> circumcircle(Point a, Point b, Point c);
GeneralizedBall smallest_enclosing_ball(const std::vector<Point>& points);
Point invert(Point p, Point center);
PolyCurve hyperbolic_geodesic(const GeneralizedBall& ball, Point a, Point b, int n = kArcSamples);

std::vector<Point> regular_polygon(int n, double radius, Point center = {}, double phase = 0.0);

}  // namespace planefix
