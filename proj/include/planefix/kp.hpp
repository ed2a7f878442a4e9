#pragma once

// Maximal balls in the complement of a polygonal continuum, their hyperbolic hulls,
// and point location by inversion.

#include <array>
#include <optional>
#include <vector>

#include "planefix/geom.hpp"

namespace planefix::kp {

inline constexpr double kContactTol = 1e-7;

struct MaximalBall {
  GeneralizedBall ball;
  std::vector<Point> contacts;  // ordered along the boundary of the ball
  bool sampled = false;         // member of a sampled two-contact family
};

// One gap of the contact set: the boundary arc of B running from a to b that K does not cover.
struct KPChord {
  Point a, b;
  PolyCurve curve;
  Point gap_mid;
  bool gap_at_infinity = false;
};

struct KPElement {
  MaximalBall ball;
  std::vector<KPChord> chords;  // distinct chords
  std::vector<KPChord> sides;   // one per gap; a two-contact element has two sides on the same chord
  bool is_gap = false;
  bool euclidean = false;

  bool contains(Point p, double eps = kEpsGeom) const;
};

// int(B) misses K up to tol.
bool empty_interior(const GeneralizedBall& B, const PolyContinuum& K, double tol = 1e-9);
// Points of K on the boundary of B, ordered along it.
std::vector<Point> contact_points(const GeneralizedBall& B, const PolyContinuum& K, double tol = kContactTol);

// Exact balls with three or more contacts or a flush edge, then `budget` samples per two-contact family.
std::vector<MaximalBall> maximal_balls(const PolyContinuum& K, int budget = 64);

// Maximal disks in the bounded domain of a simple polygon, exact and sampled as above.
std::vector<MaximalBall> interior_maximal_balls(const PolyContinuum& P, int budget = 64);

KPElement kp_element(const MaximalBall& B, const PolyContinuum& K, bool euclidean = false);

// Inversion about p, smallest ball around the image of K, and pull back.
KPElement kp_locate(Point p, const PolyContinuum& K);

// Circles through two contacts sliding along one parameter.
struct TwoContactFamily {
  enum class Type { vertex_vertex_disk, vertex_vertex_exterior, vertex_edge, edge_edge };
  Type type = Type::vertex_vertex_disk;
  Point u, v;        // vertices, or the first edge
  Point e0, e1;      // the (second) edge
  double side = 1.0;
  double sigma = 1.0;
  double lo = 0.0, hi = 1.0;

  std::optional<GeneralizedBall> at(double s) const;
};
std::vector<TwoContactFamily> two_contact_families(const PolyContinuum& K);

// Brute force over all maximal balls: the ball containing p whose inverted complement is smallest.
class EnumerationLocator {
 public:
  explicit EnumerationLocator(const PolyContinuum& K, int grid = 2048);
  GeneralizedBall locate(Point p) const;
  const std::vector<MaximalBall>& exact() const { return exact_; }

 private:
  struct Run {
    std::size_t family;
    double lo, hi;
    std::vector<double> s;
    std::vector<GeneralizedBall> balls;
  };
  PolyContinuum K_;
  std::vector<TwoContactFamily> families_;
  std::vector<MaximalBall> exact_;
  std::vector<Run> runs_;
};

// Radius of the image of the complement of B under inversion about p.
double inverted_radius(const GeneralizedBall& B, Point p);
// The image of the complement of B, a disk when p lies inside B.
Circle inverted_ball(const GeneralizedBall& B, Point p);
// Relative distance between the inverted complements; this is how located balls are compared.
double inverted_gap(const GeneralizedBall& a, const GeneralizedBall& b, Point p);
double coeff_distance(const GeneralizedBall& a, const GeneralizedBall& b);

struct ChordsBetween {
  enum class Kind { empty, single, disk, pencil };
  Kind kind = Kind::empty;
  std::vector<GeneralizedBall> balls;  // carriers of the extreme chords
  std::vector<PolyCurve> chords;
};
const char* kind_name(ChordsBetween::Kind k);
ChordsBetween chords_between(Point a, Point b, const PolyContinuum& K, int samples = 1024);

struct PartitionReport {
  int samples = 0;
  int located = 0;
  int agreements = 0;
  int double_memberships = 0;
  double max_gap = 0.0;
  std::vector<Point> disagreements;
};
PartitionReport partition_check(const PolyContinuum& K, const std::vector<Point>& samples);

}  // namespace planefix::kp
