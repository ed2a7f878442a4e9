#pragma once

// Extension of a boundary homeomorphism between polygons over the enclosed disks,
// through the straight-chord lamination of maximal disks in the target.

#include <utility>
#include <vector>

#include "planefix/geom.hpp"
#include "planefix/kp.hpp"

namespace planefix::schoenflies {

struct Chord {
  Point a, b;
  bool gap_side = false;
};

struct Gap {
  kp::MaximalBall ball;
  Point barycenter;  // mean of the contacts
};

struct InteriorLamination {
  std::vector<Point> polygon;  // counter-clockwise
  std::vector<Chord> chords;   // gap sides, then the longest two-contact chords
  std::vector<Gap> gaps;
};

// `samples` members per two-contact family; the `budget` longest of them are kept.
InteriorLamination build_interior_lamination(const std::vector<Point>& polygon, int budget = 256,
                                             int samples = 256);

// Boundary correspondence, linear in arc length between paired points.
class BoundaryMap {
 public:
  BoundaryMap(const std::vector<Point>& source, const std::vector<Point>& target,
              const std::vector<std::pair<Point, Point>>& pairs);

  Point operator()(Point p) const;
  Point inverse(Point q) const;
  double forward_param(double s) const;
  double inverse_param(double t) const;

  const PolyCurve& source() const { return source_; }
  const PolyCurve& target() const { return target_; }
  const std::vector<double>& source_breaks() const { return s_; }

 private:
  PolyCurve source_, target_;
  double ls_ = 0.0, lt_ = 0.0;
  std::vector<double> s_, t_;  // t_ unwrapped and increasing
};

// A face of the source cut by the pulled-back chords, with its image.
struct Face {
  std::vector<Point> source, target;
  Point source_center, target_center;
  int gap = -1;
  Box bounds;
};

class ExtendedMap {
 public:
  Point operator()(Point p) const;

  const BoundaryMap& boundary() const { return h_; }
  const InteriorLamination& lamination() const { return lam_; }
  const std::vector<Chord>& source_chords() const { return pulled_; }
  const std::vector<Face>& faces() const { return faces_; }
  // Smallest signed area over the fan triangles of the target faces.
  double min_fan_area() const;

 private:
  friend ExtendedMap extend_homeomorphism(const std::vector<Point>&, const std::vector<Point>&,
                                          const std::vector<std::pair<Point, Point>>&, int);
  explicit ExtendedMap(BoundaryMap h) : h_(std::move(h)) {}

  BoundaryMap h_;
  InteriorLamination lam_;
  std::vector<Chord> pulled_;
  std::vector<Face> faces_;
  double scale_ = 1.0;
};

// `source` must be convex, and every target vertex must be the image of a source vertex.
ExtendedMap extend_homeomorphism(const std::vector<Point>& source, const std::vector<Point>& target,
                                 const std::vector<std::pair<Point, Point>>& h, int budget = 256);

Point evaluate(const ExtendedMap& H, Point p);

struct InjectivityReport {
  int samples = 0;
  int collisions = 0;
  double min_separation = 0.0;
  double min_fan_area = 0.0;
};
// Images of a grid of about `samples` source points, bucketed to find pairs closer than kEpsGeom.
InjectivityReport injectivity_probe(const ExtendedMap& H, int samples = 10000);

}  // namespace planefix::schoenflies
