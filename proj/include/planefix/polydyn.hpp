#pragma once

// Polynomial dynamics: fixed points, local index, external rays, crosscuts and planar boundary scrambling.

#include <boost/rational.hpp>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "planefix/geom.hpp"
#include "planefix/plane_map.hpp"

namespace planefix::polydyn {

using Angle = boost::rational<long long>;

inline constexpr double kClassTol = 1e-9;
inline constexpr int kMaxRationalDenominator = 64;
inline constexpr double kBranchEps = 1e-6;
inline constexpr double kResidualTol = 1e-10;

struct Polynomial {
  std::vector<cplx> coeffs;  // ascending degree

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;
  void validate() const;
  PlaneMap as_map() const { return PlaneMap::polynomial(coeffs); }
};

// Roots of p (ascending coefficients), companion-matrix eigenvalues polished by Newton steps.
std::vector<cplx> roots(const std::vector<cplx>& p);

enum class FixedClass { repelling, attracting, parabolic, irrational_neutral };
const char* class_name(FixedClass c);
FixedClass classify(cplx multiplier, double tol = kClassTol);
// Denominator q <= max_den with |x - p/q| <= tol, if any.
std::optional<std::pair<long long, long long>> rational_approximation(double x, int max_den, double tol);

struct FixedPointRecord {
  Point location;
  cplx multiplier;
  FixedClass cls = FixedClass::repelling;
  int local_index = 0;
  int cluster_size = 1;
};
std::vector<FixedPointRecord> fixed_points(const Polynomial& P);

// Index on shrinking circles about p until two consecutive radii agree.
int local_index(const PlaneMap& f, Point p, double r0 = 0.25);

struct ArgumentReport {
  int curve_index = 0;
  std::vector<std::pair<Point, int>> located;  // fixed points inside T(S) with local indices
  int sum = 0;
  bool holds = false;
};
ArgumentReport argument_principle_check(const PlaneMap& f, const PolyCurve& S, int max_depth = 9);

// z = scale * u + shift turns P into the monic centered Q(u).
struct MonicConjugation {
  cplx scale{1.0, 0.0};
  cplx shift{0.0, 0.0};
  Polynomial monic;
};
MonicConjugation monic_conjugation(const Polynomial& P);

struct ExternalRay {
  Angle angle;
  std::vector<Point> trace;  // original coordinates, from the anchor inward
  int generations = 0;
  int substeps = 8;
  double anchor_radius = 0.0;
};

struct RayOptions {
  int generations = 24;
  int substeps = 8;
  double radius = 0.0;  // 0 picks 2 + sum |coeffs| of the monic conjugate
};
ExternalRay trace_external_ray(const Polynomial& P, Angle theta, const RayOptions& opt = {});

struct Landing {
  bool landed = false;
  Point point;
  double tail_diameter = 0.0;
};
// The last generation of the trace is the tail.
Landing landing_point(const ExternalRay& ray, double tol = 1e-6);

// Bounded component of the complement of T(X) and Q containing a tail of the ray.
bool essential_crossing(const ExternalRay& ray, const std::vector<Point>& Q, const PolyContinuum& X);
// Checks Q: endpoints on X, interior off T(X).
void validate_crosscut(const std::vector<Point>& Q, const PolyContinuum& X, double tol = 1e-7);
// Path inside X joining two of its points.
std::vector<Point> path_in_continuum(const PolyContinuum& X, Point a, Point b);
bool in_pocket(Point p, const std::vector<Point>& Q, const PolyContinuum& X);

struct CrosscutVariation {
  int value = 0;
  std::vector<Point> oriented;  // Q traversed with the unbounded side on its right
  Point junction_vertex;
};
CrosscutVariation crosscut_variation(const PlaneMap& f, const std::vector<Point>& Q, const PolyContinuum& X);

struct ScrambleConfig {
  PolyContinuum X;
  std::vector<PolyContinuum> Z, K;
  PlaneMap f = PlaneMap::polynomial({0.0});
};

struct ScrambleReport {
  enum class Verdict { strongly_scrambles, scrambles, fails };
  Verdict verdict = Verdict::strongly_scrambles;
  std::string clause;  // "1", "2", "3" on failure; "3a" when only strong scrambling fails
  std::optional<Point> witness;
  int component = -1;
};
const char* verdict_name(ScrambleReport::Verdict v);
ScrambleReport check_scrambling(const ScrambleConfig& cfg, int samples = 32, double tol = 1e-7);

}  // namespace planefix::polydyn
