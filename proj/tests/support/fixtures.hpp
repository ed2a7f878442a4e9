#pragma once

// Randomized admissible configurations with ground truth known by construction.

#include <random>
#include <vector>

#include "planefix/geom.hpp"
#include "planefix/index_var.hpp"
#include "planefix/plane_map.hpp"

namespace fixture {

using planefix::Point;

std::vector<Point> random_convex(std::mt19937_64& rng, int n, double radius = 1.0);
// Star-shaped about the origin, generally non-convex.
std::vector<Point> random_star(std::mt19937_64& rng, int n, double rmin = 0.5, double rmax = 1.2);

struct VariationCase {
  planefix::ArcPartition P;
  planefix::PlaneMap f = planefix::PlaneMap::polynomial({0.0});
  std::vector<int> expected;  // per arc, from the construction
  int oracle_index = 0;       // winding of the displacement loop, crossing-number oracle
  std::vector<Point> domain_samples, image_samples;
};
VariationCase variation_case(std::mt19937_64& rng, bool want_negative = false);

struct LollipopCase {
  planefix::ArcPartition P;
  std::size_t split = 1;
  planefix::PolyCurve I;
  planefix::PlaneMap f = planefix::PlaneMap::polynomial({0.0});
  bool right_side = true;
  int expected_lhs = 0;
  int oracle_rhs = 0;
};
LollipopCase lollipop_case(std::mt19937_64& rng);

// Signed number of times the angle theta_v (mod 2 pi) is passed while sweeping from t0 by delta.
int signed_passes(double theta_v, double t0, double delta);

}  // namespace fixture
