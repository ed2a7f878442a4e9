#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "planefix/geom.hpp"

namespace planefix {

using cplx = std::complex<double>;

// Piecewise-linear data along one domain polyline: image[i] is the value at domain[i].
struct SampleCurve {
  std::vector<Point> domain;
  std::vector<Point> image;
  bool closed = false;
};

class PlaneMap {
 public:
  enum class Kind { polynomial, affine, mobius, function, samples };

  static PlaneMap polynomial(std::vector<cplx> coeffs);
  // (x, y) -> M (x, y) + t
  static PlaneMap affine(double a11, double a12, double a21, double a22, Point t);
  static PlaneMap mobius(cplx a, cplx b, cplx c, cplx d);
  static PlaneMap function(std::function<Point(Point)> fn, std::string name = "function");
  static PlaneMap samples(std::vector<SampleCurve> curves);

  Point operator()(Point z) const;
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool piecewise_linear() const { return kind_ == Kind::affine || kind_ == Kind::samples; }

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  const std::vector<SampleCurve>& curves() const { return curves_; }
  const std::array<cplx, 4>& mobius_coeffs() const { return mob_; }
  const std::array<double, 6>& affine_coeffs() const { return aff_; }

  // Parameters in (0,1) where the map has a kink along the segment [p, q].
  std::vector<double> kinks(Point p, Point q) const;

 private:
  Kind kind_ = Kind::function;
  std::string name_;
  std::vector<cplx> coeffs_;
  std::array<double, 6> aff_{};
  std::array<cplx, 4> mob_{};
  std::shared_ptr<const std::function<Point(Point)>> fn_;
  std::vector<SampleCurve> curves_;
};

cplx poly_eval(const std::vector<cplx>& c, cplx z);
std::vector<cplx> poly_derivative(const std::vector<cplx>& c);

}  // namespace planefix
