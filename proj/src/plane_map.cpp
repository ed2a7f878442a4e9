#include "planefix/plane_map.hpp"

#include <algorithm>

#include "planefix/error.hpp"

namespace planefix {

cplx poly_eval(const std::vector<cplx>& c, cplx z) {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<cplx> poly_derivative(const std::vector<cplx>& c) {
  std::vector<cplx> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  if (d.empty()) d.push_back(0.0);
  return d;
}

PlaneMap PlaneMap::polynomial(std::vector<cplx> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == cplx(0.0)) coeffs.pop_back();
  if (coeffs.empty()) throw Error(Errc::InvalidInput, "polynomial needs coefficients");
  PlaneMap m;
  m.kind_ = Kind::polynomial;
  m.name_ = "polynomial";
  m.coeffs_ = std::move(coeffs);
  return m;
}

PlaneMap PlaneMap::affine(double a11, double a12, double a21, double a22, Point t) {
  PlaneMap m;
  m.kind_ = Kind::affine;
  m.name_ = "affine";
  m.aff_ = {a11, a12, a21, a22, t.x, t.y};
  return m;
}

PlaneMap PlaneMap::mobius(cplx a, cplx b, cplx c, cplx d) {
  if (std::abs(a * d - b * c) == 0.0) throw Error(Errc::InvalidInput, "degenerate Mobius map");
  PlaneMap m;
  m.kind_ = Kind::mobius;
  m.name_ = "mobius";
  m.mob_ = {a, b, c, d};
  return m;
}

PlaneMap PlaneMap::function(std::function<Point(Point)> fn, std::string name) {
  PlaneMap m;
  m.kind_ = Kind::function;
  m.name_ = std::move(name);
  m.fn_ = std::make_shared<const std::function<Point(Point)>>(std::move(fn));
  return m;
}

PlaneMap PlaneMap::samples(std::vector<SampleCurve> curves) {
  if (curves.empty()) throw Error(Errc::InvalidInput, "samples map needs a curve");
  for (const auto& c : curves) {
    if (c.domain.size() < 2 || c.domain.size() != c.image.size())
      throw Error(Errc::InvalidInput, "sample curve needs >= 2 matched domain/image points");
  }
  PlaneMap m;
  m.kind_ = Kind::samples;
  m.name_ = "samples";
  m.curves_ = std::move(curves);
  return m;
}

Point PlaneMap::operator()(Point z) const {
  switch (kind_) {
    case Kind::polynomial: return Point(poly_eval(coeffs_, z.c()));
    case Kind::affine:
      return {aff_[0] * z.x + aff_[1] * z.y + aff_[4], aff_[2] * z.x + aff_[3] * z.y + aff_[5]};
    case Kind::mobius: {
      cplx w = z.c();
      cplx den = mob_[2] * w + mob_[3];
      if (std::abs(den) == 0.0) throw Error(Errc::OutsideDomain, "Mobius pole");
      return Point((mob_[0] * w + mob_[1]) / den);
    }
    case Kind::function: return (*fn_)(z);
    case Kind::samples: {
      double best = INFINITY;
      Point value;
      for (const auto& c : curves_) {
        std::size_t n = c.domain.size();
        std::size_t segs = c.closed ? n : n - 1;
        for (std::size_t i = 0; i < segs; ++i) {
          std::size_t j = (i + 1) % n;
          double t = segment_param(z, c.domain[i], c.domain[j]);
          double d = dist(z, c.domain[i] + (c.domain[j] - c.domain[i]) * t);
          if (d < best) {
            best = d;
            value = c.image[i] + (c.image[j] - c.image[i]) * t;
          }
        }
      }
      return value;
    }
  }
  return {};
}

std::vector<double> PlaneMap::kinks(Point p, Point q) const {
  std::vector<double> out;
  if (kind_ != Kind::samples) return out;
  double len = dist(p, q);
  if (len == 0.0) return out;
  for (const auto& c : curves_) {
    for (const Point& d : c.domain) {
      double t = dot(d - p, q - p) / (len * len);
      if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;
      if (point_segment_distance(d, p, q) <= 1e-9 * std::max(1.0, len)) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return b - a < 1e-12; }), out.end());
  return out;
}

}  // namespace planefix
