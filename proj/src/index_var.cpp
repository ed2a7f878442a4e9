#include "planefix/index_var.hpp"

#include <algorithm>
#include <random>

#include "planefix/error.hpp"

namespace planefix {

namespace {

double step_angle(Point a, Point b) { return std::atan2(cross(a, b), dot(a, b)); }

double origin_segment_distance(Point a, Point b) { return point_segment_distance({0.0, 0.0}, a, b); }

struct Sweeper {
  const PlaneMap& f;
  bool pl;
  SweepResult out;

  Point disp(Point z) const { return f(z) - z; }

  void piece(Point p, Point q, Point vp, Point vq, int depth) {
    Point m = (p + q) * 0.5;
    Point vm = disp(m);
    double a = step_angle(vp, vq);
    double split = step_angle(vp, vm) + step_angle(vm, vq);
    double scale = norm(vp) + norm(vq);
    bool linear = norm(vm - (vp + vq) * 0.5) <= 1e-12 * std::max(scale, 1e-300);
    bool accept = std::abs(a) < kPi / 4 && std::abs(split - a) < 1e-12 && (!pl || linear);
    if (accept || depth >= 48) {
      out.angle += a;
      out.min_norm = std::min(out.min_norm, pl && linear ? origin_segment_distance(vp, vq)
                                                         : std::min({norm(vp), norm(vq), norm(vm)}));
      return;
    }
    piece(p, m, vp, vm, depth + 1);
    piece(m, q, vm, vq, depth + 1);
  }
};

}  // namespace

SweepResult sweep_displacement(const std::vector<Point>& path, const PlaneMap& f, int min_pieces) {
  Sweeper s{f, f.piecewise_linear(), {}};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    Point p = path[i], q = path[i + 1];
    std::vector<double> ts{0.0};
    for (double k : f.kinks(p, q)) ts.push_back(k);
    ts.push_back(1.0);
    for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
      int pieces = s.pl ? 1 : std::max(1, min_pieces);
      for (int k = 0; k < pieces; ++k) {
        double t0 = ts[j] + (ts[j + 1] - ts[j]) * k / pieces;
        double t1 = ts[j] + (ts[j + 1] - ts[j]) * (k + 1) / pieces;
        Point a = p + (q - p) * t0, b = p + (q - p) * t1;
        s.piece(a, b, s.disp(a), s.disp(b), 0);
      }
    }
  }
  return s.out;
}

int circle_map_degree(const CircleMapSamples& g, const std::function<Point(double)>& refine) {
  std::size_t n = g.t.size();
  if (n < 8 || g.value.size() != n) throw Error(Errc::InsufficientSamples, "circle map needs >= 8 samples");
  double total = 0.0;
  std::function<void(double, Point, double, Point, int)> span = [&](double t0, Point v0, double t1, Point v1,
                                                                     int depth) {
    double a = step_angle(v0, v1);
    if (std::abs(a) < kPi / 2) {
      total += a;
      return;
    }
    if (!refine || depth > 30) throw Error(Errc::InsufficientSamples, "angular gap of pi/2 or more between samples");
    double tm = 0.5 * (t0 + t1);
    Point vm = refine(tm - std::floor(tm));
    span(t0, v0, tm, vm, depth + 1);
    span(tm, vm, t1, v1, depth + 1);
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (i + 1) % n;
    double t1 = j == 0 ? g.t[0] + 1.0 : g.t[j];
    span(g.t[i], g.value[i], t1, g.value[j], 0);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

PolyCurve counterclockwise(const PolyCurve& S) {
  if (!S.closed) throw Error(Errc::InvalidInput, "curve must be closed");
  return S.signed_area() < 0 ? S.reversed() : S;
}

std::vector<Point> sub_arc(const PolyCurve& S, Point a, Point b) {
  if (S.distance(a) > 1e-7 || S.distance(b) > 1e-7) throw Error(Errc::InvalidInput, "arc endpoints must lie on the curve");
  auto cum = S.cumulative_lengths();
  double L = cum.back();
  double sa = S.project(a), sb = S.project(b);
  if (std::abs(sb - sa) <= 1e-12 * L || std::abs(std::abs(sb - sa) - L) <= 1e-12 * L) sb = sa + L;
  else if (sb < sa) sb += L;
  std::vector<Point> out{a};
  std::size_t n = S.vertices.size();
  for (int round = 0; round < 2; ++round) {
    for (std::size_t k = 0; k < n; ++k) {
      double s = cum[k] + round * L;
      if (s > sa + 1e-12 * L && s < sb - 1e-12 * L) out.push_back(S.vertices[k]);
    }
  }
  out.push_back(b);
  return out;
}

namespace {

int min_pieces_for(std::size_t segments) {
  return static_cast<int>(std::max<std::size_t>(1, (256 + segments - 1) / std::max<std::size_t>(segments, 1)));
}

int rounded_turns(double angle) {
  double turns = angle / (2.0 * kPi);
  double k = std::round(turns);
  if (std::abs(turns - k) > 0.1) throw Error(Errc::InsufficientSamples, "index residual too large");
  return static_cast<int>(k);
}

int ring_index(const std::vector<Point>& ring, const PlaneMap& f) {
  std::vector<Point> path = ring;
  path.push_back(ring.front());
  SweepResult r = sweep_displacement(path, f, min_pieces_for(ring.size()));
  if (r.min_norm <= kEpsFix) throw Error(Errc::FixedPointOnCurve, "f has a fixed point on the curve");
  return rounded_turns(r.angle);
}

}  // namespace

int index(const PolyCurve& S, const PlaneMap& f) {
  PolyCurve C = counterclockwise(S);
  return ring_index(C.vertices, f);
}

double fractional_index(const PolyCurve& S, Point a, Point b, const PlaneMap& f) {
  PolyCurve C = counterclockwise(S);
  std::vector<Point> path = sub_arc(C, a, b);
  SweepResult r = sweep_displacement(path, f, min_pieces_for(C.vertices.size()));
  if (r.min_norm <= kEpsFix) throw Error(Errc::FixedPointOnCurve, "f has a fixed point on the arc");
  return r.angle / (2.0 * kPi);
}

void ArcPartition::validate() const {
  if (!curve.closed) throw Error(Errc::InvalidInput, "partition curve must be closed");
  curve.validate();
  if (curve.signed_area() <= 0) throw Error(Errc::InvalidInput, "partition curve must be counterclockwise");
  if (cuts.empty()) throw Error(Errc::InvalidInput, "partition needs a cut point");
  double L = curve.length();
  double s0 = curve.project(cuts[0]);
  double prev = -1.0;
  for (const Point& c : cuts) {
    if (curve.distance(c) > 1e-7) throw Error(Errc::InvalidInput, "cut point off the curve");
    double s = curve.project(c) - s0;
    if (s < 0) s += L;
    if (s >= L - 1e-12 * L) s -= L;
    if (s <= prev + 1e-9 * L) throw Error(Errc::InvalidInput, "cut points must be distinct and counterclockwise");
    prev = s;
  }
}

std::vector<Point> ArcPartition::arc(std::size_t i) const { return sub_arc(curve, start(i), end(i)); }

Point ArcPartition::midpoint(std::size_t i) const {
  std::vector<Point> a = arc(i);
  PolyCurve pc(a, false);
  return pc.at(0.5 * pc.length());
}

std::vector<Point> image_path(const std::vector<Point>& path, const PlaneMap& f) {
  std::vector<Point> out;
  if (path.empty()) return out;
  double scale = 1.0;
  for (const Point& p : path) scale = std::max(scale, norm(f(p)));
  const double tol = 1e-6 * scale;
  bool pl = f.piecewise_linear();
  std::function<void(Point, Point, Point, Point, int)> rec = [&](Point p, Point q, Point fp, Point fq, int depth) {
    Point m = (p + q) * 0.5;
    Point fm = f(m);
    bool flat = norm(fm - (fp + fq) * 0.5) <= (pl ? 1e-12 * scale : tol);
    if (depth >= 18 || (flat && (pl || depth >= 2))) {
      out.push_back(fq);
      return;
    }
    rec(p, m, fp, fm, depth + 1);
    rec(m, q, fm, fq, depth + 1);
  };
  out.push_back(f(path[0]));
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    Point p = path[i], q = path[i + 1];
    std::vector<double> ts{0.0};
    for (double k : f.kinks(p, q)) ts.push_back(k);
    ts.push_back(1.0);
    for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
      Point a = p + (q - p) * ts[j], b = p + (q - p) * ts[j + 1];
      rec(a, b, out.back(), f(b), 0);
    }
  }
  return out;
}

namespace {

// Transversal crossing of image segment p->q with the carrier of c->d; half-open in both parameters.
std::optional<double> cross_param(Point p, Point q, Point c, Point d, bool half_line) {
  Point dir = d - c;
  double sp = cross(dir, p - c), sq = cross(dir, q - c);
  if ((sp >= 0) == (sq >= 0)) return std::nullopt;
  double t = sp / (sp - sq);
  if (t >= 1.0) return std::nullopt;
  Point x = p + (q - p) * t;
  double u = dot(x - c, dir) / norm2(dir);
  if (u < 0.0) return std::nullopt;
  if (!half_line && u >= 1.0) return std::nullopt;
  return t;
}

double segment_ray_distance(Point a, Point b, Point c, Point dir) {
  // ray c + s dir, s >= 0
  if (cross_param(a, b, c, c + dir, true)) return 0.0;
  auto pr = [&](Point p) {
    double s = std::max(0.0, dot(p - c, dir) / norm2(dir));
    return dist(p, c + dir * s);
  };
  double d = std::min(pr(a), pr(b));
  d = std::min(d, point_segment_distance(c, a, b));
  return d;
}

double path_path_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  double best = INFINITY;
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    for (std::size_t j = 0; j + 1 < b.size(); ++j)
      best = std::min(best, segment_segment_distance(a[i], a[i + 1], b[j], b[j + 1]));
  if (a.size() == 1)
    for (std::size_t j = 0; j + 1 < b.size(); ++j) best = std::min(best, point_segment_distance(a[0], b[j], b[j + 1]));
  return best;
}

double path_junction_distance(const std::vector<Point>& path, const Junction& J) {
  double best = INFINITY;
  for (int k = 0; k < 3; ++k) {
    const Ray& r = J.ray(k);
    best = std::min(best, path_path_distance(path, r.pts));
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      best = std::min(best, segment_ray_distance(path[i], path[i + 1], r.pts.back(), r.dir));
  }
  return best;
}

bool in_hull(const PolyCurve& S, Point p) { return S.distance(p) <= kEpsGeom || polygon_contains(S.vertices, p); }

}  // namespace

std::vector<Crossing> junction_crossings(const std::vector<Point>& image, const Junction& J) {
  std::vector<Crossing> m;
  for (std::size_t i = 0; i + 1 < image.size(); ++i) {
    Point p = image[i], q = image[i + 1];
    for (int k = 0; k < 3; ++k) {
      const Ray& r = J.ray(k);
      for (std::size_t j = 0; j + 1 < r.pts.size(); ++j)
        if (auto t = cross_param(p, q, r.pts[j], r.pts[j + 1], false)) m.push_back({i + *t, k});
      if (auto t = cross_param(p, q, r.pts.back(), r.pts.back() + r.dir, true)) m.push_back({i + *t, k});
    }
  }
  std::sort(m.begin(), m.end(), [](const Crossing& a, const Crossing& b) {
    return a.param < b.param || (a.param == b.param && a.ray < b.ray);
  });
  return m;
}

int count_variation(const std::vector<Crossing>& m) {
  int v = 0;
  for (std::size_t j = 0; j + 1 < m.size(); ++j) {
    if (m[j].ray == 0 && m[j + 1].ray == 1) ++v;
    if (m[j].ray == 1 && m[j + 1].ray == 0) --v;
  }
  return v;
}

int variation_on_path(const std::vector<Point>& arc, const PlaneMap& f, const Junction& J) {
  std::vector<Point> img = image_path(arc, f);
  if (path_path_distance(img, arc) < kEpsFix) throw Error(Errc::ArcNotMovedOff, "f(A) meets A");
  return count_variation(junction_crossings(img, J));
}

int variation_arc(const PolyCurve& S, Point a, Point b, const PlaneMap& f, const Junction& J) {
  PolyCurve C = counterclockwise(S);
  if (!in_hull(C, f(a)) || !in_hull(C, f(b))) throw Error(Errc::EndpointEscapes, "f(a) or f(b) lies outside T(S)");
  std::vector<Point> arc = sub_arc(C, a, b);
  if (PolyCurve(arc, false).distance(J.vertex) > 1e-7) throw Error(Errc::InvalidInput, "junction vertex is not on the arc");
  return variation_on_path(arc, f, J);
}

VariationReport variation_total(const ArcPartition& P, const PlaneMap& f, std::uint64_t seed) {
  P.validate();
  VariationReport rep;
  for (std::size_t i = 0; i < P.arc_count(); ++i) {
    try {
      JunctionOptions opt;
      opt.seed = seed == 0 ? 0 : seed + i;
      Junction J = make_junction(P.midpoint(i), nullptr, P.curve, opt);
      rep.per_arc.push_back(variation_arc(P.curve, P.start(i), P.end(i), f, J));
    } catch (const Error& e) {
      throw Error(e.code(), "arc " + std::to_string(i) + ": " + e.what());
    }
  }
  for (int v : rep.per_arc) rep.total += v;
  rep.index = index(P.curve, f);
  rep.identity_holds = rep.index == rep.total + 1;
  return rep;
}

LollipopReport lollipop_check(const ArcPartition& P, std::size_t split, const PolyCurve& I_in, const PlaneMap& f,
                              std::uint64_t seed) {
  auto fail = [](const std::string& clause) { throw Error(Errc::HypothesisFailed, clause); };
  P.validate();
  const PolyCurve& S = P.curve;
  std::size_t m1 = P.cuts.size();
  if (split < 1 || split >= m1) fail("split index must select a cut point other than a_0");
  Point a0 = P.cuts[0], an = P.cuts[split];

  std::vector<Point> I = I_in.vertices;
  if (I.size() < 2 || I_in.closed) fail("I must be an open arc");
  if (near(I.back(), a0, 1e-7) && near(I.front(), an, 1e-7)) std::reverse(I.begin(), I.end());
  if (!near(I.front(), a0, 1e-7) || !near(I.back(), an, 1e-7)) fail("I must join a_0 and a_{n+1}");
  I.front() = a0;
  I.back() = an;
  if (!PolyCurve(I, false).is_simple()) fail("I must be simple");
  for (std::size_t k = 1; k + 1 < I.size(); ++k)
    if (!polygon_contains(S.vertices, I[k]) || S.distance(I[k]) <= kEpsGeom) fail("I must lie inside T(S)");
  {
    // I meets S only at its endpoints
    std::vector<Point> core = I;
    double l0 = dist(I[0], I[1]), l1 = dist(I[I.size() - 2], I.back());
    core.front() = I[0] + (I[1] - I[0]) * std::min(0.5, 1e-6 / std::max(l0, 1e-300) + 1e-9);
    core.back() = I.back() + (I[I.size() - 2] - I.back()) * std::min(0.5, 1e-6 / std::max(l1, 1e-300) + 1e-9);
    std::vector<Point> ring = S.vertices;
    ring.push_back(S.vertices.front());
    if (path_path_distance(core, ring) <= 0.0) fail("I meets S away from its endpoints");
  }

  for (const Point& c : P.cuts)
    if (!in_hull(S, f(c))) fail("f(F) must lie in T(S)");

  Junction J0;
  try {
    J0 = make_junction(a0, nullptr, S, JunctionOptions{seed, 64});
  } catch (const Error&) {
    fail("no junction at a_0 outside T(S)");
  }
  std::vector<Point> fI = image_path(I, f);
  if (path_path_distance(fI, I) < kEpsFix) fail("f(I) meets I");
  if (!junction_crossings(fI, J0).empty() || path_junction_distance(fI, J0) < kEpsFix) fail("f(I) meets J_{a_0}");

  LollipopReport rep;
  for (std::size_t i = 0; i < m1; ++i) {
    try {
      JunctionOptions opt;
      opt.seed = seed == 0 ? 0 : seed + 17 * (i + 1);
      Junction J = make_junction(P.midpoint(i), nullptr, S, opt);
      rep.per_arc.push_back(variation_arc(S, P.start(i), P.end(i), f, J));
    } catch (const Error& e) {
      fail("arc " + std::to_string(i) + " not admissible: " + e.what());
    }
  }

  std::vector<Point> right = sub_arc(S, a0, an);
  for (std::size_t k = I.size() - 2; k >= 1; --k) right.push_back(I[k]);
  std::vector<Point> left = sub_arc(S, an, a0);
  for (std::size_t k = 1; k + 1 < I.size(); ++k) left.push_back(I[k]);

  Point fa = f(an);
  rep.image_in_right = polygon_contains(right, fa);
  const std::vector<Point>& ring = rep.image_in_right ? right : left;
  try {
    rep.rhs = ring_index(ring, f);
  } catch (const Error& e) {
    fail(std::string("index on the lollipop boundary: ") + e.what());
  }
  for (std::size_t i = 0; i < m1; ++i)
    if ((i < split) == rep.image_in_right) rep.variation_sum += rep.per_arc[i];
  rep.lhs = rep.variation_sum + 1;
  rep.holds = rep.lhs == rep.rhs;
  return rep;
}

int box_index(const Box& b, const PlaneMap& f) {
  std::vector<Point> ring{b.lo, {b.hi.x, b.lo.y}, b.hi, {b.lo.x, b.hi.y}};
  std::vector<Point> path = ring;
  path.push_back(ring.front());
  SweepResult r = sweep_displacement(path, f, 64);
  if (r.min_norm <= kEpsFix) throw Error(Errc::FixedPointOnCurve, "fixed point on the box boundary");
  return rounded_turns(r.angle);
}

std::vector<FixedPointEnclosure> locate_fixed_points(const Box& region, const PlaneMap& f, int max_depth,
                                                     std::uint64_t seed) {
  if (!(region.width() > 0 && region.height() > 0)) throw Error(Errc::InvalidInput, "empty search box");
  if (max_depth < 0) throw Error(Errc::InvalidInput, "negative depth");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  std::vector<FixedPointEnclosure> out;

  std::function<void(const Box&, int, int)> rec = [&](const Box& b, int depth, int idx) {
    if (idx == 0) return;
    if (depth >= max_depth) {
      out.push_back({b, b.center(), idx});
      return;
    }
    for (int attempt = 0; attempt <= 5; ++attempt) {
      double jx = 0.1 * b.width() * jitter(rng), jy = 0.1 * b.height() * jitter(rng);
      Point c = b.center() + Point{jx, jy};
      std::array<Box, 4> kids{Box{b.lo, c}, Box{{c.x, b.lo.y}, {b.hi.x, c.y}}, Box{c, b.hi},
                              Box{{b.lo.x, c.y}, {c.x, b.hi.y}}};
      std::array<int, 4> idxs{};
      try {
        for (int k = 0; k < 4; ++k) idxs[k] = box_index(kids[k], f);
      } catch (const Error& e) {
        if (e.code() != Errc::FixedPointOnCurve) throw;
        continue;
      }
      for (int k = 0; k < 4; ++k) rec(kids[k], depth + 1, idxs[k]);
      return;
    }
    throw Error(Errc::BoundaryFixedPoint, "subdivision lines keep meeting fixed points");
  };
  rec(region, 0, box_index(region, f));
  return out;
}

}  // namespace planefix
