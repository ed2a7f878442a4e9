#include "planefix/polydyn.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <functional>
#include <queue>

#include "planefix/error.hpp"
#include "planefix/index_var.hpp"

namespace planefix::polydyn {

namespace {

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

std::vector<cplx> trimmed(std::vector<cplx> p) {
  while (p.size() > 1 && std::abs(p.back()) == 0.0) p.pop_back();
  return p;
}

PolyCurve circle(Point c, double r, int n = 64) { return PolyCurve(regular_polygon(n, r, c), true); }

Angle reduce(Angle a) {
  Angle f = a - Angle(static_cast<long long>(std::floor(boost::rational_cast<double>(a))));
  while (f < Angle(0)) f += 1;
  while (f >= Angle(1)) f -= 1;
  return f;
}

std::vector<Point> continuum_samples(const PolyContinuum& C, int n, bool fill) {
  std::vector<Point> out = C.points();
  for (const Segment& s : C.segments())
    for (int k = 1; k < n; ++k) out.push_back(s.a + (s.b - s.a) * (static_cast<double>(k) / n));
  if (fill && C.kind == PolyContinuum::Kind::polygon) {
    Box b = C.bbox();
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) {
        Point p = b.lo + Point{b.width() * i / n, b.height() * j / n};
        if (C.hull_contains(p, 0.0)) out.push_back(p);
      }
  }
  return out;
}

}  // namespace

cplx Polynomial::operator()(cplx z) const { return horner(coeffs, z); }

cplx Polynomial::derivative(cplx z) const { return horner(poly_derivative(coeffs), z); }

void Polynomial::validate() const {
  if (coeffs.size() < 2) throw Error(Errc::InvalidInput, "polynomial degree must be at least 1");
  if (std::abs(coeffs.back()) == 0.0) throw Error(Errc::InvalidInput, "leading coefficient must be nonzero");
  for (cplx c : coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw Error(Errc::InvalidInput, "non-finite coefficient");
}

std::vector<cplx> roots(const std::vector<cplx>& p_in) {
  std::vector<cplx> p = trimmed(p_in);
  int n = static_cast<int>(p.size()) - 1;
  if (n < 1) return {};
  if (n == 1) return {-p[0] / p[1]};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -p[i] / p[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  std::vector<cplx> zs(es.eigenvalues().data(), es.eigenvalues().data() + n);
  auto dp = poly_derivative(p);
  for (cplx& z : zs)
    for (int k = 0; k < 3; ++k) {
      cplx d = horner(dp, z);
      if (std::abs(d) == 0.0) break;
      cplx next = z - horner(p, z) / d;
      if (!(std::abs(horner(p, next)) < std::abs(horner(p, z)))) break;
      z = next;
    }
  return zs;
}

const char* class_name(FixedClass c) {
  switch (c) {
    case FixedClass::repelling: return "repelling";
    case FixedClass::attracting: return "attracting";
    case FixedClass::parabolic: return "parabolic";
    case FixedClass::irrational_neutral: return "irrational-neutral";
  }
  return "?";
}

std::optional<std::pair<long long, long long>> rational_approximation(double x, int max_den, double tol) {
  // convergents of the continued fraction
  long long h0 = 1, h1 = static_cast<long long>(std::floor(x)), k0 = 0, k1 = 1;
  double r = x - std::floor(x);
  for (int it = 0; it < 64; ++it) {
    if (k1 > max_den) break;
    if (std::abs(x - static_cast<double>(h1) / k1) <= tol) return std::pair{h1, k1};
    if (r < 1e-15) break;
    double inv = 1.0 / r;
    long long a = static_cast<long long>(std::floor(inv));
    r = inv - a;
    long long h2 = a * h1 + h0, k2 = a * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
  }
  return std::nullopt;
}

FixedClass classify(cplx m, double tol) {
  double r = std::abs(m);
  if (r > 1.0 + tol) return FixedClass::repelling;
  if (r < 1.0 - tol) return FixedClass::attracting;
  double turns = std::arg(m) / (2.0 * kPi);
  if (turns < 0) turns += 1.0;
  return rational_approximation(turns, kMaxRationalDenominator, tol) ? FixedClass::parabolic
                                                                      : FixedClass::irrational_neutral;
}

int local_index(const PlaneMap& f, Point p, double r0) {
  double r = r0;
  std::optional<int> prev;
  for (int it = 0; it < 30; ++it, r *= 0.5) {
    int idx;
    try {
      idx = index(circle(p, r), f);
    } catch (const Error& e) {
      if (e.code() != Errc::FixedPointOnCurve) throw;
      prev.reset();
      continue;
    }
    if (prev && *prev == idx) return idx;
    prev = idx;
  }
  throw Error(Errc::NotIsolated, "local index did not stabilize under shrinking radii");
}

std::vector<FixedPointRecord> fixed_points(const Polynomial& P) {
  P.validate();
  std::vector<cplx> q = P.coeffs;
  q[1] -= 1.0;
  q = trimmed(q);
  if (q.size() == 1) {
    if (std::abs(q[0]) == 0.0) throw Error(Errc::NotIsolated, "the identity fixes every point");
    return {};
  }
  auto zs = roots(q);
  // cluster numerically split multiple roots
  std::vector<std::vector<cplx>> clusters;
  for (cplx z : zs) {
    bool placed = false;
    for (auto& c : clusters)
      if (std::abs(c.front() - z) < 1e-5) {
        c.push_back(z);
        placed = true;
        break;
      }
    if (!placed) clusters.push_back({z});
  }
  std::vector<FixedPointRecord> out;
  PlaneMap f = P.as_map();
  for (const auto& c : clusters) {
    cplx z = 0.0;
    for (cplx w : c) z += w;
    z /= static_cast<double>(c.size());
    if (std::abs(horner(q, z)) > kResidualTol * std::max(1.0, std::pow(std::abs(z), q.size() - 1)))
      throw Error(Errc::NotIsolated, "root residual above tolerance");
    FixedPointRecord rec;
    rec.location = Point(z);
    rec.multiplier = P.derivative(z);
    rec.cls = classify(rec.multiplier);
    rec.cluster_size = static_cast<int>(c.size());
    out.push_back(rec);
  }
  for (auto& rec : out) {
    double sep = INFINITY;
    for (const auto& o : out)
      if (&o != &rec) sep = std::min(sep, dist(o.location, rec.location));
    rec.local_index = local_index(f, rec.location, std::min(0.25, sep / 3.0));
  }
  std::sort(out.begin(), out.end(), [](const FixedPointRecord& a, const FixedPointRecord& b) {
    return a.location.x < b.location.x || (a.location.x == b.location.x && a.location.y < b.location.y);
  });
  return out;
}

ArgumentReport argument_principle_check(const PlaneMap& f, const PolyCurve& S, int max_depth) {
  if (!S.closed) throw Error(Errc::InvalidInput, "argument principle needs a closed curve");
  S.validate();
  ArgumentReport rep;
  rep.curve_index = index(S, f);
  if (f.kind() == PlaneMap::Kind::polynomial && f.coeffs().size() >= 3) {
    for (const auto& fp : fixed_points(Polynomial{f.coeffs()}))
      if (polygon_contains(S.vertices, fp.location)) rep.located.push_back({fp.location, fp.local_index});
  } else {
    for (const auto& enc : locate_fixed_points(S.bbox().expanded(1.01), f, max_depth))
      if (polygon_contains(S.vertices, enc.center)) rep.located.push_back({enc.center, enc.index});
  }
  for (const auto& [p, k] : rep.located) rep.sum += k;
  rep.holds = rep.sum == rep.curve_index;
  return rep;
}

MonicConjugation monic_conjugation(const Polynomial& P) {
  P.validate();
  int d = P.degree();
  if (d < 2) throw Error(Errc::InvalidInput, "external rays need degree at least 2");
  cplx cd = P.coeffs[d], cd1 = P.coeffs[d - 1];
  MonicConjugation mc;
  mc.scale = std::exp(-std::log(cd) / static_cast<double>(d - 1));
  mc.shift = -cd1 / (static_cast<double>(d) * cd);
  // P(scale u + shift) by Horner on polynomials in u
  std::vector<cplx> acc{0.0};
  for (int k = d; k >= 0; --k) {
    std::vector<cplx> next(acc.size() + 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i + 1] += acc[i] * mc.scale;
      next[i] += acc[i] * mc.shift;
    }
    next[0] += P.coeffs[k];
    acc = next;
  }
  acc.resize(d + 1);
  acc[0] -= mc.shift;
  for (cplx& c : acc) c /= mc.scale;
  acc[d] = 1.0;
  acc[d - 1] = 0.0;
  mc.monic.coeffs = acc;
  return mc;
}

ExternalRay trace_external_ray(const Polynomial& P, Angle theta, const RayOptions& opt) {
  if (opt.generations < 0 || opt.substeps < 1) throw Error(Errc::InvalidInput, "bad ray options");
  MonicConjugation mc = monic_conjugation(P);
  const auto& Q = mc.monic.coeffs;
  int d = mc.monic.degree();
  double R = opt.radius;
  if (R <= 0.0) {
    R = 2.0;
    for (cplx c : Q) R += std::abs(c);
  }
  const int m = opt.substeps;
  const double logR = std::log(R);
  std::map<std::pair<Angle, int>, cplx> memo;
  std::function<cplx(Angle, int)> pt = [&](Angle a, int level) -> cplx {
    auto key = std::pair{a, level};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    cplx z;
    if (level < m) {
      double rho = std::exp(logR * std::pow(static_cast<double>(d), -static_cast<double>(level) / m));
      z = std::polar(rho, 2.0 * kPi * boost::rational_cast<double>(a));
    } else {
      cplx w = pt(reduce(a * Angle(d)), level - m);
      cplx prev = pt(a, level - 1);
      std::vector<cplx> eq = Q;
      eq[0] -= w;
      auto pre = roots(eq);
      std::sort(pre.begin(), pre.end(), [&](cplx x, cplx y) { return std::abs(x - prev) < std::abs(y - prev); });
      if (pre.size() > 1 && std::abs(pre[1] - prev) - std::abs(pre[0] - prev) < kBranchEps)
        throw Error(Errc::BranchAmbiguity, "two preimages are equally close to the continuation point");
      z = pre[0];
    }
    memo[key] = z;
    return z;
  };
  ExternalRay ray;
  ray.angle = reduce(theta);
  ray.generations = opt.generations;
  ray.substeps = m;
  ray.anchor_radius = R;
  for (int level = 0; level <= opt.generations * m; ++level)
    ray.trace.push_back(Point(mc.scale * pt(ray.angle, level) + mc.shift));
  return ray;
}

Landing landing_point(const ExternalRay& ray, double tol) {
  Landing l;
  if (ray.trace.empty()) return l;
  std::size_t n = ray.trace.size();
  std::size_t start = n > static_cast<std::size_t>(ray.substeps) ? n - ray.substeps - 1 : 0;
  for (std::size_t i = start; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) l.tail_diameter = std::max(l.tail_diameter, dist(ray.trace[i], ray.trace[j]));
  l.point = ray.trace.back();
  l.landed = ray.generations > 0 && l.tail_diameter < tol;
  return l;
}

void validate_crosscut(const std::vector<Point>& Q, const PolyContinuum& X, double tol) {
  auto fail = [](const std::string& m) { throw Error(Errc::NotACrosscut, m); };
  if (Q.size() < 2) fail("crosscut needs two points");
  if (X.distance(Q.front()) > tol || X.distance(Q.back()) > tol) fail("crosscut endpoints must lie on X");
  if (near(Q.front(), Q.back(), tol)) fail("crosscut endpoints coincide");
  if (!PolyCurve(Q, false).is_simple()) fail("crosscut is not simple");
  for (std::size_t i = 1; i + 1 < Q.size(); ++i)
    if (X.hull_contains(Q[i], tol)) fail("crosscut vertex inside T(X)");
  auto xs = X.segments();
  for (std::size_t i = 0; i + 1 < Q.size(); ++i) {
    Point a = Q[i], b = Q[i + 1];
    for (double t : {0.25, 0.5, 0.75})
      if (X.hull_contains(a + (b - a) * t, tol)) fail("crosscut passes through T(X)");
    for (const Segment& s : xs)
      if (auto c = proper_crossing(a, b, s.a, s.b))
        if (c->first > 1e-9 && c->first < 1.0 - 1e-9) fail("crosscut crosses X");
  }
}

std::vector<Point> path_in_continuum(const PolyContinuum& X, Point a, Point b) {
  switch (X.kind) {
    case PolyContinuum::Kind::polygon:
      return sub_arc(counterclockwise(X.boundary), a, b);
    case PolyContinuum::Kind::disjoint_union: {
      const PolyContinuum* best = nullptr;
      double bd = INFINITY;
      for (const auto& p : X.parts)
        if (double d = p.distance(a); d < bd) {
          bd = d;
          best = &p;
        }
      if (!best || best->distance(b) > 1e-7) throw Error(Errc::InvalidInput, "points lie in different parts of X");
      return path_in_continuum(*best, a, b);
    }
    case PolyContinuum::Kind::tree: break;
  }
  int n = static_cast<int>(X.nodes.size());
  auto host = [&](Point p) {
    int be = -1;
    double bd = INFINITY;
    for (int e = 0; e < static_cast<int>(X.edges.size()); ++e) {
      double d = point_segment_distance(p, X.nodes[X.edges[e].first], X.nodes[X.edges[e].second]);
      if (d < bd) {
        bd = d;
        be = e;
      }
    }
    if (be < 0 || bd > 1e-7) throw Error(Errc::InvalidInput, "point is not on the tree");
    return be;
  };
  if (X.edges.empty()) return {a, b};
  int ea = host(a), eb = host(b);
  if (ea == eb) return {a, b};
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (int e = 0; e < static_cast<int>(X.edges.size()); ++e) {
    adj[X.edges[e].first].push_back({X.edges[e].second, e});
    adj[X.edges[e].second].push_back({X.edges[e].first, e});
  }
  auto tree_path = [&](int s, int t) {
    std::vector<int> par(n, -2);
    std::queue<int> q;
    q.push(s);
    par[s] = -1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [w, e] : adj[u])
        if (par[w] == -2) {
          par[w] = u;
          q.push(w);
        }
    }
    std::vector<int> out;
    for (int u = t; u != -1; u = par[u]) out.push_back(u);
    std::reverse(out.begin(), out.end());
    return out;
  };
  std::vector<Point> best;
  double best_len = INFINITY;
  for (int u : {X.edges[ea].first, X.edges[ea].second})
    for (int v : {X.edges[eb].first, X.edges[eb].second}) {
      std::vector<Point> path{a};
      for (int w : tree_path(u, v)) path.push_back(X.nodes[w]);
      path.push_back(b);
      double len = PolyCurve(path, false).length();
      if (len < best_len) {
        best_len = len;
        best = path;
      }
    }
  // drop repeated points at a or b sitting on nodes
  best.erase(std::unique(best.begin(), best.end(), [](Point p, Point q) { return near(p, q, 1e-12); }), best.end());
  return best;
}

bool in_pocket(Point p, const std::vector<Point>& Q, const PolyContinuum& X) {
  if (X.hull_contains(p, 0.0) || PolyCurve(Q, false).distance(p) <= kEpsGeom) return false;
  std::vector<Point> loop = Q;
  auto back = path_in_continuum(X, Q.back(), Q.front());
  loop.insert(loop.end(), back.begin() + 1, back.end() - 1);
  return polygon_contains(loop, p);
}

bool essential_crossing(const ExternalRay& ray, const std::vector<Point>& Q, const PolyContinuum& X) {
  validate_crosscut(Q, X);
  for (auto it = ray.trace.rbegin(); it != ray.trace.rend(); ++it)
    if (X.distance(*it) > 1e-9 && !X.hull_contains(*it, 0.0)) return in_pocket(*it, Q, X);
  return false;
}

CrosscutVariation crosscut_variation(const PlaneMap& f, const std::vector<Point>& Q, const PolyContinuum& X) {
  validate_crosscut(Q, X);
  for (Point e : {Q.front(), Q.back()})
    if (!X.hull_contains(f(e), 1e-7)) throw Error(Errc::EndpointEscapes, "f maps a crosscut endpoint outside T(X)");
  PolyCurve C(Q, false);
  double L = C.length();
  Point v = C.at(0.5 * L);
  Junction J = make_junction(v, &X, C);
  // tangent at v
  auto cum = C.cumulative_lengths();
  std::size_t seg = 0;
  while (seg + 2 < cum.size() && cum[seg + 1] < 0.5 * L) ++seg;
  Point t = unit(Q[seg + 1] - Q[seg]);
  Point out = unit(J.inner.pts.size() > 1 ? J.inner.pts[1] - v : J.inner.dir);
  CrosscutVariation cv;
  cv.oriented = Q;
  if (dot(out, Point{t.y, -t.x}) < 0) std::reverse(cv.oriented.begin(), cv.oriented.end());
  cv.junction_vertex = v;
  cv.value = variation_on_path(cv.oriented, f, J);
  return cv;
}

const char* verdict_name(ScrambleReport::Verdict v) {
  switch (v) {
    case ScrambleReport::Verdict::strongly_scrambles: return "strongly-scrambles";
    case ScrambleReport::Verdict::scrambles: return "scrambles";
    case ScrambleReport::Verdict::fails: return "fails";
  }
  return "?";
}

ScrambleReport check_scrambling(const ScrambleConfig& cfg, int samples, double tol) {
  if (cfg.Z.size() != cfg.K.size()) throw Error(Errc::InvalidInput, "one exit continuum per Z_i");
  if (samples < 2) throw Error(Errc::InvalidInput, "need at least 2 samples per segment");
  cfg.X.validate();
  ScrambleReport rep;
  auto fail = [&](const char* clause, Point w, int i) {
    rep.verdict = ScrambleReport::Verdict::fails;
    rep.clause = clause;
    rep.witness = w;
    rep.component = i;
    return rep;
  };
  const std::size_t n = cfg.Z.size();
  auto in_some_z = [&](Point y) {
    for (const auto& z : cfg.Z)
      if (z.hull_contains(y, tol)) return true;
    return false;
  };
  for (Point x : continuum_samples(cfg.X, samples, true)) {
    Point y = cfg.f(x);
    if (!cfg.X.hull_contains(y, tol) && !in_some_z(y)) return fail("1", x, -1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& Zi = cfg.Z[i];
    const auto& Ki = cfg.K[i];
    Zi.validate();
    Ki.validate();
    // a disjoint union is not a continuum
    if (Ki.kind == PolyContinuum::Kind::disjoint_union) return fail("2", Ki.points().front(), static_cast<int>(i));
    for (Point k : continuum_samples(Ki, samples, true))
      if (!cfg.X.hull_contains(k, tol) || !Zi.hull_contains(k, tol)) return fail("2", k, static_cast<int>(i));
    for (Point z : continuum_samples(Zi, samples, true)) {
      if (cfg.X.hull_contains(z, 0.0) && !Ki.hull_contains(z, tol)) return fail("2", z, static_cast<int>(i));
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && cfg.Z[j].hull_contains(z, 0.0)) return fail("2", z, static_cast<int>(i));
    }
  }
  std::optional<std::pair<Point, int>> weak;
  for (std::size_t i = 0; i < n; ++i) {
    bool all_in_k = true;
    std::optional<Point> hits_z;
    for (Point k : continuum_samples(cfg.K[i], samples, true)) {
      Point y = cfg.f(k);
      bool in_k = cfg.K[i].hull_contains(y, tol), in_z = cfg.Z[i].hull_contains(y, tol);
      if (in_z && !in_k) return fail("3", k, static_cast<int>(i));
      all_in_k = all_in_k && in_k;
      if (in_z && !hits_z) hits_z = k;
    }
    if (!all_in_k && hits_z && !weak) weak = {*hits_z, static_cast<int>(i)};
  }
  if (weak) {
    rep.verdict = ScrambleReport::Verdict::scrambles;
    rep.clause = "3a";
    rep.witness = weak->first;
    rep.component = weak->second;
  }
  return rep;
}

}  // namespace planefix::polydyn
