#include "planefix/kp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "planefix/error.hpp"

namespace planefix::kp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double scale_of(const PolyContinuum& K) {
  Box b = K.bbox();
  return std::max(1.0, norm(b.hi - b.lo));
}

std::vector<Segment> edges_of(const PolyContinuum& K) {
  std::vector<Segment> out;
  for (const Segment& s : K.segments())
    if (!near(s.a, s.b, 1e-14)) out.push_back(s);
  return out;
}

void require_nondegenerate(const PolyContinuum& K) {
  double total = 0.0;
  for (const Segment& s : K.segments()) total += dist(s.a, s.b);
  if (K.points().size() < 2 || !(total > kEpsGeom)) throw Error(Errc::DegenerateRegion, "continuum has zero length");
  K.validate();
}

double angle_of(Point p, Point c) { return std::atan2(p.y - c.y, p.x - c.x); }

double wrap(double t) {
  t = std::fmod(t, 2.0 * kPi);
  return t < 0.0 ? t + 2.0 * kPi : t;
}

// Position along the boundary; half-planes run along the line, which closes up at infinity.
double boundary_param(const GeneralizedBall& B, Point p) {
  if (B.kind == GeneralizedBall::Kind::half_plane) return dot(p - B.line_point, perp(B.normal));
  return wrap(angle_of(p, B.center));
}

void sort_along(const GeneralizedBall& B, std::vector<Point>& pts) {
  std::sort(pts.begin(), pts.end(),
            [&](Point a, Point b) { return boundary_param(B, a) < boundary_param(B, b); });
}

std::vector<double> quadratic_roots(double a, double b, double c) {
  double s = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (s == 0.0) return {};
  a /= s, b /= s, c /= s;
  if (std::abs(a) < 1e-12) {
    if (std::abs(b) < 1e-14) return {};
    return {-c / b};
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc < -1e-12) return {};
    disc = 0.0;
  }
  double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r;
  if (q != 0.0) r.push_back(c / q);
  r.push_back(q / a);
  return r;
}

struct Line {
  Point nu;  // unit normal
  double h;  // dot(nu, z) = h on the line
};

Line line_of(const Segment& s) {
  Point nu = unit(perp(s.b - s.a));
  return {nu, dot(nu, s.a)};
}

// Circles through u and v tangent to a line.
void through_two_tangent_one(Point u, Point v, const Line& L, std::vector<GeneralizedBall>& out) {
  Point m = (u + v) * 0.5;
  Point n = unit(perp(v - u));
  double h0 = dist(u, m);
  double s0 = dot(L.nu, m) - L.h;
  double k = dot(L.nu, n);
  for (double t : quadratic_roots(k * k - 1.0, 2.0 * s0 * k, s0 * s0 - h0 * h0)) {
    double r = std::abs(s0 + k * t);
    if (r > 1e-12) out.push_back(GeneralizedBall::disk(m + n * t, r));
  }
}

// Circles through u tangent to two lines.
void through_one_tangent_two(Point u, const Line& L1, const Line& L2, std::vector<GeneralizedBall>& out) {
  for (double sigma : {1.0, -1.0}) {
    Point w = L1.nu - L2.nu * sigma;
    double lw = norm(w);
    if (lw < 1e-12) continue;
    Point c0 = w * ((L1.h - sigma * L2.h) / (lw * lw));
    Point dir = perp(w) / lw;
    double A = dot(L1.nu, c0) - L1.h;
    double Bc = dot(L1.nu, dir);
    Point d0 = c0 - u;
    for (double t : quadratic_roots(Bc * Bc - 1.0, 2.0 * (A * Bc - dot(d0, dir)), A * A - norm2(d0))) {
      double r = std::abs(A + Bc * t);
      if (r > 1e-12) out.push_back(GeneralizedBall::disk(c0 + dir * t, r));
    }
  }
}

// Circles tangent to three lines.
void tangent_three(const Line& L1, const Line& L2, const Line& L3, std::vector<GeneralizedBall>& out) {
  const Line* L[3] = {&L1, &L2, &L3};
  for (int mask = 0; mask < 8; ++mask) {
    double s[3];
    for (int i = 0; i < 3; ++i) s[i] = (mask >> i) & 1 ? -1.0 : 1.0;
    double m[3][3], rhs[3];
    for (int i = 0; i < 3; ++i) {
      m[i][0] = L[i]->nu.x;
      m[i][1] = L[i]->nu.y;
      m[i][2] = -s[i];
      rhs[i] = L[i]->h;
    }
    auto det3 = [](double a[3][3]) {
      return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    double d = det3(m);
    if (std::abs(d) < 1e-12) continue;
    double sol[3];
    for (int col = 0; col < 3; ++col) {
      double a[3][3];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = j == col ? rhs[i] : m[i][j];
      sol[col] = det3(a) / d;
    }
    if (sol[2] > 1e-12) out.push_back(GeneralizedBall::disk({sol[0], sol[1]}, sol[2]));
  }
}

// Every generalized circle meeting three features of K (vertices or edge lines).
std::vector<GeneralizedBall> candidate_balls(const PolyContinuum& K) {
  std::vector<Point> V = K.points();
  std::vector<Segment> E = edges_of(K);
  std::vector<Line> lines;
  for (const Segment& s : E) lines.push_back(line_of(s));
  std::vector<GeneralizedBall> cand;
  std::size_t nv = V.size(), ne = E.size();
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = i + 1; j < nv; ++j) {
      if (near(V[i], V[j], 1e-14)) continue;
      Point n = unit(perp(V[j] - V[i]));
      cand.push_back(GeneralizedBall::half_plane(V[i], n));
      cand.push_back(GeneralizedBall::half_plane(V[i], -n));
      for (std::size_t k = j + 1; k < nv; ++k)
        if (auto cc = circumcircle(V[i], V[j], V[k])) {
          cand.push_back(GeneralizedBall::disk(cc->center, cc->radius));
          cand.push_back(GeneralizedBall::exterior(cc->center, cc->radius));
        }
      for (const Line& L : lines) through_two_tangent_one(V[i], V[j], L, cand);
    }
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t a = 0; a < ne; ++a)
      for (std::size_t b = a + 1; b < ne; ++b) through_one_tangent_two(V[i], lines[a], lines[b], cand);
  for (std::size_t a = 0; a < ne; ++a)
    for (std::size_t b = a + 1; b < ne; ++b)
      for (std::size_t c = b + 1; c < ne; ++c) tangent_three(lines[a], lines[b], lines[c], cand);
  return cand;
}

std::vector<MaximalBall> exact_balls(const PolyContinuum& K) {
  double sc = scale_of(K);
  double tolv = 1e-9 * sc, tolc = kContactTol * sc;
  std::vector<MaximalBall> out;
  for (const GeneralizedBall& B : candidate_balls(K)) {
    if (!empty_interior(B, K, tolv)) continue;
    std::vector<Point> contacts = contact_points(B, K, tolc);
    bool flush = false;
    if (B.kind == GeneralizedBall::Kind::half_plane)
      for (std::size_t i = 0; i + 1 < contacts.size(); ++i)
        flush = flush || K.distance((contacts[i] + contacts[i + 1]) * 0.5) <= tolc;
    if (contacts.size() < 3 && !(flush && contacts.size() >= 2)) continue;
    bool dup = std::any_of(out.begin(), out.end(),
                           [&](const MaximalBall& m) { return coeff_distance(m.ball, B) <= 1e-9; });
    if (!dup) out.push_back({B, std::move(contacts), false});
  }
  return out;
}

// Signed distance to the carrier of the chord from a to b, positive away from the carrier's inside.
double carrier_value(const GeneralizedBall& B, Point a, Point b, Point z) {
  if (B.kind == GeneralizedBall::Kind::half_plane) {
    Point o = (a + b) * 0.5;
    return dist(z, o) - dist(a, b) * 0.5;
  }
  Point ua = unit(a - B.center), ub = unit(b - B.center);
  double den = 1.0 + dot(ua, ub);
  if (den <= 1e-12) return cross(unit(b - a), z - a);
  Point o = B.center + (ua + ub) * (B.radius / den);
  return dist(z, o) - dist(a, o);
}

struct Arc {
  bool straight = false;
  Point a, b;  // images of the segment endpoints
  Point o;
  double rho = 0.0, t0 = 0.0, sweep = 0.0;

  Point at(double f) const {
    if (straight) return a + (b - a) * f;
    return o + polar(rho, t0 + sweep * f);
  }
  bool covers(double theta) const {
    if (sweep >= 0.0) return wrap(theta - t0) <= sweep;
    return wrap(t0 - theta) <= -sweep;
  }
  // Farthest point from c and whether it lies strictly inside the arc.
  std::pair<Point, bool> farthest(Point c) const {
    Point best = dist(a, c) >= dist(b, c) ? a : b;
    if (straight || near(o, c, 1e-300)) return {best, false};
    Point f = o + unit(o - c) * rho;
    if (covers(angle_of(f, o)) && dist(f, c) > dist(best, c)) return {f, true};
    return {best, false};
  }
};

Arc invert_segment(const Segment& s, Point p) {
  Arc arc;
  arc.a = invert(s.a, p);
  arc.b = invert(s.b, p);
  double cr = cross(s.b - s.a, p - s.a);
  auto cc = circumcircle(p, arc.a, arc.b);
  if (std::abs(cr) <= 1e-13 * dist(s.a, s.b) * std::max(dist(p, s.a), dist(p, s.b)) || !cc) {
    arc.straight = true;
    return arc;
  }
  arc.o = cc->center;
  arc.rho = cc->radius;
  arc.t0 = angle_of(arc.a, arc.o);
  double full = wrap(angle_of(arc.b, arc.o) - arc.t0);
  double tp = wrap(angle_of(p, arc.o) - arc.t0);
  arc.sweep = tp < full ? full - 2.0 * kPi : full;
  return arc;
}

struct Support {
  Point o;
  double rho;
};

// Ball containing the supports, touching each: |c - o| + rho = R.
std::optional<std::pair<Point, double>> touch_all(const std::vector<Support>& s, Point c, double R) {
  if (s.size() == 2) {
    Point d = s[1].o - s[0].o;
    double l = norm(d);
    if (l < 1e-300) return std::nullopt;
    double r = 0.5 * (l + s[0].rho + s[1].rho);
    return std::make_pair(s[0].o + d * ((r - s[0].rho) / l), r);
  }
  Eigen::Vector3d x(c.x, c.y, R);
  for (int it = 0; it < 30; ++it) {
    Eigen::Matrix3d J;
    Eigen::Vector3d F;
    for (int i = 0; i < 3; ++i) {
      Point q = Point{x[0], x[1]} - s[i].o;
      double l = norm(q);
      if (l < 1e-300) return std::nullopt;
      F[i] = l + s[i].rho - x[2];
      J(i, 0) = q.x / l;
      J(i, 1) = q.y / l;
      J(i, 2) = -1.0;
    }
    Eigen::Vector3d dx = J.fullPivLu().solve(F);
    x -= dx;
    if (dx.norm() <= 1e-16 * std::max(1.0, std::abs(x[2]))) break;
  }
  if (!x.allFinite() || x[2] <= 0.0) return std::nullopt;
  return std::make_pair(Point{x[0], x[1]}, x[2]);
}

// Cutting planes stop with the centre off by the square root of the excess; snap to the active supports.
void polish(GeneralizedBall& D, const std::vector<Arc>& arcs, const std::vector<Point>& corners,
            const std::vector<Point>& pts) {
  double R = D.radius;
  std::vector<std::pair<double, Support>> active;
  bool any_arc = false;
  for (const Arc& a : arcs) {
    auto [f, inside] = a.farthest(D.center);
    if (inside && R - dist(f, D.center) <= 1e-6 * R) {
      active.push_back({R - dist(f, D.center), {a.o, a.rho}});
      any_arc = true;
    }
  }
  if (!any_arc) return;
  for (Point q : corners)
    if (R - dist(q, D.center) <= 1e-6 * R) active.push_back({R - dist(q, D.center), {q, 0.0}});
  std::sort(active.begin(), active.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  auto encloses = [&](Point c, double r) {
    for (Point q : pts)
      if (dist(q, c) > r * (1.0 + 1e-12)) return false;
    for (const Arc& a : arcs)
      if (dist(a.farthest(c).first, c) > r * (1.0 + 1e-12)) return false;
    return true;
  };
  std::size_t m = active.size();
  for (std::size_t k : {std::size_t{2}, std::size_t{3}}) {
    if (m < k) break;
    // the most active supports first, then every other subset of that size
    std::vector<std::vector<std::size_t>> subsets;
    if (k == 2)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) subsets.push_back({i, j});
    else
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
          for (std::size_t l = j + 1; l < m; ++l) subsets.push_back({i, j, l});
    for (const auto& sub : subsets) {
      std::vector<Support> s;
      for (std::size_t i : sub) s.push_back(active[i].second);
      auto sol = touch_all(s, D.center, R);
      if (!sol || std::abs(sol->second - R) > 1e-5 * R || !encloses(sol->first, sol->second)) continue;
      D = GeneralizedBall::disk(sol->first, sol->second);
      return;
    }
  }
}

}  // namespace

bool empty_interior(const GeneralizedBall& B, const PolyContinuum& K, double tol) {
  switch (B.kind) {
    case GeneralizedBall::Kind::disk:
      if (K.kind != PolyContinuum::Kind::tree && K.hull_contains(B.center, 0.0)) return false;
      for (const Segment& s : K.segments())
        if (point_segment_distance(B.center, s.a, s.b) < B.radius - tol) return false;
      return true;
    case GeneralizedBall::Kind::exterior_disk:
    case GeneralizedBall::Kind::half_plane:
      for (Point v : K.points())
        if (B.depth(v) < -tol) return false;
      return true;
  }
  return false;
}

std::vector<Point> contact_points(const GeneralizedBall& B, const PolyContinuum& K, double tol) {
  std::vector<Point> raw;
  for (Point v : K.points())
    if (B.boundary_distance(v) <= tol) raw.push_back(v);
  if (B.kind == GeneralizedBall::Kind::disk)
    for (const Segment& s : K.segments()) {
      Point q = closest_on_segment(B.center, s.a, s.b);
      if (B.boundary_distance(q) <= tol) raw.push_back(q);
    }
  std::vector<Point> out;
  for (Point q : raw)
    if (std::none_of(out.begin(), out.end(), [&](Point o) { return near(o, q, 10.0 * tol); })) out.push_back(q);
  sort_along(B, out);
  return out;
}

bool KPElement::contains(Point p, double eps) const {
  const GeneralizedBall& B = ball.ball;
  if (!B.contains(p, eps)) return false;
  const auto& c = ball.contacts;
  if (euclidean) {
    if (B.kind == GeneralizedBall::Kind::half_plane || c.size() == 2)
      return point_segment_distance(p, c.front(), c.back()) <= eps;
    double d = kInf;
    for (std::size_t i = 0; i < c.size(); ++i) d = std::min(d, point_segment_distance(p, c[i], c[(i + 1) % c.size()]));
    return d <= eps || polygon_contains(c, p);
  }
  for (const KPChord& s : sides) {
    double g = s.gap_at_infinity ? 1.0 : (carrier_value(B, s.a, s.b, s.gap_mid) >= 0.0 ? 1.0 : -1.0);
    if (g * carrier_value(B, s.a, s.b, p) > eps) return false;
  }
  return true;
}

KPElement kp_element(const MaximalBall& MB, const PolyContinuum& K, bool euclidean) {
  const GeneralizedBall& B = MB.ball;
  std::vector<Point> c = MB.contacts;
  if (c.size() < 2) throw Error(Errc::InvalidInput, "a maximal ball needs two contacts");
  sort_along(B, c);
  double tolc = kContactTol * scale_of(K);

  KPElement e;
  e.ball = MB;
  e.ball.contacts = c;
  e.euclidean = euclidean;
  e.is_gap = c.size() >= 3;
  std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    KPChord side;
    side.a = c[i];
    side.b = c[(i + 1) % n];
    if (B.kind == GeneralizedBall::Kind::half_plane) {
      side.gap_at_infinity = i + 1 == n;
      side.gap_mid = (side.a + side.b) * 0.5;
    } else {
      double ta = boundary_param(B, side.a);
      double tb = boundary_param(B, side.b);
      if (i + 1 == n) tb += 2.0 * kPi;
      side.gap_mid = B.center + polar(B.radius, 0.5 * (ta + tb));
    }
    if (!side.gap_at_infinity && K.distance(side.gap_mid) <= tolc) {
      e.is_gap = true;
      continue;
    }
    if (euclidean)
      side.curve = PolyCurve({side.a, side.b}, false);
    else
      side.curve = hyperbolic_geodesic(B, side.a, side.b);
    bool seen = std::any_of(e.chords.begin(), e.chords.end(), [&](const KPChord& k) {
      return (near(k.a, side.a) && near(k.b, side.b)) || (near(k.a, side.b) && near(k.b, side.a));
    });
    if (!seen) e.chords.push_back(side);
    e.sides.push_back(side);
  }
  return e;
}

KPElement kp_locate(Point p, const PolyContinuum& K) {
  require_nondegenerate(K);
  if (K.hull_contains(p, kEpsGeom)) throw Error(Errc::PointInContinuum, "point lies in the continuum");

  std::vector<Arc> arcs;
  std::vector<Point> pts;
  for (const Segment& s : edges_of(K)) {
    arcs.push_back(invert_segment(s, p));
    pts.push_back(arcs.back().a);
    pts.push_back(arcs.back().b);
    pts.push_back(arcs.back().at(0.5));
  }
  std::vector<Point> corners;
  for (Point v : K.points()) corners.push_back(invert(v, p));
  pts.insert(pts.end(), corners.begin(), corners.end());

  GeneralizedBall D = smallest_enclosing_ball(pts);
  for (int iter = 0; iter < 200; ++iter) {
    bool grew = false;
    for (const Arc& a : arcs) {
      Point f = a.farthest(D.center).first;
      if (dist(f, D.center) > D.radius * (1.0 + 1e-14)) {
        pts.push_back(f);
        grew = true;
      }
    }
    if (!grew) break;
    D = smallest_enclosing_ball(pts);
  }

  polish(D, arcs, corners, pts);
  Point c = D.center;
  double R = D.radius;
  double tol = 1e-9 * R;
  std::vector<Point> contacts;
  auto add = [&](Point x) {
    Point z = invert(x, p);
    if (std::none_of(contacts.begin(), contacts.end(), [&](Point q) { return near(q, z, 1e-9); }))
      contacts.push_back(z);
  };
  for (Point v : K.points())
    if (R - dist(invert(v, p), c) <= tol) add(invert(v, p));
  for (const Arc& a : arcs) {
    auto [f, inside] = a.farthest(c);
    if (!inside || R - dist(f, c) > tol) continue;
    bool flush = R - dist(a.a, c) <= tol && R - dist(a.b, c) <= tol;
    if (!flush) add(f);
  }

  Point cp = c - p;
  double delta = norm2(cp) - R * R;
  GeneralizedBall B;
  if (std::abs(delta) <= 1e-9 * R * R) {
    Point u = unit(cp);
    B = GeneralizedBall::half_plane(p + u / (2.0 * R), -u);
  } else if (delta > 0.0) {
    B = GeneralizedBall::exterior(p + cp / delta, R / delta);
  } else {
    B = GeneralizedBall::disk(p + cp / delta, R / -delta);
  }
  if (contacts.size() < 2) throw Error(Errc::HypothesisFailed, "smallest ball touches the image in one point");
  MaximalBall MB{B, contacts, false};
  return kp_element(MB, K);
}

std::optional<GeneralizedBall> TwoContactFamily::at(double s) const {
  switch (type) {
    case Type::vertex_vertex_disk:
    case Type::vertex_vertex_exterior: {
      Point m = (u + v) * 0.5;
      Point n = unit(perp(v - u));
      double t = dist(u, v) * std::tan(0.5 * kPi * s);
      if (!std::isfinite(t)) return std::nullopt;
      Point c = m + n * t;
      double r = dist(c, u);
      if (type == Type::vertex_vertex_disk) return GeneralizedBall::disk(c, r);
      return GeneralizedBall::exterior(c, r);
    }
    case Type::vertex_edge: {
      Point q = e0 + (e1 - e0) * s;
      Point nu = unit(perp(e1 - e0)) * side;
      double den = 2.0 * dot(u - q, nu);
      if (den <= 1e-14) return std::nullopt;
      double lam = norm2(q - u) / den;
      return GeneralizedBall::disk(q + nu * lam, lam);
    }
    case Type::edge_edge: {
      Point q = u + (v - u) * s;
      Point nu1 = unit(perp(v - u)) * side;
      Line L2 = line_of({e0, e1});
      double den = sigma - dot(nu1, L2.nu);
      if (std::abs(den) < 1e-12) return std::nullopt;
      double lam = (dot(L2.nu, q) - L2.h) / den;
      if (!(lam > 1e-12)) return std::nullopt;
      Point c = q + nu1 * lam;
      Point foot = c - L2.nu * (dot(L2.nu, c) - L2.h);
      double t = dot(foot - e0, e1 - e0) / norm2(e1 - e0);
      if (t < 0.0 || t > 1.0) return std::nullopt;
      return GeneralizedBall::disk(c, lam);
    }
  }
  return std::nullopt;
}

std::vector<TwoContactFamily> two_contact_families(const PolyContinuum& K) {
  std::vector<Point> V = K.points();
  std::vector<Segment> E = edges_of(K);
  double tol = 1e-12 * scale_of(K);
  std::vector<TwoContactFamily> out;
  using T = TwoContactFamily::Type;
  for (std::size_t i = 0; i < V.size(); ++i)
    for (std::size_t j = i + 1; j < V.size(); ++j) {
      if (near(V[i], V[j], 1e-14)) continue;
      for (T t : {T::vertex_vertex_disk, T::vertex_vertex_exterior}) {
        TwoContactFamily f;
        f.type = t;
        f.u = V[i];
        f.v = V[j];
        f.lo = -1.0;
        f.hi = 1.0;
        out.push_back(f);
      }
    }
  for (Point u : V)
    for (const Segment& s : E) {
      double h = dot(unit(perp(s.b - s.a)), u - s.a);
      if (std::abs(h) <= tol) continue;
      TwoContactFamily f;
      f.type = T::vertex_edge;
      f.u = u;
      f.e0 = s.a;
      f.e1 = s.b;
      f.side = h > 0.0 ? 1.0 : -1.0;
      out.push_back(f);
    }
  for (std::size_t a = 0; a < E.size(); ++a)
    for (std::size_t b = a + 1; b < E.size(); ++b)
      for (double side : {1.0, -1.0})
        for (double sigma : {1.0, -1.0}) {
          TwoContactFamily f;
          f.type = T::edge_edge;
          f.u = E[a].a;
          f.v = E[a].b;
          f.e0 = E[b].a;
          f.e1 = E[b].b;
          f.side = side;
          f.sigma = sigma;
          out.push_back(f);
        }
  return out;
}

std::vector<MaximalBall> maximal_balls(const PolyContinuum& K, int budget) {
  require_nondegenerate(K);
  if (budget < 0) throw Error(Errc::InvalidInput, "budget must be non-negative");
  std::vector<MaximalBall> out = exact_balls(K);
  double sc = scale_of(K);
  for (const TwoContactFamily& f : two_contact_families(K))
    for (int k = 0; k < budget; ++k) {
      double s = f.lo + (f.hi - f.lo) * (k + 0.5) / budget;
      auto B = f.at(s);
      if (!B || !empty_interior(*B, K, 1e-9 * sc)) continue;
      std::vector<Point> c = contact_points(*B, K, kContactTol * sc);
      if (c.size() == 2) out.push_back({*B, std::move(c), true});
    }
  return out;
}

bool inside_polygon(const GeneralizedBall& B, const PolyContinuum& K, double tol) {
  if (B.kind != GeneralizedBall::Kind::disk || !polygon_contains(K.boundary.vertices, B.center)) return false;
  for (const Segment& s : K.segments())
    if (point_segment_distance(B.center, s.a, s.b) < B.radius - tol) return false;
  return true;
}

std::vector<MaximalBall> interior_maximal_balls(const PolyContinuum& P, int budget) {
  if (P.kind != PolyContinuum::Kind::polygon) throw Error(Errc::InvalidInput, "interior balls need a polygon");
  if (std::abs(P.boundary.signed_area()) <= kEpsGeom * scale_of(P) * scale_of(P))
    throw Error(Errc::DegenerateRegion, "polygon has zero area");
  require_nondegenerate(P);
  if (budget < 0) throw Error(Errc::InvalidInput, "budget must be non-negative");
  double sc = scale_of(P);
  double tolv = 1e-9 * sc, tolc = kContactTol * sc;
  std::vector<MaximalBall> out;
  for (const GeneralizedBall& B : candidate_balls(P)) {
    if (!inside_polygon(B, P, tolv)) continue;
    std::vector<Point> contacts = contact_points(B, P, tolc);
    if (contacts.size() < 3) continue;
    bool dup = std::any_of(out.begin(), out.end(),
                           [&](const MaximalBall& m) { return coeff_distance(m.ball, B) <= 1e-9; });
    if (!dup) out.push_back({B, std::move(contacts), false});
  }
  for (const TwoContactFamily& f : two_contact_families(P)) {
    if (f.type == TwoContactFamily::Type::vertex_vertex_exterior) continue;
    for (int k = 0; k < budget; ++k) {
      double s = f.lo + (f.hi - f.lo) * (k + 0.5) / budget;
      auto B = f.at(s);
      if (!B || !inside_polygon(*B, P, tolv)) continue;
      std::vector<Point> c = contact_points(*B, P, tolc);
      if (c.size() == 2) out.push_back({*B, std::move(c), true});
    }
  }
  return out;
}

double inverted_radius(const GeneralizedBall& B, Point p) {
  if (B.kind == GeneralizedBall::Kind::half_plane) return 1.0 / (2.0 * std::abs(dot(B.normal, p - B.line_point)));
  return B.radius / std::abs(norm2(B.center - p) - B.radius * B.radius);
}

Circle inverted_ball(const GeneralizedBall& B, Point p) {
  if (B.kind == GeneralizedBall::Kind::half_plane) {
    double h = dot(B.normal, B.line_point - p);
    double R = 1.0 / (2.0 * std::abs(h));
    return {p + B.normal * std::copysign(R, h), R};
  }
  Point cp = B.center - p;
  double delta = norm2(cp) - B.radius * B.radius;
  return {p + cp / delta, B.radius / std::abs(delta)};
}

double inverted_gap(const GeneralizedBall& a, const GeneralizedBall& b, Point p) {
  Circle x = inverted_ball(a, p), y = inverted_ball(b, p);
  return std::max(dist(x.center, y.center), std::abs(x.radius - y.radius)) / std::max(x.radius, y.radius);
}

double coeff_distance(const GeneralizedBall& a, const GeneralizedBall& b) {
  auto x = a.coeffs(), y = b.coeffs();
  double d = 0.0;
  for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

EnumerationLocator::EnumerationLocator(const PolyContinuum& K, int grid) : K_(K) {
  require_nondegenerate(K_);
  if (grid < 4) throw Error(Errc::InvalidInput, "grid too coarse");
  exact_ = exact_balls(K_);
  families_ = two_contact_families(K_);
  double tolv = 1e-12 * scale_of(K_);
  auto valid = [&](const TwoContactFamily& f, double s) {
    auto B = f.at(s);
    return B && empty_interior(*B, K_, tolv);
  };
  for (std::size_t fi = 0; fi < families_.size(); ++fi) {
    const TwoContactFamily& f = families_[fi];
    std::vector<double> s(grid);
    std::vector<char> ok(grid);
    for (int k = 0; k < grid; ++k) {
      s[k] = f.lo + (f.hi - f.lo) * (k + 0.5) / grid;
      ok[k] = valid(f, s[k]);
    }
    auto edge = [&](double good, double bad) {
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (good + bad);
        (valid(f, mid) ? good : bad) = mid;
      }
      return good;
    };
    for (int k = 0; k < grid;) {
      if (!ok[k]) {
        ++k;
        continue;
      }
      int j = k;
      while (j + 1 < grid && ok[j + 1]) ++j;
      Run run;
      run.family = fi;
      run.lo = k == 0 ? s[0] : edge(s[k], s[k - 1]);
      run.hi = j + 1 == grid ? s[grid - 1] : edge(s[j], s[j + 1]);
      // towards an open end of the domain the samples thin out geometrically
      double step = 0.5 * (f.hi - f.lo) / grid;
      if (k == 0)
        for (int e = 3; e >= 1; --e)
          if (valid(f, f.lo + step * std::pow(10.0, -e))) run.s.push_back(f.lo + step * std::pow(10.0, -e));
      if (run.s.empty()) run.s.push_back(run.lo);
      for (int m = k; m <= j; ++m) run.s.push_back(s[m]);
      if (j + 1 == grid)
        for (int e = 1; e <= 3; ++e)
          if (valid(f, f.hi - step * std::pow(10.0, -e))) run.s.push_back(f.hi - step * std::pow(10.0, -e));
      if (j + 1 != grid) run.s.push_back(run.hi);
      run.lo = run.s.front();
      run.hi = run.s.back();
      for (double t : run.s) run.balls.push_back(*f.at(t));
      runs_.push_back(std::move(run));
      k = j + 1;
    }
  }
}

GeneralizedBall EnumerationLocator::locate(Point p) const {
  double best = kInf;
  GeneralizedBall arg;
  auto score = [&](const GeneralizedBall& B) { return B.depth(p) < 0.0 ? inverted_radius(B, p) : kInf; };
  for (const MaximalBall& m : exact_) {
    double v = score(m.ball);
    if (v < best) best = v, arg = m.ball;
  }
  for (const Run& run : runs_) {
    // the run ends carry a further contact and are among the exact balls
    std::size_t k = 0;
    double local = kInf;
    for (std::size_t i = 1; i + 1 < run.balls.size(); ++i) {
      double v = score(run.balls[i]);
      if (v < local) local = v, k = i;
    }
    if (!std::isfinite(local)) continue;
    const TwoContactFamily& f = families_[run.family];
    auto value = [&](double s) {
      auto B = f.at(s);
      return B ? score(*B) : kInf;
    };
    double a = run.s[k == 0 ? 0 : k - 1], b = run.s[std::min(k + 1, run.s.size() - 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
      if (f1 <= f2) {
        b = x2, x2 = x1, f2 = f1;
        x1 = b - g * (b - a), f1 = value(x1);
      } else {
        a = x1, x1 = x2, f1 = f2;
        x2 = a + g * (b - a), f2 = value(x2);
      }
    }
    double sm = f1 <= f2 ? x1 : x2;
    double vm = std::min(f1, f2);
    double span = 1e-9 * (run.hi - run.lo);
    if (sm - run.lo < span || run.hi - sm < span) vm = kInf;
    if (vm < local && vm < best) {
      best = vm;
      arg = *f.at(sm);
    } else if (local < best) {
      best = local;
      arg = run.balls[k];
    }
  }
  if (!std::isfinite(best)) throw Error(Errc::HypothesisFailed, "no maximal ball contains the point");
  return arg;
}

const char* kind_name(ChordsBetween::Kind k) {
  switch (k) {
    case ChordsBetween::Kind::empty: return "empty";
    case ChordsBetween::Kind::single: return "single";
    case ChordsBetween::Kind::disk: return "disk";
    case ChordsBetween::Kind::pencil: return "pencil";
  }
  return "?";
}

ChordsBetween chords_between(Point a, Point b, const PolyContinuum& K, int samples) {
  require_nondegenerate(K);
  if (samples < 8) throw Error(Errc::InvalidInput, "too few samples");
  if (near(a, b)) throw Error(Errc::InvalidInput, "chord endpoints coincide");
  double sc = scale_of(K);
  double tolv = 1e-9 * sc, tolc = kContactTol * sc;
  Point w = b - a;

  auto ball_at = [&](double psi) {
    Point n = perp(polar(1.0, psi));
    double den = 2.0 * dot(w, n);
    if (std::abs(den) <= 1e-12 * norm(w)) return GeneralizedBall::half_plane(a, n);
    double rho = norm2(w) / den;
    Point c = a + n * rho;
    return rho > 0.0 ? GeneralizedBall::disk(c, rho) : GeneralizedBall::exterior(c, -rho);
  };
  auto valid = [&](double psi) {
    GeneralizedBall B = ball_at(psi);
    if (!empty_interior(B, K, tolv)) return false;
    std::vector<Point> c = contact_points(B, K, tolc);
    auto find = [&](Point q) {
      for (std::size_t i = 0; i < c.size(); ++i)
        if (near(c[i], q, 10.0 * tolc)) return static_cast<long>(i);
      return -1L;
    };
    long ia = find(a), ib = find(b);
    if (ia < 0 || ib < 0) return false;
    long gap = std::abs(ia - ib);
    return gap == 1 || gap == static_cast<long>(c.size()) - 1;
  };

  double line_psi = wrap(std::atan2(w.y, w.x));
  std::vector<double> psi;
  for (int k = 0; k < samples; ++k) psi.push_back(2.0 * kPi * k / samples);
  psi.push_back(line_psi);
  psi.push_back(wrap(line_psi + kPi));
  std::sort(psi.begin(), psi.end());
  std::size_t n = psi.size();
  std::vector<char> ok(n);
  for (std::size_t i = 0; i < n; ++i) ok[i] = valid(psi[i]);

  ChordsBetween out;
  std::size_t good = std::count(ok.begin(), ok.end(), 1);
  if (good == 0) return out;
  if (good == n) {
    out.kind = ChordsBetween::Kind::pencil;
    return out;
  }

  auto edge = [&](double g, double bad) {
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (g + bad);
      (valid(mid) ? g : bad) = mid;
    }
    for (double snap : {line_psi, line_psi + kPi, line_psi - kPi, line_psi + 2.0 * kPi, line_psi - 2.0 * kPi})
      if (std::abs(g - snap) < 1e-6 && valid(snap)) return snap;
    return g;
  };
  // Runs of valid samples, walked cyclically from an invalid one.
  std::size_t start = 0;
  while (ok[start]) ++start;
  std::vector<std::pair<double, double>> runs;
  for (std::size_t step = 1; step <= n; ++step) {
    std::size_t i = (start + step) % n;
    if (!ok[i]) continue;
    std::size_t j = i, len = 0;
    while (ok[(j + 1) % n]) j = (j + 1) % n, ++len;
    auto unwrap = [&](std::size_t from, std::size_t to) {
      double d = psi[to] - psi[from];
      return d < 0.0 ? d + 2.0 * kPi : d;
    };
    std::size_t before = (i + n - 1) % n, after = (j + 1) % n;
    double lo = edge(psi[i], psi[i] - unwrap(before, i));
    double hi = edge(psi[j], psi[j] + unwrap(j, after));
    runs.push_back({lo, hi});
    step += len;
  }
  double lo = runs.front().first, hi = runs.back().second;
  if (runs.size() == 1 && hi - lo < kEpsGeom) {
    out.kind = ChordsBetween::Kind::single;
    out.balls.push_back(ball_at(0.5 * (lo + hi)));
  } else {
    out.kind = ChordsBetween::Kind::disk;
    out.balls.push_back(ball_at(lo));
    out.balls.push_back(ball_at(hi));
  }
  for (const GeneralizedBall& B : out.balls) out.chords.push_back(hyperbolic_geodesic(B, a, b));
  return out;
}

PartitionReport partition_check(const PolyContinuum& K, const std::vector<Point>& samples) {
  EnumerationLocator loc(K);
  double eps = 1e-7 * scale_of(K);
  std::vector<KPElement> gaps;
  for (const MaximalBall& m : loc.exact()) {
    try {
      gaps.push_back(kp_element(m, K));
    } catch (const Error& e) {
      if (e.code() != Errc::UnboundedGeodesic) throw;
    }
  }
  PartitionReport rep;
  for (Point p : samples) {
    ++rep.samples;
    KPElement e = kp_locate(p, K);
    if (e.contains(p, eps)) ++rep.located;
    double gap = inverted_gap(e.ball.ball, loc.locate(p), p);
    rep.max_gap = std::max(rep.max_gap, gap);
    if (gap <= 1e-6)
      ++rep.agreements;
    else
      rep.disagreements.push_back(p);
    for (const KPElement& g : gaps)
      if (coeff_distance(g.ball.ball, e.ball.ball) > 1e-6 && g.contains(p, -eps)) {
        ++rep.double_memberships;
        break;
      }
  }
  return rep;
}

}  // namespace planefix::kp
