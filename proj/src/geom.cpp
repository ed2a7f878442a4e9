#include "planefix/geom.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "planefix/error.hpp"

namespace planefix {

Point closest_on_segment(Point p, Point a, Point b) {
  return a + (b - a) * segment_param(p, a, b);
}

double segment_param(Point p, Point a, Point b) {
  Point d = b - a;
  double l2 = norm2(d);
  if (l2 == 0.0) return 0.0;
  return std::clamp(dot(p - a, d) / l2, 0.0, 1.0);
}

double point_segment_distance(Point p, Point a, Point b) {
  return dist(p, closest_on_segment(p, a, b));
}

bool segments_intersect(Point a, Point b, Point c, Point d, double eps) {
  return segment_segment_distance(a, b, c, d) <= eps;
}

std::optional<std::pair<double, double>> proper_crossing(Point a, Point b, Point c, Point d) {
  Point r = b - a, s = d - c;
  double den = cross(r, s);
  if (den == 0.0) return std::nullopt;
  Point ac = c - a;
  double t = cross(ac, s) / den;
  double u = cross(ac, r) / den;
  if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) return std::nullopt;
  return std::make_pair(t, u);
}

double segment_segment_distance(Point a, Point b, Point c, Point d) {
  if (proper_crossing(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

Box Box::expanded(double factor) const {
  Point c = center();
  Point h{std::max(width(), 1e-6) * 0.5 * factor, std::max(height(), 1e-6) * 0.5 * factor};
  return {c - h, c + h};
}

void Box::include(Point p) {
  lo.x = std::min(lo.x, p.x);
  lo.y = std::min(lo.y, p.y);
  hi.x = std::max(hi.x, p.x);
  hi.y = std::max(hi.y, p.y);
}

Box Box::of(const std::vector<Point>& pts) {
  if (pts.empty()) return {};
  Box b{pts[0], pts[0]};
  for (const Point& p : pts) b.include(p);
  return b;
}

GeneralizedBall GeneralizedBall::disk(Point c, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error(Errc::InvalidInput, "disk radius must be finite and >= 0");
  GeneralizedBall b;
  b.kind = Kind::disk;
  b.center = c;
  b.radius = r;
  return b;
}

GeneralizedBall GeneralizedBall::exterior(Point c, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(Errc::InvalidInput, "exterior radius must be positive");
  GeneralizedBall b;
  b.kind = Kind::exterior_disk;
  b.center = c;
  b.radius = r;
  return b;
}

GeneralizedBall GeneralizedBall::half_plane(Point q, Point n) {
  double l = norm(n);
  if (!(l > 0.0)) throw Error(Errc::InvalidInput, "half-plane normal is zero");
  GeneralizedBall b;
  b.kind = Kind::half_plane;
  b.line_point = q;
  b.normal = n / l;
  return b;
}

double GeneralizedBall::depth(Point p) const {
  switch (kind) {
    case Kind::disk: return dist(p, center) - radius;
    case Kind::exterior_disk: return radius - dist(p, center);
    case Kind::half_plane: return -dot(normal, p - line_point);
  }
  return 0.0;
}

Point GeneralizedBall::project_to_boundary(Point p) const {
  if (kind == Kind::half_plane) return p + normal * depth(p);
  Point d = p - center;
  double l = norm(d);
  if (l == 0.0) return center + Point{radius, 0.0};
  return center + d * (radius / l);
}

std::array<double, 4> GeneralizedBall::coeffs() const {
  switch (kind) {
    case Kind::disk:
      return {1.0 / radius, -2.0 * center.x / radius, -2.0 * center.y / radius,
              (norm2(center) - radius * radius) / radius};
    case Kind::exterior_disk:
      return {-1.0 / radius, 2.0 * center.x / radius, 2.0 * center.y / radius,
              -(norm2(center) - radius * radius) / radius};
    case Kind::half_plane:
      return {0.0, -2.0 * normal.x, -2.0 * normal.y, 2.0 * dot(normal, line_point)};
  }
  return {};
}

double GeneralizedBall::power(Point p) const {
  switch (kind) {
    case Kind::disk: return (radius * radius - norm2(p - center)) / radius;
    case Kind::exterior_disk: return (norm2(p - center) - radius * radius) / radius;
    case Kind::half_plane: return 2.0 * dot(normal, p - line_point);
  }
  return 0.0;
}

std::size_t PolyCurve::segment_count() const {
  if (vertices.size() < 2) return 0;
  return closed ? vertices.size() : vertices.size() - 1;
}

Segment PolyCurve::segment(std::size_t i) const {
  return {vertices[i], vertices[(i + 1) % vertices.size()]};
}

std::vector<double> PolyCurve::cumulative_lengths() const {
  std::vector<double> c(segment_count() + 1, 0.0);
  for (std::size_t i = 0; i < segment_count(); ++i) {
    Segment s = segment(i);
    c[i + 1] = c[i] + dist(s.a, s.b);
  }
  return c;
}

double PolyCurve::length() const { return cumulative_lengths().back(); }

Point PolyCurve::at(double s) const {
  auto c = cumulative_lengths();
  double total = c.back();
  if (closed) {
    s = std::fmod(s, total);
    if (s < 0) s += total;
  } else {
    s = std::clamp(s, 0.0, total);
  }
  auto it = std::upper_bound(c.begin(), c.end(), s);
  std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - c.begin() - 1, 0), segment_count() - 1);
  Segment sg = segment(i);
  double len = c[i + 1] - c[i];
  double t = len > 0 ? (s - c[i]) / len : 0.0;
  return sg.a + (sg.b - sg.a) * t;
}

double PolyCurve::project(Point p) const {
  auto c = cumulative_lengths();
  double best = INFINITY, param = 0.0;
  for (std::size_t i = 0; i < segment_count(); ++i) {
    Segment s = segment(i);
    double t = segment_param(p, s.a, s.b);
    double d = dist(p, s.a + (s.b - s.a) * t);
    if (d < best) {
      best = d;
      param = c[i] + t * (c[i + 1] - c[i]);
    }
  }
  return param;
}

double PolyCurve::distance(Point p) const {
  double best = INFINITY;
  for (std::size_t i = 0; i < segment_count(); ++i) {
    Segment s = segment(i);
    best = std::min(best, point_segment_distance(p, s.a, s.b));
  }
  if (segment_count() == 0 && !vertices.empty()) best = dist(p, vertices[0]);
  return best;
}

double PolyCurve::signed_area() const {
  double a = 0.0;
  std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(vertices[i], vertices[(i + 1) % n]);
  return 0.5 * a;
}

bool PolyCurve::is_simple() const {
  std::size_t m = segment_count();
  for (std::size_t i = 0; i < m; ++i) {
    Segment si = segment(i);
    if (dist(si.a, si.b) <= kEpsGeom) return false;
    for (std::size_t j = i + 1; j < m; ++j) {
      Segment sj = segment(j);
      bool adjacent = (j == i + 1) || (closed && i == 0 && j == m - 1);
      if (adjacent) {
        // adjacent segments may only share their common vertex
        Point other_i = (j == i + 1) ? si.a : si.b;
        Point other_j = (j == i + 1) ? sj.b : sj.a;
        if (point_segment_distance(other_j, si.a, si.b) <= kEpsGeom ||
            point_segment_distance(other_i, sj.a, sj.b) <= kEpsGeom)
          return false;
        continue;
      }
      if (segments_intersect(si.a, si.b, sj.a, sj.b)) return false;
    }
  }
  return true;
}

PolyCurve PolyCurve::reversed() const {
  PolyCurve r = *this;
  std::reverse(r.vertices.begin(), r.vertices.end());
  return r;
}

void PolyCurve::validate() const {
  if (vertices.size() < 2) throw Error(Errc::InvalidInput, "curve needs at least 2 vertices");
  for (const Point& p : vertices)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error(Errc::InvalidInput, "non-finite vertex");
  if (closed && vertices.size() < 3) throw Error(Errc::InvalidInput, "closed curve needs at least 3 vertices");
  if (!is_simple()) throw Error(Errc::InvalidInput, "curve is not simple");
}

PolyContinuum PolyContinuum::polygon(std::vector<Point> v) {
  PolyContinuum k;
  k.kind = Kind::polygon;
  k.boundary = PolyCurve(std::move(v), true);
  return k;
}

PolyContinuum PolyContinuum::tree(std::vector<Point> nodes, std::vector<std::pair<int, int>> edges) {
  PolyContinuum k;
  k.kind = Kind::tree;
  k.nodes = std::move(nodes);
  k.edges = std::move(edges);
  return k;
}

PolyContinuum PolyContinuum::segment(Point a, Point b) { return tree({a, b}, {{0, 1}}); }

PolyContinuum PolyContinuum::disjoint_union(std::vector<PolyContinuum> parts) {
  PolyContinuum k;
  k.kind = Kind::disjoint_union;
  k.parts = std::move(parts);
  return k;
}

std::vector<Segment> PolyContinuum::segments() const {
  std::vector<Segment> out;
  switch (kind) {
    case Kind::polygon:
      for (std::size_t i = 0; i < boundary.segment_count(); ++i) out.push_back(boundary.segment(i));
      break;
    case Kind::tree:
      for (auto [u, v] : edges) out.push_back({nodes[u], nodes[v]});
      break;
    case Kind::disjoint_union:
      for (const auto& p : parts) {
        auto s = p.segments();
        out.insert(out.end(), s.begin(), s.end());
      }
      break;
  }
  return out;
}

std::vector<Point> PolyContinuum::points() const {
  switch (kind) {
    case Kind::polygon: return boundary.vertices;
    case Kind::tree: return nodes;
    case Kind::disjoint_union: {
      std::vector<Point> out;
      for (const auto& p : parts) {
        auto s = p.points();
        out.insert(out.end(), s.begin(), s.end());
      }
      return out;
    }
  }
  return {};
}

double PolyContinuum::distance(Point p) const {
  double best = INFINITY;
  for (const Segment& s : segments()) best = std::min(best, point_segment_distance(p, s.a, s.b));
  for (const Point& q : points()) best = std::min(best, dist(p, q));
  return best;
}

bool PolyContinuum::hull_contains(Point p, double eps) const {
  switch (kind) {
    case Kind::polygon:
      return boundary.distance(p) <= eps || polygon_contains(boundary.vertices, p);
    case Kind::tree:
      return distance(p) <= eps;
    case Kind::disjoint_union:
      return std::any_of(parts.begin(), parts.end(), [&](const PolyContinuum& k) { return k.hull_contains(p, eps); });
  }
  return false;
}

Box PolyContinuum::bbox() const { return Box::of(points()); }

void PolyContinuum::validate() const {
  switch (kind) {
    case Kind::polygon:
      if (boundary.vertices.size() < 3) throw Error(Errc::InvalidInput, "polygon needs at least 3 vertices");
      boundary.validate();
      break;
    case Kind::tree: {
      if (nodes.empty()) throw Error(Errc::InvalidInput, "tree has no nodes");
      if (edges.size() + 1 != nodes.size()) throw Error(Errc::InvalidInput, "tree must have nodes - 1 edges");
      std::vector<int> parent(nodes.size());
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= static_cast<int>(nodes.size()) || v >= static_cast<int>(nodes.size()) || u == v)
          throw Error(Errc::InvalidInput, "tree edge index out of range");
        if (dist(nodes[u], nodes[v]) <= kEpsGeom) throw Error(Errc::InvalidInput, "zero-length tree edge");
        int a = find(u), b = find(v);
        if (a == b) throw Error(Errc::InvalidInput, "tree contains a cycle");
        parent[a] = b;
      }
      for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
          auto [a, b] = edges[i];
          auto [c, d] = edges[j];
          bool share = a == c || a == d || b == c || b == d;
          if (share) {
            int s = (a == c || a == d) ? a : b;
            int oi = s == a ? b : a;
            int oj = (c == s) ? d : c;
            if (point_segment_distance(nodes[oj], nodes[a], nodes[b]) <= kEpsGeom ||
                point_segment_distance(nodes[oi], nodes[c], nodes[d]) <= kEpsGeom)
              throw Error(Errc::InvalidInput, "tree edges overlap");
            continue;
          }
          if (segments_intersect(nodes[a], nodes[b], nodes[c], nodes[d]))
            throw Error(Errc::InvalidInput, "tree edges intersect");
        }
      }
      break;
    }
    case Kind::disjoint_union:
      if (parts.empty()) throw Error(Errc::InvalidInput, "empty union");
      for (const auto& p : parts) p.validate();
      for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j)
          for (const Segment& s : parts[i].segments())
            for (const Segment& t : parts[j].segments())
              if (segments_intersect(s.a, s.b, t.a, t.b)) throw Error(Errc::InvalidInput, "union parts meet");
      break;
  }
}

double winding_angle(const std::vector<Point>& ring, Point w) {
  double total = 0.0;
  std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point a = ring[i] - w, b = ring[(i + 1) % n] - w;
    total += std::atan2(cross(a, b), dot(a, b));
  }
  return total;
}

int ring_winding(const std::vector<Point>& ring, Point w, double eps) {
  std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i)
    if (point_segment_distance(w, ring[i], ring[(i + 1) % n]) <= eps)
      throw Error(Errc::PointOnCurve, "point lies on the curve");
  double turns = winding_angle(ring, w) / (2.0 * kPi);
  double k = std::round(turns);
  if (std::abs(turns - k) > 0.1) throw Error(Errc::PointOnCurve, "winding residual too large");
  return static_cast<int>(k);
}

int winding_number(const PolyCurve& curve, Point w) {
  if (!curve.closed) throw Error(Errc::InvalidInput, "winding number needs a closed curve");
  return ring_winding(curve.vertices, w);
}

bool polygon_contains(const std::vector<Point>& ring, Point w) {
  // crossing-number parity; boundary handled by callers
  bool inside = false;
  std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > w.y) != (b.y > w.y)) {
      double x = a.x + (w.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (w.x < x) inside = !inside;
    }
  }
  return inside;
}

std::optional<Circle> circumcircle(Point a, Point b, Point c) {
  Point ab = b - a, ac = c - a;
  double d = 2.0 * cross(ab, ac);
  double scale = std::max(norm2(ab), norm2(ac));
  if (std::abs(d) <= 1e-14 * scale) return std::nullopt;
  Point u{(ac.y * norm2(ab) - ab.y * norm2(ac)) / d, (ab.x * norm2(ac) - ac.x * norm2(ab)) / d};
  return Circle{a + u, norm(u)};
}

namespace {

Circle diameter_circle(Point a, Point b) { return {(a + b) * 0.5, dist(a, b) * 0.5}; }

Circle three_support(Point a, Point b, Point c) {
  if (auto cc = circumcircle(a, b, c)) return *cc;
  Circle best = diameter_circle(a, b);
  for (Circle cand : {diameter_circle(a, c), diameter_circle(b, c)})
    if (cand.radius > best.radius) best = cand;
  return best;
}

bool outside(const Circle& c, Point p) { return dist(c.center, p) > c.radius * (1.0 + 1e-12) + 1e-15; }

}  // namespace

GeneralizedBall smallest_enclosing_ball(const std::vector<Point>& points) {
  if (points.empty()) throw Error(Errc::InvalidInput, "smallest_enclosing_ball needs a point");
  std::vector<Point> p = points;
  std::mt19937_64 rng(0x5eedULL);
  std::shuffle(p.begin(), p.end(), rng);
  Circle c{p[0], 0.0};
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (!outside(c, p[i])) continue;
    c = {p[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (!outside(c, p[j])) continue;
      c = diameter_circle(p[i], p[j]);
      for (std::size_t k = 0; k < j; ++k)
        if (outside(c, p[k])) c = three_support(p[i], p[j], p[k]);
    }
  }
  return GeneralizedBall::disk(c.center, c.radius);
}

Point invert(Point p, Point center) {
  Point d = p - center;
  double r2 = norm2(d);
  if (std::sqrt(r2) <= kEpsGeom) throw Error(Errc::AtCenter, "cannot invert the center");
  return center + d / r2;
}

namespace {

std::vector<Point> arc_points(Point o, double rho, double t0, double sweep, int n) {
  std::vector<Point> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i) out.push_back(o + polar(rho, t0 + sweep * i / n));
  return out;
}

}  // namespace

PolyCurve hyperbolic_geodesic(const GeneralizedBall& ball, Point a, Point b, int n) {
  if (n < 1) throw Error(Errc::InvalidInput, "need at least one segment");
  double tol = 1e-7 * std::max(1.0, ball.kind == GeneralizedBall::Kind::half_plane ? 1.0 : ball.radius);
  if (!ball.on_boundary(a, tol) || !ball.on_boundary(b, tol))
    throw Error(Errc::NotOnBoundary, "geodesic endpoints must lie on the ball boundary");
  if (near(a, b)) throw Error(Errc::InvalidInput, "geodesic endpoints coincide");

  std::vector<Point> pts;
  if (ball.kind == GeneralizedBall::Kind::half_plane) {
    Point m = (a + b) * 0.5;
    Point u = a - m;
    Point v = ball.normal * norm(u);
    for (int i = 0; i <= n; ++i) {
      double t = kPi * i / n;
      pts.push_back(m + u * std::cos(t) + v * std::sin(t));
    }
  } else {
    Point c = ball.center;
    double r = ball.radius;
    Point ua = (a - c) / r, ub = (b - c) / r;
    double den = 1.0 + dot(ua, ub);
    if (den <= 1e-12) {
      if (ball.kind == GeneralizedBall::Kind::exterior_disk)
        throw Error(Errc::UnboundedGeodesic, "diametric geodesic of an exterior ball passes through infinity");
      for (int i = 0; i <= n; ++i) pts.push_back(a + (b - a) * (static_cast<double>(i) / n));
    } else {
      Point o = c + (ua + ub) * (r / den);
      double rho = dist(a, o);
      double ta = std::atan2(a.y - o.y, a.x - o.x);
      double tb = std::atan2(b.y - o.y, b.x - o.x);
      double sweep = std::remainder(tb - ta, 2.0 * kPi);  // minor arc, inside the disk
      if (ball.kind == GeneralizedBall::Kind::exterior_disk) sweep = sweep > 0 ? sweep - 2.0 * kPi : sweep + 2.0 * kPi;
      pts = arc_points(o, rho, ta, sweep, n);
    }
  }
  pts.front() = a;
  pts.back() = b;
  return PolyCurve(std::move(pts), false);
}

std::vector<Point> regular_polygon(int n, double radius, Point center, double phase) {
  std::vector<Point> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) v.push_back(center + polar(radius, phase + 2.0 * kPi * i / n));
  return v;
}

}  // namespace planefix
