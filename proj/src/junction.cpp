#include <algorithm>
#include <deque>
#include <random>

#include "planefix/error.hpp"
#include "planefix/index_var.hpp"

namespace planefix {

namespace {

constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

Point rotate(Point v, double a) {
  double c = std::cos(a), s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Point right_of(Point d) { return {d.y, -d.x}; }

struct Grid {
  Box box;
  double h = 0.0;
  int nx = 0, ny = 0;
  std::vector<char> blocked;

  int id(int i, int j) const { return j * nx + i; }
  bool inside(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  Point center(int i, int j) const { return box.lo + Point{(i + 0.5) * h, (j + 0.5) * h}; }
  std::pair<int, int> cell_of(Point p) const {
    return {static_cast<int>(std::floor((p.x - box.lo.x) / h)), static_cast<int>(std::floor((p.y - box.lo.y) / h))};
  }
  bool on_rim(int i, int j) const { return i == 0 || j == 0 || i == nx - 1 || j == ny - 1; }

  void block_near(Point a, Point b, double clearance) {
    Box bb{{std::min(a.x, b.x) - clearance, std::min(a.y, b.y) - clearance},
           {std::max(a.x, b.x) + clearance, std::max(a.y, b.y) + clearance}};
    auto [i0, j0] = cell_of(bb.lo);
    auto [i1, j1] = cell_of(bb.hi);
    for (int j = std::max(0, j0); j <= std::min(ny - 1, j1); ++j)
      for (int i = std::max(0, i0); i <= std::min(nx - 1, i1); ++i)
        if (point_segment_distance(center(i, j), a, b) < clearance) blocked[id(i, j)] = 1;
  }
};

struct Obstacles {
  std::vector<Segment> segs;
  const PolyContinuum* X = nullptr;
  const PolyCurve* S = nullptr;
};

// Clearance test for a lane path; the first `skip_head` fraction of the first segment may touch v.
bool path_clear(const std::vector<Point>& path, const Obstacles& ob, double skip_head) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    Point a = path[i], b = path[i + 1];
    if (i == 0) a = a + (b - a) * skip_head;
    for (const Segment& s : ob.segs)
      if (segment_segment_distance(a, b, s.a, s.b) <= 1e-12) return false;
  }
  return true;
}

bool paths_disjoint(const std::vector<Point>& p, const std::vector<Point>& q, double skip_head) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    Point a = p[i], b = p[i + 1];
    if (i == 0) a = a + (b - a) * skip_head;
    for (std::size_t j = 0; j + 1 < q.size(); ++j) {
      Point c = q[j], d = q[j + 1];
      if (j == 0) c = c + (d - c) * skip_head;
      if (segment_segment_distance(a, b, c, d) <= 1e-12) return false;
    }
  }
  return true;
}

std::vector<Segment> obstacle_segments(const PolyContinuum* X, const PolyCurve& S) {
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < S.segment_count(); ++i) segs.push_back(S.segment(i));
  if (X) {
    auto xs = X->segments();
    segs.insert(segs.end(), xs.begin(), xs.end());
    for (const Point& p : X->points()) segs.push_back({p, p});
  }
  return segs;
}

// Outward candidate directions at v: one for closed S, both sides for an open S.
std::vector<Point> outward_directions(Point v, const PolyCurve& S) {
  std::size_t m = S.segment_count();
  std::size_t best = 0;
  double bd = INFINITY;
  for (std::size_t i = 0; i < m; ++i) {
    Segment s = S.segment(i);
    double d = point_segment_distance(v, s.a, s.b);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  Segment s = S.segment(best);
  double t = segment_param(v, s.a, s.b);
  double len = dist(s.a, s.b);
  Point n = right_of(unit(s.b - s.a));
  // at a vertex, bisect the two edge normals
  auto edge_normal = [&](std::size_t i) {
    Segment e = S.segment(i);
    return right_of(unit(e.b - e.a));
  };
  if (t * len <= 1e-9 && (S.closed || best > 0)) {
    std::size_t prev = best == 0 ? m - 1 : best - 1;
    Point b = edge_normal(prev) + n;
    n = norm(b) > 1e-12 ? unit(b) : unit(s.b - s.a) * -1.0;
  } else if ((1 - t) * len <= 1e-9 && (S.closed || best + 1 < m)) {
    std::size_t next = (best + 1) % m;
    Point b = edge_normal(next) + n;
    n = norm(b) > 1e-12 ? unit(b) : unit(s.b - s.a);
  }
  if (S.closed) {
    if (S.signed_area() < 0) n = -n;
    return {n};
  }
  return {n, -n};
}

std::vector<int> bfs_path(const Grid& g, const std::vector<char>& blocked, int si, int sj, Point first_dir,
                          int target_id) {
  std::vector<int> parent(g.nx * g.ny, -2);
  std::deque<int> q;
  int s = g.id(si, sj);
  parent[s] = -1;
  q.push_back(s);
  int found = -1;
  while (!q.empty()) {
    int c = q.front();
    q.pop_front();
    int ci = c % g.nx, cj = c / g.nx;
    if ((target_id < 0 && g.on_rim(ci, cj)) || c == target_id) {
      found = c;
      break;
    }
    for (int k = 0; k < 4; ++k) {
      if (c == s && dot(Point(kDx[k], kDy[k]), first_dir) < -0.7) continue;
      int ni = ci + kDx[k], nj = cj + kDy[k];
      if (!g.inside(ni, nj)) continue;
      int n = g.id(ni, nj);
      if (blocked[n] || parent[n] != -2) continue;
      parent[n] = c;
      q.push_back(n);
    }
  }
  std::vector<int> path;
  for (int c = found; c >= 0; c = parent[c]) path.push_back(c);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<Point> offset_polyline(const std::vector<Point>& c, Point d_in, Point d_out, double off) {
  std::vector<Point> out;
  for (std::size_t j = 0; j < c.size(); ++j) {
    Point a = j == 0 ? d_in : unit(c[j] - c[j - 1]);
    Point b = j + 1 == c.size() ? d_out : unit(c[j + 1] - c[j]);
    Point ra = right_of(a), rb = right_of(b);
    Point m = (ra + rb) / (1.0 + dot(ra, rb));
    out.push_back(c[j] + m * off);
  }
  return out;
}

std::vector<Point> simplify(const std::vector<Point>& p) {
  std::vector<Point> out;
  for (const Point& q : p) {
    if (!out.empty() && near(out.back(), q, 1e-12)) continue;
    while (out.size() >= 2 && std::abs(cross(out.back() - out[out.size() - 2], q - out.back())) <= 1e-12 &&
           dot(out.back() - out[out.size() - 2], q - out.back()) > 0)
      out.pop_back();
    out.push_back(q);
  }
  return out;
}

std::optional<Junction> attempt(Point v, Point n, const Obstacles& ob, const PolyContinuum* X, const PolyCurve& S,
                                int resolution, std::uint64_t seed) {
  std::vector<Point> all = S.vertices;
  if (X) {
    auto xp = X->points();
    all.insert(all.end(), xp.begin(), xp.end());
  }
  all.push_back(v);
  Box bb = Box::of(all);
  double side = std::max({bb.width(), bb.height(), 1e-3});
  Grid g;
  Point c = bb.center();
  g.box = {c - Point{1.5 * side, 1.5 * side}, c + Point{1.5 * side, 1.5 * side}};
  g.h = 3.0 * side / resolution;
  g.nx = g.ny = resolution;
  g.blocked.assign(g.nx * g.ny, 0);
  double clearance = 0.75 * g.h;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      Point p = g.center(i, j);
      if ((S.closed && polygon_contains(S.vertices, p)) || (X && X->hull_contains(p, 0.0))) g.blocked[g.id(i, j)] = 1;
    }
  }
  for (const Segment& s : ob.segs) g.block_near(s.a, s.b, clearance);

  // leave S along n until a free cell center is visible from v
  Point vout, approach;
  int si = -1, sj = -1;
  for (int k = 1; k <= 4 * resolution; ++k) {
    Point p = v + n * (0.5 * g.h * k);
    auto [i, j] = g.cell_of(p);
    if (!g.inside(i, j)) return std::nullopt;
    if (g.blocked[g.id(i, j)]) continue;
    Point cc = g.center(i, j);
    if (!path_clear({v, cc}, ob, 1e-4)) continue;
    vout = cc;
    approach = unit(cc - v);
    si = i;
    sj = j;
    break;
  }
  if (si < 0) return std::nullopt;

  std::vector<char> blocked = g.blocked;
  {
    Grid tmp = g;
    tmp.blocked.assign(g.nx * g.ny, 0);
    tmp.block_near(v, vout - approach * (0.5 * g.h), 0.5 * g.h);
    for (std::size_t k = 0; k < blocked.size(); ++k)
      if (tmp.blocked[k] && static_cast<int>(k) != g.id(si, sj)) blocked[k] = 1;
  }

  std::vector<int> cells;
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, g.nx * g.ny - 1);
    for (int tries = 0; tries < 40 && cells.empty(); ++tries) {
      int w = pick(rng);
      if (blocked[w] || w == g.id(si, sj)) continue;
      std::vector<int> leg1 = bfs_path(g, blocked, si, sj, approach, w);
      if (leg1.empty()) continue;
      std::vector<char> b2 = blocked;
      std::vector<char> on_leg(g.nx * g.ny, 0);
      for (int c1 : leg1) on_leg[c1] = 1;
      for (int c1 : leg1) {
        if (c1 != w) b2[c1] = 1;
        if (c1 == w) continue;
        int ci = c1 % g.nx, cj = c1 / g.nx;
        for (int k = 0; k < 4; ++k) {
          int ni = ci + kDx[k], nj = cj + kDy[k];
          if (g.inside(ni, nj) && g.id(ni, nj) != w) b2[g.id(ni, nj)] = 1;
        }
      }
      int wi = w % g.nx, wj = w / g.nx;
      Point d1 = leg1.size() >= 2 ? g.center(wi, wj) - g.center(leg1[leg1.size() - 2] % g.nx, leg1[leg1.size() - 2] / g.nx)
                                  : approach;
      std::vector<int> leg2 = bfs_path(g, b2, wi, wj, unit(d1), -1);
      if (leg2.empty()) continue;
      cells = leg1;
      cells.insert(cells.end(), leg2.begin() + 1, leg2.end());
    }
  }
  if (cells.empty()) cells = bfs_path(g, blocked, si, sj, approach, -1);
  if (cells.empty()) return std::nullopt;

  std::vector<Point> center_line;
  for (int c1 : cells) center_line.push_back(g.center(c1 % g.nx, c1 / g.nx));
  int li = cells.back() % g.nx, lj = cells.back() / g.nx;
  Point last_move = cells.size() >= 2 ? unit(center_line.back() - center_line[center_line.size() - 2]) : approach;
  std::vector<Point> exits;
  if (li == 0) exits.push_back({-1, 0});
  if (li == g.nx - 1) exits.push_back({1, 0});
  if (lj == 0) exits.push_back({0, -1});
  if (lj == g.ny - 1) exits.push_back({0, 1});
  Point d_exit = *std::max_element(exits.begin(), exits.end(),
                                   [&](Point a, Point b) { return dot(a, last_move) < dot(b, last_move); });
  center_line.push_back(center_line.back() + d_exit * (0.5 * g.h));
  center_line = simplify(center_line);

  const double delta = 0.2 * g.h;
  Junction J;
  J.vertex = v;
  std::array<Ray*, 3> rays{&J.plus, &J.inner, &J.minus};
  std::array<double, 3> offs{delta, 0.0, -delta};
  std::array<double, 3> turn{-20.0 * kPi / 180.0, 0.0, 20.0 * kPi / 180.0};
  for (int k = 0; k < 3; ++k) {
    std::vector<Point> lane = offset_polyline(center_line, approach, d_exit, offs[k]);
    lane.insert(lane.begin(), v);
    rays[k]->pts = lane;
    rays[k]->dir = rotate(d_exit, turn[k]);
  }
  if (!junction_clear(J, X, S)) return std::nullopt;
  return J;
}

}  // namespace

bool junction_clear(const Junction& J, const PolyContinuum* X, const PolyCurve& S) {
  Obstacles ob;
  ob.segs = obstacle_segments(X, S);
  const double skip = 1e-4;
  for (int k = 0; k < 3; ++k)
    if (!path_clear(J.ray(k).pts, ob, skip)) return false;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (!paths_disjoint(J.ray(a).pts, J.ray(b).pts, skip)) return false;
  // escape half-lines must leave every obstacle behind
  for (int k = 0; k < 3; ++k) {
    const Ray& r = J.ray(k);
    for (const Segment& s : ob.segs) {
      for (Point p : {s.a, s.b})
        if (dot(p - r.pts.back(), r.dir) > 0 && std::abs(cross(r.dir, p - r.pts.back())) < 1e-12) return false;
      Point far = r.pts.back() + r.dir * 1e9;
      if (proper_crossing(r.pts.back(), far, s.a, s.b)) return false;
    }
  }
  return true;
}

Junction make_junction(Point v, const PolyContinuum* X, const PolyCurve& S, const JunctionOptions& opt) {
  if (S.vertices.size() < 2) throw Error(Errc::InvalidInput, "junction needs a curve");
  if (S.distance(v) > 1e-7) throw Error(Errc::InvalidInput, "junction vertex must lie on S");
  if (X && X->distance(v) <= kEpsGeom) throw Error(Errc::InvalidInput, "junction vertex must avoid X");
  Obstacles ob;
  ob.segs = obstacle_segments(X, S);
  for (int res : {opt.resolution, 2 * opt.resolution, 4 * opt.resolution}) {
    for (Point n : outward_directions(v, S)) {
      if (auto J = attempt(v, n, ob, X, S, res, opt.seed)) return *J;
    }
  }
  throw Error(Errc::NoEscapePath, "no route from the vertex to infinity avoids X and S");
}

Junction make_junction(Point v, const PolyContinuum& X, const PolyCurve& S, const JunctionOptions& opt) {
  return make_junction(v, &X, S, opt);
}

}  // namespace planefix
