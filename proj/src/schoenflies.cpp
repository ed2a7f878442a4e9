#include "planefix/schoenflies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>

#include "planefix/error.hpp"

namespace planefix::schoenflies {

namespace {

std::vector<Point> ccw(std::vector<Point> ring) {
  if (PolyCurve(ring, true).signed_area() < 0.0) std::reverse(ring.begin(), ring.end());
  return ring;
}

double scale_of(const std::vector<Point>& ring) {
  Box b = Box::of(ring);
  return std::max(1.0, norm(b.hi - b.lo));
}

double wrap(double s, double L) {
  s = std::fmod(s, L);
  return s < 0.0 ? s + L : s;
}

Point mean(const std::vector<Point>& pts) {
  Point m;
  for (Point p : pts) m += p;
  return m / static_cast<double>(pts.size());
}

bool is_convex(const std::vector<Point>& ring) {
  std::size_t n = ring.size();
  double tol = 1e-12 * scale_of(ring) * scale_of(ring);
  for (std::size_t i = 0; i < n; ++i)
    if (cross(ring[(i + 1) % n] - ring[i], ring[(i + 2) % n] - ring[(i + 1) % n]) < -tol) return false;
  return true;
}

// Open arc strictly between a and b going forward.
bool strictly_between(double x, double a, double b, double L, double tol) {
  double d = wrap(x - a, L), span = wrap(b - a, L);
  return d > tol && d < span - tol;
}

bool crosses(std::pair<double, double> c, std::pair<double, double> d, double L, double tol) {
  auto near_end = [&](double x) {
    return std::min(wrap(x - c.first, L), wrap(c.first - x, L)) <= tol ||
           std::min(wrap(x - c.second, L), wrap(c.second - x, L)) <= tol;
  };
  if (near_end(d.first) || near_end(d.second)) return false;
  return strictly_between(d.first, c.first, c.second, L, tol) != strictly_between(d.second, c.first, c.second, L, tol);
}

double fan_area(Point c, Point a, Point b) { return 0.5 * cross(a - c, b - c); }

double min_fan(const std::vector<Point>& ring, Point c) {
  double m = INFINITY;
  for (std::size_t k = 0; k < ring.size(); ++k) m = std::min(m, fan_area(c, ring[k], ring[(k + 1) % ring.size()]));
  return m;
}

// Kernel of a counter-clockwise polygon by clipping against the left side of each edge.
std::vector<Point> kernel(const std::vector<Point>& ring) {
  std::vector<Point> poly = ring;
  std::size_t n = ring.size();
  for (std::size_t k = 0; k < n && !poly.empty(); ++k) {
    Point a = ring[k], b = ring[(k + 1) % n];
    auto side = [&](Point p) { return cross(b - a, p - a); };
    std::vector<Point> next;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      Point p = poly[i], q = poly[(i + 1) % poly.size()];
      double sp = side(p), sq = side(q);
      if (sp >= 0.0) next.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) next.push_back(p + (q - p) * (sp / (sp - sq)));
    }
    poly = std::move(next);
  }
  return poly;
}

Point area_centroid(const std::vector<Point>& ring) {
  double a = 0.0;
  Point c;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    Point p = ring[i], q = ring[(i + 1) % ring.size()];
    double w = cross(p, q);
    a += w;
    c += (p + q) * w;
  }
  if (std::abs(a) < 1e-300) return mean(ring);
  return c / (3.0 * a);
}

}  // namespace

InteriorLamination build_interior_lamination(const std::vector<Point>& polygon, int budget, int samples) {
  if (budget < 0 || samples < 0) throw Error(Errc::InvalidInput, "budget must be non-negative");
  InteriorLamination lam;
  lam.polygon = ccw(polygon);
  PolyContinuum P = PolyContinuum::polygon(lam.polygon);
  double tol = 1e-9 * scale_of(lam.polygon);

  std::vector<kp::MaximalBall> balls = kp::interior_maximal_balls(P, samples);
  std::vector<Chord> family;
  auto add = [&](std::vector<Chord>& to, Chord c) {
    if (dist(c.a, c.b) <= tol) return;
    auto same = [&](const Chord& o) {
      return (near(o.a, c.a, tol) && near(o.b, c.b, tol)) || (near(o.a, c.b, tol) && near(o.b, c.a, tol));
    };
    if (std::none_of(lam.chords.begin(), lam.chords.end(), same) && std::none_of(to.begin(), to.end(), same))
      to.push_back(c);
  };
  for (const auto& m : balls) {
    if (m.sampled) continue;
    lam.gaps.push_back({m, mean(m.contacts)});
    for (std::size_t i = 0; i < m.contacts.size(); ++i)
      add(lam.chords, {m.contacts[i], m.contacts[(i + 1) % m.contacts.size()], true});
  }
  for (const auto& m : balls)
    if (m.sampled) add(family, {m.contacts[0], m.contacts[1], false});
  std::stable_sort(family.begin(), family.end(),
                   [](const Chord& x, const Chord& y) { return dist(x.a, x.b) > dist(y.a, y.b); });
  if (static_cast<int>(family.size()) > budget) {
    double cut = budget > 0 ? dist(family[budget - 1].a, family[budget - 1].b) * (1.0 - 1e-9) : INFINITY;
    std::size_t keep = 0;
    while (keep < family.size() && dist(family[keep].a, family[keep].b) >= cut) ++keep;
    family.resize(keep);
  }
  lam.chords.insert(lam.chords.end(), family.begin(), family.end());
  return lam;
}

BoundaryMap::BoundaryMap(const std::vector<Point>& source, const std::vector<Point>& target,
                         const std::vector<std::pair<Point, Point>>& pairs)
    : source_(ccw(source), true), target_(ccw(target), true) {
  source_.validate();
  target_.validate();
  ls_ = source_.length();
  lt_ = target_.length();
  if (pairs.empty()) throw Error(Errc::InvalidInput, "boundary map needs at least one pair");
  double ts = 1e-9 * scale_of(source_.vertices), tt = 1e-9 * scale_of(target_.vertices);
  std::vector<std::pair<double, double>> st;
  for (auto [p, q] : pairs) {
    if (source_.distance(p) > ts || target_.distance(q) > tt)
      throw Error(Errc::InvalidInput, "boundary pair is off the boundary");
    st.emplace_back(wrap(source_.project(p), ls_), wrap(target_.project(q), lt_));
  }
  std::sort(st.begin(), st.end());
  std::size_t n = st.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (st[i + 1].first - st[i].first <= ts) throw Error(Errc::NotInjective, "repeated source point");
  if (n > 1 && st[0].first + ls_ - st[n - 1].first <= ts) throw Error(Errc::NotInjective, "repeated source point");
  s_.push_back(st[0].first);
  t_.push_back(st[0].second);
  int turns = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = wrap(st[(i + 1) % n].second - st[i].second, lt_);
    if (n > 1 && (d <= tt || lt_ - d <= tt)) throw Error(Errc::NotInjective, "repeated target point");
    total += n == 1 ? lt_ : d;
    if (i + 1 < n) {
      s_.push_back(st[i + 1].first);
      t_.push_back(t_.back() + d);
    }
  }
  turns = static_cast<int>(std::lround(total / lt_));
  if (turns != 1) {
    if (n >= 3 && turns == static_cast<int>(n) - 1) throw Error(Errc::OrientationReversed, "boundary map reverses orientation");
    throw Error(Errc::NotInjective, "boundary map winds more than once");
  }
}

double BoundaryMap::forward_param(double s) const {
  s = s_[0] + wrap(s - s_[0], ls_);
  std::size_t i = std::upper_bound(s_.begin(), s_.end(), s) - s_.begin() - 1;
  double s1 = i + 1 < s_.size() ? s_[i + 1] : s_[0] + ls_;
  double t1 = i + 1 < t_.size() ? t_[i + 1] : t_[0] + lt_;
  return wrap(t_[i] + (s - s_[i]) * (t1 - t_[i]) / (s1 - s_[i]), lt_);
}

double BoundaryMap::inverse_param(double t) const {
  t = t_[0] + wrap(t - t_[0], lt_);
  std::size_t i = std::upper_bound(t_.begin(), t_.end(), t) - t_.begin() - 1;
  double s1 = i + 1 < s_.size() ? s_[i + 1] : s_[0] + ls_;
  double t1 = i + 1 < t_.size() ? t_[i + 1] : t_[0] + lt_;
  return wrap(s_[i] + (t - t_[i]) * (s1 - s_[i]) / (t1 - t_[i]), ls_);
}

Point BoundaryMap::operator()(Point p) const { return target_.at(forward_param(source_.project(p))); }

Point BoundaryMap::inverse(Point q) const { return source_.at(inverse_param(target_.project(q))); }

ExtendedMap extend_homeomorphism(const std::vector<Point>& source, const std::vector<Point>& target,
                                 const std::vector<std::pair<Point, Point>>& h, int budget) {
  if (source.size() < 3 || target.size() < 3) throw Error(Errc::InvalidInput, "polygons need at least 3 vertices");
  ExtendedMap H{BoundaryMap(source, target, h)};
  const PolyCurve& S = H.h_.source();
  const PolyCurve& T = H.h_.target();
  if (!is_convex(S.vertices)) throw Error(Errc::InvalidInput, "source polygon must be convex");
  double L = S.length();
  H.scale_ = scale_of(S.vertices);
  double tol = 1e-12 * L;

  std::vector<double> corners = S.cumulative_lengths();
  corners.pop_back();
  std::vector<double> tc = T.cumulative_lengths();
  tc.pop_back();
  for (double t : tc) {
    double s = H.h_.inverse_param(t);
    bool ok = std::any_of(corners.begin(), corners.end(), [&](double c) {
      return std::min(wrap(s - c, L), wrap(c - s, L)) <= 1e-9 * L;
    });
    if (!ok) throw Error(Errc::InvalidInput, "every target vertex must be the image of a source vertex");
  }

  H.lam_ = build_interior_lamination(T.vertices, budget);

  std::vector<std::pair<double, double>> ends;
  for (const Chord& c : H.lam_.chords) {
    std::pair<double, double> e{H.h_.inverse_param(T.project(c.a)), H.h_.inverse_param(T.project(c.b))};
    if (std::any_of(ends.begin(), ends.end(), [&](const auto& o) { return crosses(o, e, L, tol); })) continue;
    ends.push_back(e);
    H.pulled_.push_back({S.at(e.first), S.at(e.second), c.gap_side});
  }

  // Vertices of the cut source, all on its boundary, keyed by arc length.
  std::vector<double> params = corners;
  params.insert(params.end(), H.h_.source_breaks().begin(), H.h_.source_breaks().end());
  for (auto [a, b] : ends) {
    params.push_back(a);
    params.push_back(b);
  }
  for (double& p : params) p = wrap(p, L);
  std::sort(params.begin(), params.end());
  std::vector<double> vs;
  for (double p : params)
    if (vs.empty() || p - vs.back() > tol) vs.push_back(p);
  if (vs.size() > 1 && vs[0] + L - vs.back() <= tol) vs.pop_back();
  std::size_t n = vs.size();
  auto index_of = [&](double p) {
    std::size_t best = 0;
    double bd = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      double d = std::min(wrap(p - vs[i], L), wrap(vs[i] - p, L));
      if (d < bd) bd = d, best = i;
    }
    return best;
  };
  std::vector<std::vector<std::size_t>> nbr(n);
  for (std::size_t i = 0; i < n; ++i) {
    nbr[i].push_back((i + 1) % n);
    nbr[i].push_back((i + n - 1) % n);
  }
  for (auto [a, b] : ends) {
    std::size_t i = index_of(a), j = index_of(b);
    if (i == j || std::find(nbr[i].begin(), nbr[i].end(), j) != nbr[i].end()) continue;
    nbr[i].push_back(j);
    nbr[j].push_back(i);
  }
  auto gap_from = [&](std::size_t v, std::size_t w) { return wrap(vs[w] - vs[v], L); };
  std::map<std::pair<std::size_t, std::size_t>, bool> used;
  auto walk = [&](std::size_t u, std::size_t v) {
    std::vector<std::size_t> cycle;
    std::size_t a = u, b = v;
    while (!used[{a, b}]) {
      used[{a, b}] = true;
      cycle.push_back(a);
      double du = gap_from(b, a);
      std::size_t next = a;
      double best = -1.0;
      for (std::size_t w : nbr[b]) {
        double d = gap_from(b, w);
        if (w != a && d < du && d > best) best = d, next = w;
      }
      if (best < 0.0) next = a;
      a = b;
      b = next;
    }
    return cycle;
  };
  std::vector<std::vector<std::size_t>> cycles;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : nbr[i]) {
      if (j == (i + n - 1) % n && !(n == 2)) continue;
      if (!used[{i, j}]) cycles.push_back(walk(i, j));
    }

  for (const auto& cyc : cycles) {
    Face f;
    for (std::size_t i : cyc) {
      f.source.push_back(S.at(vs[i]));
      f.target.push_back(T.at(H.h_.forward_param(vs[i])));
    }
    f.source_center = mean(f.source);
    f.target_center = mean(f.target);
    if (min_fan(f.target, f.target_center) <= 0.0) {
      std::vector<Point> ker = kernel(f.target);
      if (ker.size() < 3) throw Error(Errc::NotInjective, "a target face is not star-shaped");
      f.target_center = area_centroid(ker);
      if (min_fan(f.target, f.target_center) <= 0.0) throw Error(Errc::NotInjective, "a target face is not star-shaped");
    }
    for (std::size_t g = 0; g < H.lam_.gaps.size(); ++g) {
      const auto& c = H.lam_.gaps[g].ball.contacts;
      if (c.size() != f.target.size()) continue;
      bool all = std::all_of(f.target.begin(), f.target.end(), [&](Point z) {
        return std::any_of(c.begin(), c.end(), [&](Point q) { return near(q, z, 1e-7 * H.scale_); });
      });
      if (all) f.gap = static_cast<int>(g);
    }
    f.bounds = Box::of(f.source);
    H.faces_.push_back(std::move(f));
  }
  return H;
}

Point ExtendedMap::operator()(Point p) const {
  const PolyCurve& S = h_.source();
  double eps = 1e-12 * scale_;
  double d = S.distance(p);
  if (d <= eps) return h_(p);
  if (!polygon_contains(S.vertices, p)) throw Error(Errc::OutsideDomain, "point is outside the source polygon");
  const Face* best = nullptr;
  std::size_t bk = 0;
  double score = -INFINITY, ba = 0.0, bb = 0.0;
  for (const Face& f : faces_) {
    if (!f.bounds.contains(p, 1e-9 * scale_)) continue;
    std::size_t m = f.source.size();
    for (std::size_t k = 0; k < m; ++k) {
      Point u = f.source[k] - f.source_center, v = f.source[(k + 1) % m] - f.source_center;
      double det = cross(u, v);
      if (det <= 0.0) continue;
      Point w = p - f.source_center;
      double a = cross(w, v) / det, b = cross(u, w) / det;
      double sc = std::min({a, b, 1.0 - a - b});
      if (sc > score) score = sc, best = &f, bk = k, ba = a, bb = b;
    }
  }
  if (!best || score < -1e-6) throw Error(Errc::OutsideDomain, "point is not covered by any face");
  std::size_t m = best->source.size();
  Point c = best->target_center;
  return c + (best->target[bk] - c) * ba + (best->target[(bk + 1) % m] - c) * bb;
}

double ExtendedMap::min_fan_area() const {
  double m = INFINITY;
  for (const Face& f : faces_) m = std::min(m, min_fan(f.target, f.target_center));
  return m;
}

Point evaluate(const ExtendedMap& H, Point p) { return H(p); }

InjectivityReport injectivity_probe(const ExtendedMap& H, int samples) {
  if (samples <= 0) throw Error(Errc::InvalidInput, "samples must be positive");
  const std::vector<Point>& ring = H.boundary().source().vertices;
  Box b = Box::of(ring);
  double area = std::abs(H.boundary().source().signed_area());
  double step = std::sqrt(area / samples);
  int nx = static_cast<int>(std::ceil(b.width() / step)), ny = static_cast<int>(std::ceil(b.height() / step));
  std::vector<std::vector<std::optional<Point>>> img(nx, std::vector<std::optional<Point>>(ny));
  InjectivityReport rep;
  rep.min_fan_area = H.min_fan_area();
  rep.min_separation = INFINITY;
  std::unordered_map<std::int64_t, std::vector<Point>> cells;
  auto key = [](std::int64_t i, std::int64_t j) { return i * 2654435761LL + j; };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      Point p = b.lo + Point{(i + 0.5) * step, (j + 0.5) * step};
      if (!polygon_contains(ring, p)) continue;
      Point z = H(p);
      img[i][j] = z;
      ++rep.samples;
      auto ci = static_cast<std::int64_t>(std::floor(z.x / kEpsGeom));
      auto cj = static_cast<std::int64_t>(std::floor(z.y / kEpsGeom));
      for (std::int64_t di = -1; di <= 1; ++di)
        for (std::int64_t dj = -1; dj <= 1; ++dj) {
          auto it = cells.find(key(ci + di, cj + dj));
          if (it == cells.end()) continue;
          for (Point q : it->second)
            if (dist(q, z) < kEpsGeom) ++rep.collisions;
        }
      cells[key(ci, cj)].push_back(z);
    }
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      if (!img[i][j]) continue;
      if (i + 1 < nx && img[i + 1][j]) rep.min_separation = std::min(rep.min_separation, dist(*img[i][j], *img[i + 1][j]));
      if (j + 1 < ny && img[i][j + 1]) rep.min_separation = std::min(rep.min_separation, dist(*img[i][j], *img[i][j + 1]));
    }
  return rep;
}

}  // namespace planefix::schoenflies
