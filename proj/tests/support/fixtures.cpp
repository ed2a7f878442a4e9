#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "support/oracles.hpp"

namespace fixture {

using namespace planefix;

namespace {

double uni(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
int uint_(std::mt19937_64& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

std::vector<double> sorted_angles(std::mt19937_64& rng, int n, double min_gap) {
  for (;;) {
    std::vector<double> a;
    for (int i = 0; i < n; ++i) a.push_back(uni(rng, 0.0, 2.0 * kPi));
    std::sort(a.begin(), a.end());
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      double g = (i + 1 < n ? a[i + 1] : a[0] + 2.0 * kPi) - a[i];
      if (g < min_gap) ok = false;
    }
    if (ok) return a;
  }
}

Point point_on(const std::vector<Point>& path, double frac) {
  PolyCurve pc(path, false);
  return pc.at(frac * pc.length());
}

double angle_of(Point p, Point c) { return std::atan2(p.y - c.y, p.x - c.x); }

// PL correspondence between a domain path and an image path, both parametrized by arc-length fraction.
void append_arc(const std::vector<Point>& dom, const std::vector<Point>& img, std::vector<Point>& out_d,
                std::vector<Point>& out_i) {
  PolyCurve D(dom, false), Q(img, false);
  std::vector<double> fr;
  auto add = [&](const PolyCurve& c) {
    auto cum = c.cumulative_lengths();
    for (double s : cum) fr.push_back(s / cum.back());
  };
  add(D);
  add(Q);
  std::sort(fr.begin(), fr.end());
  fr.erase(std::unique(fr.begin(), fr.end(), [](double a, double b) { return b - a < 1e-12; }), fr.end());
  double ld = D.length(), lq = Q.length();
  for (std::size_t k = 0; k + 1 < fr.size(); ++k) {  // last point is the next arc's first
    out_d.push_back(D.at(fr[k] * ld));
    out_i.push_back(Q.at(fr[k] * lq));
  }
}

struct Excursion {
  std::vector<Point> path;
  int expected = 0;
};

// Image of arc i: from p0 to p1 through the interior, optionally looping outside through other arcs.
Excursion make_image(std::mt19937_64& rng, const PolyCurve& S, const std::vector<Point>& cuts, std::size_t i, Point c,
                     Point p0, Point p1, double R, bool excursion, int want_sign) {
  Excursion ex;
  std::size_t m = cuts.size();
  if (!excursion || m < 2) {
    ex.path = {p0, p1};
    return ex;
  }
  auto pick_other = [&]() {
    for (;;) {
      std::size_t e = static_cast<std::size_t>(uint_(rng, 0, static_cast<int>(m) - 1));
      if (e != i) return e;
    }
  };
  std::size_t e = pick_other(), g = pick_other();
  Point pe = point_on(sub_arc(S, cuts[e], cuts[(e + 1) % m]), uni(rng, 0.2, 0.8));
  Point pg = point_on(sub_arc(S, cuts[g], cuts[(g + 1) % m]), uni(rng, 0.2, 0.8));
  double te = angle_of(pe, c), tg = angle_of(pg, c);
  double base = std::fmod(tg - te + 4.0 * kPi, 2.0 * kPi);
  double theta_v = angle_of(point_on(sub_arc(S, cuts[i], cuts[(i + 1) % m]), 0.5), c);
  double delta = 0.0;
  for (int tries = 0; tries < 64; ++tries) {
    int k = uint_(rng, -2, 1);
    delta = base + 2.0 * kPi * k;
    if (std::abs(delta) < 1e-3) continue;
    int passes = signed_passes(theta_v, te, delta);
    if (want_sign == 0 || (want_sign < 0 && passes < 0) || (want_sign > 0 && passes > 0)) break;
  }
  ex.expected = signed_passes(theta_v, te, delta);
  ex.path = {p0, pe, c + polar(R, te)};
  int steps = std::max(2, static_cast<int>(std::ceil(std::abs(delta) / 0.05)));
  for (int s = 1; s < steps; ++s) ex.path.push_back(c + polar(R, te + delta * s / steps));
  ex.path.push_back(c + polar(R, te + delta));
  ex.path.push_back(pg);
  ex.path.push_back(p1);
  return ex;
}

std::vector<Point> random_cuts(std::mt19937_64& rng, const PolyCurve& S, int count) {
  double L = S.length();
  for (;;) {
    std::vector<double> s;
    for (int k = 0; k < count; ++k) s.push_back(uni(rng, 0.0, L));
    std::sort(s.begin(), s.end());
    bool ok = true;
    for (int k = 0; k < count; ++k) {
      double g = (k + 1 < count ? s[k + 1] : s[0] + L) - s[k];
      if (g < 0.6 * L / count) ok = false;
    }
    // no cut on a vertex
    for (double v : s)
      for (double cv : S.cumulative_lengths())
        if (std::abs(v - cv) < 1e-6 * L) ok = false;
    if (!ok) continue;
    int rot = uint_(rng, 0, count - 1);
    std::rotate(s.begin(), s.begin() + rot, s.end());
    std::vector<Point> out;
    for (double v : s) out.push_back(S.at(v));
    return out;
  }
}

Point random_inside(std::mt19937_64& rng, const std::vector<Point>& convex) {
  Point c;
  for (const Point& p : convex) c += p;
  c = c / static_cast<double>(convex.size());
  PolyCurve ring(convex, true);
  Point b = ring.at(uni(rng, 0.0, ring.length()));
  return c + (b - c) * uni(rng, 0.1, 0.8);
}

}  // namespace

int signed_passes(double theta_v, double t0, double delta) {
  double lo = std::min(t0, t0 + delta), hi = std::max(t0, t0 + delta);
  double k0 = std::ceil((lo - theta_v) / (2.0 * kPi));
  int count = 0;
  for (double k = k0; theta_v + 2.0 * kPi * k < hi; k += 1.0)
    if (theta_v + 2.0 * kPi * k > lo) ++count;
  return delta > 0 ? count : -count;
}

std::vector<Point> random_convex(std::mt19937_64& rng, int n, double radius) {
  auto a = sorted_angles(rng, n, 0.6 * 2.0 * kPi / n);
  double sx = uni(rng, 0.7, 1.3), sy = uni(rng, 0.7, 1.3), rot = uni(rng, 0.0, 2.0 * kPi);
  std::vector<Point> v;
  for (double t : a) {
    Point p{radius * sx * std::cos(t), radius * sy * std::sin(t)};
    v.push_back({p.x * std::cos(rot) - p.y * std::sin(rot), p.x * std::sin(rot) + p.y * std::cos(rot)});
  }
  return v;
}

std::vector<Point> random_star(std::mt19937_64& rng, int n, double rmin, double rmax) {
  auto a = sorted_angles(rng, n, 0.4 * 2.0 * kPi / n);
  std::vector<Point> v;
  for (double t : a) v.push_back(polar(uni(rng, rmin, rmax), t));
  return v;
}

VariationCase variation_case(std::mt19937_64& rng, bool want_negative) {
  for (;;) {
    VariationCase vc;
    PolyCurve S(random_convex(rng, uint_(rng, 6, 12)), true);
    int count = uint_(rng, 3, 6);
    std::vector<Point> cuts = random_cuts(rng, S, count);
    Point c;
    for (const Point& p : S.vertices) c += p;
    c = c / static_cast<double>(S.vertices.size());
    double rmax = 0.0;
    for (const Point& p : S.vertices) rmax = std::max(rmax, dist(p, c));

    std::vector<Point> fcut;
    for (int k = 0; k < count; ++k) fcut.push_back(random_inside(rng, S.vertices));
    int neg_arc = want_negative ? uint_(rng, 0, count - 1) : -1;
    std::vector<Point> dom, img;
    for (int k = 0; k < count; ++k) {
      bool excursion = k == neg_arc || uni(rng, 0, 1) < 0.7;
      double R = rmax * uni(rng, 1.3, 1.8);
      Excursion ex = make_image(rng, S, cuts, k, c, fcut[k], fcut[(k + 1) % count], R, excursion, k == neg_arc ? -1 : 0);
      vc.expected.push_back(ex.expected);
      append_arc(sub_arc(S, cuts[k], cuts[(k + 1) % count]), ex.path, dom, img);
    }
    if (want_negative && *std::min_element(vc.expected.begin(), vc.expected.end()) >= 0) continue;
    vc.P.curve = S;
    vc.P.cuts = cuts;
    vc.domain_samples = dom;
    vc.image_samples = img;
    vc.f = PlaneMap::samples({SampleCurve{dom, img, true}});
    std::vector<Point> disp;
    for (std::size_t k = 0; k < dom.size(); ++k) disp.push_back(img[k] - dom[k]);
    vc.oracle_index = oracle::crossing_winding(disp, {0.0, 0.0});
    return vc;
  }
}

LollipopCase lollipop_case(std::mt19937_64& rng) {
  LollipopCase lc;
  PolyCurve S(random_convex(rng, uint_(rng, 6, 10)), true);
  int count = uint_(rng, 4, 6);
  std::vector<Point> cuts = random_cuts(rng, S, count);
  std::size_t split = static_cast<std::size_t>(uint_(rng, 1, count - 1));
  Point a0 = cuts[0], an = cuts[split];
  // the stick must cross the interior; cuts on one edge would lay it along S
  if (S.distance((a0 + an) * 0.5) < 1e-3 * dist(a0, an)) return lollipop_case(rng);
  Point c;
  for (const Point& p : S.vertices) c += p;
  c = c / static_cast<double>(S.vertices.size());
  double rmax = 0.0;
  for (const Point& p : S.vertices) rmax = std::max(rmax, dist(p, c));

  std::vector<Point> right = sub_arc(S, a0, an), left = sub_arc(S, an, a0);
  lc.right_side = uni(rng, 0, 1) < 0.5;
  const std::vector<Point>& side = lc.right_side ? right : left;
  std::vector<Point> fcut;
  for (int k = 0; k < count; ++k) fcut.push_back(random_inside(rng, S.vertices));
  fcut[0] = random_inside(rng, side);
  fcut[split] = random_inside(rng, side);

  std::vector<Point> dom, img;
  std::vector<int> expected;
  std::vector<std::size_t> arc_start_index;
  for (int k = 0; k < count; ++k) {
    arc_start_index.push_back(dom.size());
    bool excursion = uni(rng, 0, 1) < 0.7;
    double R = rmax * uni(rng, 1.3, 1.8);
    Excursion ex = make_image(rng, S, cuts, k, c, fcut[k], fcut[(k + 1) % count], R, excursion, 0);
    expected.push_back(ex.expected);
    append_arc(sub_arc(S, cuts[k], cuts[(k + 1) % count]), ex.path, dom, img);
  }
  lc.P.curve = S;
  lc.P.cuts = cuts;
  lc.split = split;
  lc.I = PolyCurve({a0, an}, false);
  lc.f = PlaneMap::samples({SampleCurve{dom, img, true}, SampleCurve{{a0, an}, {fcut[0], fcut[split]}, false}});

  int sum = 0;
  for (int k = 0; k < count; ++k)
    if ((static_cast<std::size_t>(k) < split) == lc.right_side) sum += expected[k];
  lc.expected_lhs = sum + 1;

  // displacement loop along the boundary of the chosen side; the closing leg runs along I, where f is linear
  std::vector<Point> disp;
  std::size_t n = dom.size();
  std::size_t from = lc.right_side ? 0 : arc_start_index[split];
  std::size_t to = lc.right_side ? arc_start_index[split] : n;
  for (std::size_t k = from; k < to; ++k) disp.push_back(img[k] - dom[k]);
  disp.push_back(lc.right_side ? fcut[split] - an : fcut[0] - a0);
  lc.oracle_rhs = oracle::crossing_winding(disp, {0.0, 0.0});
  return lc;
}

}  // namespace fixture
