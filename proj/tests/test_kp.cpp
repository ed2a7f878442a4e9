#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "planefix/error.hpp"
#include "planefix/kp.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace planefix;
using namespace planefix::kp;

namespace {

const double r2 = std::sqrt(2.0);

PolyContinuum square() { return PolyContinuum::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::InvalidInput;
}

bool has_ball(const std::vector<MaximalBall>& balls, const GeneralizedBall& B, double tol = 1e-9) {
  for (const auto& m : balls)
    if (coeff_distance(m.ball, B) <= tol) return true;
  return false;
}

// Points outside T(K) in a box around it.
std::vector<Point> outside_samples(std::mt19937_64& rng, const PolyContinuum& K, int count, double margin) {
  Box b = K.bbox();
  std::uniform_real_distribution<double> ux(b.lo.x - margin, b.hi.x + margin), uy(b.lo.y - margin, b.hi.y + margin);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    Point p{ux(rng), uy(rng)};
    if (K.distance(p) > 1e-3 && !K.hull_contains(p)) out.push_back(p);
  }
  return out;
}

// Circle through the images of three boundary points under inversion about p.
double image_radius_oracle(const GeneralizedBall& B, Point p) {
  std::vector<Point> q;
  for (double t : {0.3, 2.1, 4.4}) {
    Point z = B.kind == GeneralizedBall::Kind::half_plane ? B.line_point + perp(B.normal) * (3.0 * t - 6.0)
                                                          : B.center + polar(B.radius, t);
    q.push_back(invert(z, p));
  }
  return oracle::circle_through(q[0], q[1], q[2]).r;
}

}  // namespace

TEST(MaximalBalls, SquareContainsTheFiveObviousBalls) {
  auto balls = maximal_balls(square());
  EXPECT_TRUE(has_ball(balls, GeneralizedBall::half_plane({0, 1}, {0, 1})));
  EXPECT_TRUE(has_ball(balls, GeneralizedBall::half_plane({0, -1}, {0, -1})));
  EXPECT_TRUE(has_ball(balls, GeneralizedBall::half_plane({1, 0}, {1, 0})));
  EXPECT_TRUE(has_ball(balls, GeneralizedBall::half_plane({-1, 0}, {-1, 0})));
  EXPECT_TRUE(has_ball(balls, GeneralizedBall::exterior({0, 0}, r2)));
  int exact = 0;
  for (const auto& m : balls) exact += !m.sampled;
  EXPECT_EQ(exact, 5);
}

TEST(MaximalBalls, SquareTwoVertexCircles) {
  // Circumscribing circles through 1 + i and 1 - i only: exterior balls centred on the negative real axis.
  int seen = 0;
  for (const auto& m : maximal_balls(square())) {
    if (m.contacts.size() != 2 || m.ball.kind == GeneralizedBall::Kind::half_plane) continue;
    bool pair = std::any_of(m.contacts.begin(), m.contacts.end(), [](Point q) { return near(q, {1, 1}, 1e-9); }) &&
                std::any_of(m.contacts.begin(), m.contacts.end(), [](Point q) { return near(q, {1, -1}, 1e-9); });
    if (!pair) continue;
    ++seen;
    EXPECT_TRUE(m.sampled);
    EXPECT_EQ(m.ball.kind, GeneralizedBall::Kind::exterior_disk);
    EXPECT_NEAR(m.ball.center.y, 0.0, 1e-12);
    EXPECT_LT(m.ball.center.x, 0.0);
  }
  EXPECT_GT(seen, 0);
}

TEST(MaximalBalls, EveryBallHasEmptyInteriorBySampling) {
  std::mt19937_64 rng(31);
  std::vector<PolyContinuum> Ks = {square(), PolyContinuum::segment({-1, 0}, {1, 0}),
                                   PolyContinuum::polygon(fixture::random_star(rng, 7))};
  for (const auto& K : Ks) {
    auto balls = maximal_balls(K, 16);
    ASSERT_FALSE(balls.empty());
    std::vector<Point> probes;
    for (const Segment& s : K.segments())
      for (int k = 0; k <= 50; ++k) probes.push_back(s.a + (s.b - s.a) * (k / 50.0));
    if (K.kind == PolyContinuum::Kind::polygon) {
      Box b = K.bbox();
      for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
          Point q{b.lo.x + b.width() * i / 40.0, b.lo.y + b.height() * j / 40.0};
          if (K.hull_contains(q)) probes.push_back(q);
        }
    }
    for (const auto& m : balls) {
      EXPECT_GE(m.contacts.size(), 2u);
      for (Point q : probes) EXPECT_FALSE(m.ball.interior_contains(q, 1e-7)) << q.x << " " << q.y;
      for (Point c : m.contacts) EXPECT_LT(m.ball.boundary_distance(c), 1e-6);
    }
  }
}

TEST(MaximalBalls, SegmentFamilies) {
  // A disk tangent at one interior point grows towards a half-plane, so only the endpoint pencil survives.
  auto balls = maximal_balls(PolyContinuum::segment({-1, 0}, {1, 0}), 32);
  int exterior = 0;
  for (const auto& m : balls) {
    if (m.ball.kind == GeneralizedBall::Kind::disk) ADD_FAILURE() << "disk " << m.ball.center.x << " " << m.ball.center.y;
    if (m.ball.kind != GeneralizedBall::Kind::exterior_disk) continue;
    ++exterior;
    EXPECT_NEAR(m.ball.center.x, 0.0, 1e-12);
    ASSERT_EQ(m.contacts.size(), 2u);
  }
  EXPECT_EQ(exterior, 32);
  EXPECT_TRUE(has_ball(balls, GeneralizedBall::half_plane({0, 0}, {0, 1})));
  EXPECT_TRUE(has_ball(balls, GeneralizedBall::half_plane({0, 0}, {0, -1})));
}

TEST(MaximalBalls, Errors) {
  EXPECT_EQ(code_of([] { maximal_balls(PolyContinuum::segment({1, 1}, {1, 1})); }), Errc::DegenerateRegion);
}

TEST(KpLocate, SquareSemiDisk) {
  KPElement e = kp_locate({0, 1.5}, square());
  EXPECT_LE(coeff_distance(e.ball.ball, GeneralizedBall::half_plane({0, 1}, {0, 1})), 1e-9);
  EXPECT_TRUE(e.is_gap);
  ASSERT_EQ(e.chords.size(), 1u);
  for (Point q : e.chords[0].curve.vertices) {
    EXPECT_NEAR(dist(q, {0, 1}), 1.0, 1e-9);
    EXPECT_GE(q.y, 1.0 - 1e-12);
  }
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.5, 1.5), v(1.0, 2.5);
  for (int k = 0; k < 2000; ++k) {
    Point p{u(rng), v(rng)};
    double d = dist(p, {0, 1});
    if (std::abs(d - 1.0) < 1e-6 || p.y - 1.0 < 1e-6) continue;
    EXPECT_EQ(e.contains(p), d < 1.0) << p.x << " " << p.y;
  }
}

TEST(KpLocate, SquareExteriorGap) {
  KPElement e = kp_locate({2, 2}, square());
  EXPECT_LE(coeff_distance(e.ball.ball, GeneralizedBall::exterior({0, 0}, r2)), 1e-9);
  EXPECT_TRUE(e.is_gap);
  ASSERT_EQ(e.chords.size(), 4u);
  std::vector<Point> centres = {{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
  for (const auto& ch : e.chords) {
    int matched = 0;
    for (Point c : centres) {
      bool on = std::all_of(ch.curve.vertices.begin(), ch.curve.vertices.end(),
                            [&](Point q) { return std::abs(dist(q, c) - r2) < 1e-9; });
      matched += on;
    }
    EXPECT_EQ(matched, 1);
  }
  // Membership against the four excluded disks.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4, 4);
  int inside = 0;
  for (int k = 0; k < 4000; ++k) {
    Point p{u(rng), u(rng)};
    double m = norm(p) - r2;
    for (Point c : centres) m = std::min(m, dist(p, c) - r2);
    if (std::abs(m) < 1e-6) continue;
    EXPECT_EQ(e.contains(p), m > 0) << p.x << " " << p.y;
    inside += m > 0;
  }
  EXPECT_GT(inside, 100);
}

TEST(KpLocate, PointInContinuum) {
  EXPECT_EQ(code_of([] { kp_locate({0, 0}, square()); }), Errc::PointInContinuum);
  EXPECT_EQ(code_of([] { kp_locate({1, 0.3}, square()); }), Errc::PointInContinuum);
  EXPECT_EQ(code_of([] { kp_locate({0.2, 0}, PolyContinuum::segment({-1, 0}, {1, 0})); }), Errc::PointInContinuum);
}

TEST(KpLocate, InvertedRadiusMatchesThreePointOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3), r(0.2, 2);
  for (int k = 0; k < 200; ++k) {
    Point p{u(rng), u(rng)};
    GeneralizedBall B;
    switch (k % 3) {
      case 0: B = GeneralizedBall::disk({u(rng), u(rng)}, r(rng)); break;
      case 1: B = GeneralizedBall::exterior({u(rng), u(rng)}, r(rng)); break;
      default: B = GeneralizedBall::half_plane({u(rng), u(rng)}, polar(1.0, u(rng))); break;
    }
    if (B.boundary_distance(p) < 0.05) continue;
    EXPECT_NEAR(inverted_radius(B, p) / image_radius_oracle(B, p), 1.0, 1e-8);
  }
}

TEST(KpLocate, LocatedBallIsEmptyAndHullContainsPoint) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 12; ++t) {
    PolyContinuum K = t % 3 == 0   ? PolyContinuum::polygon(fixture::random_convex(rng, 5 + t % 4))
                      : t % 3 == 1 ? PolyContinuum::polygon(fixture::random_star(rng, 6 + t % 3))
                                   : PolyContinuum::segment({-1, 0.2 * t}, {1, -0.1 * t});
    for (Point p : outside_samples(rng, K, 60, 1.5)) {
      KPElement e = kp_locate(p, K);
      EXPECT_TRUE(empty_interior(e.ball.ball, K, 1e-8));
      EXPECT_GE(e.ball.contacts.size(), 2u);
      EXPECT_TRUE(e.contains(p, 1e-7)) << t << " " << p.x << " " << p.y;
      EXPECT_EQ(e.is_gap, e.chords.size() >= 2 || e.sides.size() < e.ball.contacts.size() || e.ball.contacts.size() >= 3);
    }
  }
}

TEST(KpLocate, AgreesWithEnumerationOnRandomPolygons) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 6; ++t) {
    PolyContinuum K = PolyContinuum::polygon(t % 2 ? fixture::random_star(rng, 8) : fixture::random_convex(rng, 8));
    EnumerationLocator loc(K);
    for (Point p : outside_samples(rng, K, 80, 1.0)) {
      double gap = inverted_gap(kp_locate(p, K).ball.ball, loc.locate(p), p);
      EXPECT_LE(gap, 1e-6) << t << " " << p.x << " " << p.y;
    }
  }
}

TEST(KpElement, TwoContactBallGivesOneChord) {
  MaximalBall m{GeneralizedBall::exterior({-3, 0}, std::hypot(4.0, 1.0)), {{1, 1}, {1, -1}}, true};
  KPElement e = kp_element(m, square());
  EXPECT_FALSE(e.is_gap);
  ASSERT_EQ(e.chords.size(), 1u);
  EXPECT_EQ(e.sides.size(), 2u);
  Point mid = e.chords[0].curve.at(0.5 * e.chords[0].curve.length());
  EXPECT_TRUE(e.contains(mid, 1e-9));
  EXPECT_FALSE(e.contains(mid + Point{0.05, 0}, 1e-9));
  EXPECT_FALSE(e.contains(mid - Point{0.05, 0}, 1e-9));
}

TEST(KpElement, HalfPlaneChordIsSemicircle) {
  MaximalBall m{GeneralizedBall::half_plane({0, 1}, {0, 1}), {{-1, 1}, {1, 1}}, false};
  KPElement e = kp_element(m, square());
  ASSERT_EQ(e.chords.size(), 1u);
  EXPECT_TRUE(e.is_gap);
  for (Point q : e.chords[0].curve.vertices) EXPECT_NEAR(dist(q, {0, 1}), 1.0, 1e-12);
}

TEST(KpElement, EuclideanHull) {
  MaximalBall m{GeneralizedBall::exterior({0, 0}, r2), contact_points(GeneralizedBall::exterior({0, 0}, r2), square()),
                false};
  KPElement e = kp_element(m, square(), true);
  ASSERT_EQ(e.chords.size(), 4u);
  for (const auto& ch : e.chords) EXPECT_EQ(ch.curve.vertices.size(), 2u);
  EXPECT_FALSE(e.contains({2, 2}));
  KPElement h = kp_element(m, square());
  EXPECT_TRUE(h.contains({2, 2}));
}

TEST(ChordsBetween, SquareTopEdge) {
  auto cb = chords_between({-1, 1}, {1, 1}, square());
  ASSERT_EQ(cb.kind, ChordsBetween::Kind::disk);
  ASSERT_EQ(cb.balls.size(), 2u);
  bool half = false, ext = false;
  for (const auto& B : cb.balls) {
    half = half || coeff_distance(B, GeneralizedBall::half_plane({0, 1}, {0, 1})) < 1e-9;
    ext = ext || coeff_distance(B, GeneralizedBall::exterior({0, 0}, r2)) < 1e-6;
  }
  EXPECT_TRUE(half);
  EXPECT_TRUE(ext);
}

TEST(ChordsBetween, SquareRightEdgeExtremes) {
  auto cb = chords_between({1, 1}, {1, -1}, square());
  ASSERT_EQ(cb.kind, ChordsBetween::Kind::disk);
  std::vector<Point> centres;
  for (const auto& ch : cb.chords) {
    Point mid = ch.at(0.5 * ch.length());
    auto c = oracle::circle_through(ch.vertices.front(), mid, ch.vertices.back());
    centres.push_back(c.c);
  }
  ASSERT_EQ(centres.size(), 2u);
  bool semi = near(centres[0], {1, 0}, 1e-6) || near(centres[1], {1, 0}, 1e-6);
  bool arc = near(centres[0], {2, 0}, 1e-5) || near(centres[1], {2, 0}, 1e-5);
  EXPECT_TRUE(semi);
  EXPECT_TRUE(arc);
}

TEST(ChordsBetween, OppositeCornersAndFlushPoints) {
  EXPECT_EQ(chords_between({1, 1}, {-1, -1}, square()).kind, ChordsBetween::Kind::empty);
  // Inside one flush contact interval: no gap separates them.
  EXPECT_EQ(chords_between({0, 1}, {1, 1}, square()).kind, ChordsBetween::Kind::empty);
}

TEST(ChordsBetween, SegmentEndpoints) {
  auto cb = chords_between({-1, 0}, {1, 0}, PolyContinuum::segment({-1, 0}, {1, 0}));
  ASSERT_EQ(cb.kind, ChordsBetween::Kind::disk);
  for (const auto& B : cb.balls) EXPECT_EQ(B.kind, GeneralizedBall::Kind::half_plane);
}

TEST(PartitionCheck, SquareGrid) {
  std::vector<Point> samples;
  for (int i = 0; i < 25; ++i)
    for (int j = 0; j < 25; ++j) {
      Point p{-3.0 + 6.0 * i / 24.0 + 0.013, -3.0 + 6.0 * j / 24.0 + 0.007};
      if (!square().hull_contains(p, 1e-3) && samples.size() < 500) samples.push_back(p);
    }
  ASSERT_EQ(samples.size(), 500u);
  auto rep = partition_check(square(), samples);
  EXPECT_EQ(rep.located, 500);
  EXPECT_EQ(rep.agreements, 500);
  EXPECT_EQ(rep.double_memberships, 0);
}

TEST(PartitionCheck, SegmentAndRandomOctagon) {
  std::mt19937_64 rng(7);
  PolyContinuum seg = PolyContinuum::segment({-1, 0}, {1, 0});
  auto rep = partition_check(seg, outside_samples(rng, seg, 200, 1.5));
  EXPECT_EQ(rep.located, 200);
  EXPECT_EQ(rep.agreements, 200);
  EXPECT_EQ(rep.double_memberships, 0);
  PolyContinuum oct = PolyContinuum::polygon(fixture::random_star(rng, 8));
  rep = partition_check(oct, outside_samples(rng, oct, 500, 1.0));
  EXPECT_EQ(rep.located, 500);
  EXPECT_EQ(rep.agreements, 500);
  EXPECT_EQ(rep.double_memberships, 0);
}

// Polylines of two arcs meeting at a common endpoint may cross next to it; drop those pieces.
std::vector<Point> trimmed(const KPChord& c, const KPChord& other) {
  std::vector<Point> v = c.curve.vertices;
  auto shared = [&](Point x) { return dist(x, other.a) < 1e-9 || dist(x, other.b) < 1e-9; };
  if (v.size() > 8 && shared(v.back())) v.resize(v.size() - 3);
  if (v.size() > 8 && shared(v.front())) v.erase(v.begin(), v.begin() + 3);
  return v;
}

TEST(KpProperties, SampledChordsDoNotCross) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 3; ++t) {
    PolyContinuum K = PolyContinuum::polygon(fixture::random_star(rng, 6));
    std::vector<KPChord> chords;
    for (const auto& m : maximal_balls(K, 12)) {
      try {
        for (const auto& ch : kp_element(m, K).chords) chords.push_back(ch);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnboundedGeodesic);
      }
    }
    ASSERT_GT(chords.size(), 20u);
    for (std::size_t i = 0; i < chords.size(); ++i)
      for (std::size_t j = i + 1; j < chords.size(); ++j)
        EXPECT_EQ(oracle::crossing_count(trimmed(chords[i], chords[j]), trimmed(chords[j], chords[i])), 0)
            << t << " " << i << " " << j;
  }
}

TEST(KpProperties, ChordLimitIsAChord) {
  std::mt19937_64 rng(9);
  PolyContinuum K = PolyContinuum::polygon(fixture::random_convex(rng, 7));
  int checked = 0;
  for (const auto& f : two_contact_families(K)) {
    if (f.type != TwoContactFamily::Type::vertex_vertex_exterior) continue;
    auto valid = [&](double s) {
      auto B = f.at(s);
      return B && empty_interior(*B, K, 1e-9);
    };
    // last valid sample before an invalid one, then the boundary by bisection
    const int n = 400;
    for (int k = 0; k + 1 < n; ++k) {
      double s0 = -1 + 2.0 * (k + 0.5) / n, s1 = -1 + 2.0 * (k + 1.5) / n;
      if (!valid(s0) || valid(s1)) continue;
      double good = s0, bad = s1;
      for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (good + bad);
        (valid(m) ? good : bad) = m;
      }
      GeneralizedBall limit = *f.at(good);
      auto contacts = contact_points(limit, K);
      EXPECT_GE(contacts.size(), 3u);
      PolyCurve lim = hyperbolic_geodesic(limit, f.u, f.v, 256);
      double prev = 1e9;
      for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
        double s = good - h * (good - s0);
        PolyCurve ch = hyperbolic_geodesic(*f.at(s), f.u, f.v, 64);
        double d = 0;
        for (Point q : ch.vertices) d = std::max(d, lim.distance(q));
        EXPECT_LE(d, prev + 1e-12);
        prev = d;
      }
      EXPECT_LT(prev, 1e-3);
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(KpProperties, SmallestBallCentreInContactHull) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0, 1);
  for (int t = 0; t < 200; ++t) {
    std::vector<Point> pts;
    int n = 3 + t % 30;
    for (int k = 0; k < n; ++k) pts.push_back({g(rng), g(rng)});
    GeneralizedBall D = smallest_enclosing_ball(pts);
    auto ref = oracle::brute_force_mec(pts);
    EXPECT_NEAR(D.radius, ref.r, 1e-9);
    std::vector<double> ang;
    for (Point p : pts)
      if (std::abs(dist(p, D.center) - D.radius) < 1e-9 * D.radius) ang.push_back(std::atan2(p.y - D.center.y, p.x - D.center.x));
    std::sort(ang.begin(), ang.end());
    ASSERT_GE(ang.size(), 2u);
    double widest = ang.front() + 2 * kPi - ang.back();
    for (std::size_t i = 0; i + 1 < ang.size(); ++i) widest = std::max(widest, ang[i + 1] - ang[i]);
    EXPECT_LE(widest, kPi + 1e-7);
  }
}
