#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "planefix/dendrite.hpp"
#include "planefix/error.hpp"
#include "planefix/lam.hpp"
#include "support/trees.hpp"

using namespace planefix::dendrite;
using planefix::Errc;
using planefix::Error;
using namespace fixture;

namespace {

std::vector<TreePoint> sample_points(const TreeMap& f) {
  std::vector<TreePoint> pts;
  for (int e : f.domain.edges)
    for (int k = 0; k <= 8; ++k) pts.push_back(TreePoint::on_edge(f.tree, e, R(k, 8)));
  return pts;
}

}  // namespace

TEST(Dendrite, Validation) {
  Dendrite cyc{3, {{0, 1, R(1)}, {1, 2, R(1)}}};
  EXPECT_NO_THROW(cyc.validate());
  Dendrite bad{3, {{0, 1, R(1)}, {1, 0, R(1)}}};
  EXPECT_THROW(bad.validate(), Error);
  Dendrite zero{2, {{0, 1, R(0)}}};
  EXPECT_THROW(zero.validate(), Error);
  EXPECT_EQ(star(3).valence(0), 3);
}

TEST(Dendrite, GeodesicDistance) {
  Dendrite S = star(3);
  auto p = TreePoint::on_edge(S, 1, R(1, 2)), q = TreePoint::on_edge(S, 2, R(3, 4));
  EXPECT_EQ(distance(S, p, q), R(5, 4));
  auto geo = geodesic(S, p, q);
  ASSERT_EQ(geo.size(), 2u);
  EXPECT_EQ(geo[0].edge, 1);
  EXPECT_EQ(geo[0].t1, R(0));
  EXPECT_TRUE(separates(S, TreePoint::at_vertex(0), p, q));
  EXPECT_FALSE(separates(S, TreePoint::at_vertex(3), p, q));
}

TEST(BoundarySet, Examples) {
  Subtree D1{{0}};
  EXPECT_EQ(boundary_set(D02, D1), std::vector<int>{1});
  Dendrite S = star(4);
  EXPECT_EQ(boundary_set(S, Subtree{{0, 1, 2}}), std::vector<int>{0});
  EXPECT_TRUE(boundary_set(S, whole(S)).empty());
  EXPECT_THROW(boundary_set(path({R(1), R(1), R(1)}), Subtree{{0, 2}}), Error);
  try {
    boundary_set(path({R(1), R(1), R(1)}), Subtree{{0, 2}});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotSubtree);
  }
}

TEST(Retraction, Examples) {
  auto r = natural_retraction(D02, Subtree{{0}});
  EXPECT_EQ(r(at(D02, R(17, 10))), TreePoint::at_vertex(1));
  EXPECT_EQ(r(at(D02, R(1, 3))), at(D02, R(1, 3)));
  Dendrite Y = star(3);
  auto ry = natural_retraction(Y, Subtree{{0}});
  EXPECT_EQ(ry(TreePoint::on_edge(Y, 1, R(1, 2))), TreePoint::at_vertex(0));
  EXPECT_EQ(ry(TreePoint::at_vertex(3)), TreePoint::at_vertex(0));
}

TEST(Retraction, IdempotentAndIdentityOnSubtree) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    auto c = random_case(rng, false);
    auto r = natural_retraction(c.D2, c.D1);
    auto rr = compose(r, r);
    for (int e = 0; e < static_cast<int>(c.D2.edges.size()); ++e)
      for (int k = 0; k <= 8; ++k) {
        auto p = TreePoint::on_edge(c.D2, e, R(k, 8));
        EXPECT_EQ(rr(p), r(p));
        EXPECT_TRUE(c.D1.contains(c.D2, r(p)));
        if (c.D1.contains(c.D2, p)) EXPECT_EQ(r(p), p);
        // [x, r(x)] meets D1 only at r(x)
        for (const auto& pc : geodesic(c.D2, p, r(p))) EXPECT_FALSE(c.D1.has_edge(pc.edge));
      }
  }
}

TEST(RetractedMap, Examples) {
  auto g = retracted_map(shift());
  for (int k = 0; k <= 12; ++k) {
    Rational x = R(k, 12);
    EXPECT_EQ(coord(D02, g(at(D02, x))), std::min(x + R(1, 2), R(1)));
  }
  auto fl = flip();
  auto gf = retracted_map(fl);
  for (const auto& p : sample_points(fl)) EXPECT_EQ(gf(p), fl(p));
  auto collapse = interval_map(D02, 1, {{R(0), R(3, 2)}, {R(1), R(3, 2)}});
  auto gc = retracted_map(collapse);
  for (const auto& p : sample_points(collapse)) EXPECT_EQ(gc(p), TreePoint::at_vertex(1));
}

TEST(Scrambling, Examples) {
  EXPECT_TRUE(check_scrambling(flip()).scrambles);
  auto v = check_scrambling(shift());
  EXPECT_FALSE(v.scrambles);
  ASSERT_TRUE(v.violating.has_value());
  EXPECT_EQ(*v.violating, 1);
  Dendrite S = star(3);
  auto inv = TreeMap::from_knots(S, whole(S),
                                 {{{R(0), TreePoint::at_vertex(0)}, {R(1), TreePoint::at_vertex(2)}},
                                  {{R(0), TreePoint::at_vertex(0)}, {R(1), TreePoint::at_vertex(3)}},
                                  {{R(0), TreePoint::at_vertex(0)}, {R(1), TreePoint::at_vertex(1)}}});
  EXPECT_TRUE(check_scrambling(inv).scrambles);
}

TEST(FixedPoint, Examples) {
  auto r = find_fixed_point(flip());
  ASSERT_TRUE(r.point.has_value());
  EXPECT_EQ(coord(D02, *r.point), R(1, 2));
  EXPECT_TRUE(r.scrambles);
  auto s = find_fixed_point(shift());
  EXPECT_FALSE(s.point.has_value());
  EXPECT_TRUE(s.certified_none);
  EXPECT_FALSE(s.scrambles);
}

TEST(FixedPoint, ScramblingGivesExactFixedPoint) {
  std::mt19937_64 rng(2024);
  int scrambling = 0, none = 0;
  for (int trial = 0; scrambling < 150 && trial < 5000; ++trial) {
    auto c = random_case(rng, false);
    auto res = find_fixed_point(c.f);
    EXPECT_EQ(res.scrambles, check_scrambling(c.f).scrambles);
    if (res.scrambles) {
      ++scrambling;
      ASSERT_TRUE(res.point.has_value());
      EXPECT_EQ(c.f(*res.point), *res.point);
    }
    if (res.certified_none) {
      ++none;
      EXPECT_FALSE(res.scrambles);
      // no sample point is fixed either
      for (const auto& p : sample_points(c.f)) EXPECT_NE(c.f(p), p);
    }
    for (const auto& p : fixed_points(c.f)) EXPECT_EQ(c.f(p), p);
  }
  EXPECT_GE(scrambling, 100);
  EXPECT_GT(none, 0);
}

TEST(FixedPoint, RetractedMapAlwaysHasFixedPoint) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = random_case(rng, trial % 2 == 0);
    auto g = retracted_map(c.f);
    for (const auto& p : sample_points(g)) EXPECT_TRUE(c.D1.contains(c.D2, g(p)));
    EXPECT_TRUE(check_scrambling(g).scrambles);
    auto fps = fixed_points(g);
    ASSERT_FALSE(fps.empty());
    for (const auto& p : fps) EXPECT_EQ(g(p), p);
  }
}

TEST(FixedPoint, BetweenSeparatedPointsMatchesIvtOracle) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; checked < 100 && trial < 20000; ++trial) {
    int m = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<Rational> lens;
    for (int i = 0; i < m; ++i) lens.push_back(R(std::uniform_int_distribution<int>(1, 3)(rng)));
    Dendrite D = path(lens);
    Rational L(0);
    for (auto l : lens) L += l;
    int nb = std::uniform_int_distribution<int>(2, 6)(rng);
    std::vector<std::pair<Rational, Rational>> pts;
    for (int k = 0; k <= nb; ++k)
      pts.push_back({L * R(k, nb), L * R(std::uniform_int_distribution<int>(0, 12)(rng), 12)});
    auto f = interval_map(D, m, pts);
    Rational a = L * R(std::uniform_int_distribution<int>(0, 12)(rng), 12);
    Rational b = L * R(std::uniform_int_distribution<int>(0, 12)(rng), 12);
    if (!(a < b)) continue;
    auto y = [&](Rational x) {
      for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        if (pts[k].first <= x && x <= pts[k + 1].first)
          return pts[k].second + (pts[k + 1].second - pts[k].second) * (x - pts[k].first) /
                                     (pts[k + 1].first - pts[k].first);
      throw std::logic_error("outside");
    };
    // a separates f(a) from b and b separates f(b) from a
    if (!(y(a) < a && y(b) > b)) continue;
    ++checked;
    // IVT per cell on h(x) = f(x) - x
    std::vector<Rational> knots{a, b};
    for (auto& p : pts)
      if (a < p.first && p.first < b) knots.push_back(p.first);
    std::sort(knots.begin(), knots.end());
    std::optional<Rational> root;
    for (std::size_t k = 0; k + 1 < knots.size() && !root; ++k) {
      Rational h0 = y(knots[k]) - knots[k], h1 = y(knots[k + 1]) - knots[k + 1];
      if (h0 <= Rational(0) && h1 >= Rational(0) && h0 != h1) root = knots[k] - h0 * (knots[k + 1] - knots[k]) / (h1 - h0);
      if (h1 == Rational(0)) root = knots[k + 1];
    }
    ASSERT_TRUE(root.has_value());
    EXPECT_TRUE(a < *root && *root < b);
    auto p = fixed_point_between(f, at(D, a), at(D, b));
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(f(*p), *p);
    Rational x = coord(D, *p);
    EXPECT_TRUE(a < x && x < b);
    EXPECT_EQ(y(x), x);
    EXPECT_GE(point_valence(D, *p), 2);
  }
  EXPECT_EQ(checked, 100);
}

TEST(WeaklyRepelling, Examples) {
  auto f = doubling();
  auto a = TreePoint::at_vertex(0);
  auto rep = weakly_repelling(f, a, {0, true});
  EXPECT_TRUE(rep.weakly_repelling);
  EXPECT_EQ(rep.kind, WeakRepulsionReport::Witness::separating);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_EQ(coord(D02, *rep.witness), R(1, 4));
  EXPECT_EQ(coord(D02, f(*rep.witness)), R(1, 2));
  EXPECT_TRUE(separates(D02, *rep.witness, a, f(*rep.witness)));

  auto g2 = iterate(retracted_map(f), 2);
  auto rep2 = weakly_repelling(g2, a, {0, true});
  ASSERT_TRUE(rep2.witness.has_value());
  EXPECT_EQ(coord(D02, *rep2.witness), R(1, 8));

  auto half = interval_map(D02, 1, {{R(0), R(0)}, {R(1), R(1, 2)}});
  EXPECT_FALSE(weakly_repelling(half, a, {0, true}).weakly_repelling);
  EXPECT_THROW(weakly_repelling(f, TreePoint::on_edge(D02, 0, R(1, 3)), {0, true}), Error);
}

TEST(WeaklyRepelling, FixedCutpointsWitness) {
  auto id = interval_map(D02, 1, {{R(0), R(0)}, {R(1), R(1)}});
  auto rep = weakly_repelling(id, TreePoint::at_vertex(0), {0, true});
  EXPECT_TRUE(rep.weakly_repelling);
  EXPECT_EQ(rep.kind, WeakRepulsionReport::Witness::fixed_cutpoints);
}

TEST(WeaklyRepelling, PowerStableOnFixtures) {
  struct Fx {
    TreeMap f;
    TreePoint a;
    Branch B;
  };
  auto t = tent();
  Dendrite P = path({R(1)});
  std::vector<Fx> fixtures{
      {doubling(), TreePoint::at_vertex(0), {0, true}},
      {t, TreePoint::at_vertex(0), {0, true}},
      {t, TreePoint::on_edge(P, 0, R(2, 3)), {0, true}},
      {t, TreePoint::on_edge(P, 0, R(2, 3)), {0, false}},
      {interval_map(D02, 1, {{R(0), R(0)}, {R(1), R(1)}}), TreePoint::at_vertex(0), {0, true}},
      {flip(), TreePoint::on_edge(D02, 0, R(1, 2)), {0, true}},
      {interval_map(D02, 1, {{R(0), R(0)}, {R(1), R(1, 2)}}), TreePoint::at_vertex(0), {0, true}},
  };
  int repelling = 0;
  for (const auto& fx : fixtures) {
    auto rep = weakly_repelling(fx.f, fx.a, fx.B);
    ASSERT_EQ(rep.power_stable.size(), 6u);
    EXPECT_EQ(rep.power_stable[0], rep.weakly_repelling);
    if (rep.weakly_repelling) {
      ++repelling;
      for (bool b : rep.power_stable) EXPECT_TRUE(b);
    }
  }
  // the tent map reverses orientation at 2/3, so neither branch there is invariant
  EXPECT_EQ(repelling, 3);
}

TEST(PeriodicCutpoints, Tent) {
  Dendrite P = path({R(1)});
  auto per = periodic_cutpoints(tent(), 2);
  std::map<Rational, int> got;
  for (const auto& p : per) got[coord(P, p.point)] = p.period;
  std::map<Rational, int> want{{R(2, 3), 1}, {R(2, 5), 2}, {R(4, 5), 2}};
  EXPECT_EQ(got, want);
}

TEST(PeriodicCutpoints, Identity) {
  Dendrite D{6, {{0, 1, R(1)}, {1, 2, R(1)}, {1, 3, R(2)}, {3, 4, R(1)}, {3, 5, R(1)}}};
  std::vector<std::vector<Knot>> knots;
  for (const auto& e : D.edges) knots.push_back({{R(0), TreePoint::at_vertex(e.u)}, {R(1), TreePoint::at_vertex(e.v)}});
  auto per = periodic_cutpoints(TreeMap::from_knots(D, whole(D), knots), 1);
  std::set<int> got;
  for (const auto& p : per) {
    ASSERT_GE(p.point.vertex, 0);
    got.insert(p.point.vertex);
  }
  EXPECT_EQ(got, (std::set<int>{1, 3}));
}

TEST(PeriodicCutpoints, Guards) {
  EXPECT_THROW(periodic_cutpoints(flip(), 2), Error);
  try {
    periodic_cutpoints(tent(), 40, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CellBudgetExceeded);
  }
}

TEST(PeriodicCutpoints, AgreesWithLaminationQuotient) {
  using planefix::lam::FiniteLamination;
  auto C = [](std::initializer_list<std::pair<long long, long long>> a) {
    planefix::lam::Class c;
    for (auto [p, q] : a) c.push_back(planefix::lam::angle(p, q));
    return planefix::lam::normalize(c);
  };
  FiniteLamination rabbit{2, {C({{1, 7}, {2, 7}}), C({{2, 7}, {4, 7}}), C({{4, 7}, {1, 7}})}};
  for (const auto& L : {planefix::lam::refine(rabbit, 2), planefix::lam::refine({2, {C({{1, 3}, {2, 3}})}}, 3)}) {
    auto T = planefix::lam::quotient_tree(L);
    Dendrite D;
    D.vertex_count = static_cast<int>(T.vertices.size());
    std::vector<std::vector<Knot>> knots;
    for (auto [u, w] : T.edges) {
      D.edges.push_back({u, w, R(1)});
      knots.push_back({{R(0), TreePoint::at_vertex(T.induced[u])}, {R(1), TreePoint::at_vertex(T.induced[w])}});
    }
    auto f = TreeMap::from_knots(D, whole(D), knots);
    std::map<int, int> from_tree, from_lam;
    for (const auto& p : periodic_cutpoints(f, 3))
      if (p.point.vertex >= 0) from_tree[p.point.vertex] = p.period;
    for (const auto& p : planefix::lam::periodic_cutpoints(T, 3)) from_lam[p.vertex] = p.period;
    EXPECT_EQ(from_tree, from_lam);
    EXPECT_FALSE(from_tree.empty());
  }
}
