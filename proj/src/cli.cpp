#include "planefix/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "planefix/dendrite.hpp"
#include "planefix/error.hpp"
#include "planefix/index_var.hpp"
#include "planefix/kp.hpp"
#include "planefix/lam.hpp"
#include "planefix/polydyn.hpp"
#include "planefix/schoenflies.hpp"
#include "planefix/svg.hpp"

namespace planefix::cli {

namespace {

using json = nlohmann::ordered_json;
using Rational = boost::rational<long long>;

struct Options {
  std::string input, map, out, svg, point, angle;
  int samples = -1, budget = -1, depth = -1;
  double tol = -1.0;
  std::uint64_t seed = 0;
};

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidInput, what); }

json load(const std::string& path, const char* flag) {
  if (path.empty()) bad(std::string("missing ") + flag);
  std::ifstream f(path);
  if (!f) bad("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j) {
  if (!j.is_number()) bad("expected a number");
  return j.get<double>();
}

Point point_of(const json& j) {
  if (!j.is_array() || j.size() != 2) bad("expected a point [x, y]");
  return {number(j[0]), number(j[1])};
}

std::vector<Point> points_of(const json& j) {
  if (!j.is_array()) bad("expected a list of points");
  std::vector<Point> out;
  for (const auto& p : j) out.push_back(point_of(p));
  return out;
}

cplx complex_of(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  Point p = point_of(j);
  return {p.x, p.y};
}

Point parse_point(const std::string& s) {
  std::istringstream in(s);
  double x, y;
  char comma;
  if (!(in >> x >> comma >> y) || comma != ',') bad("bad point '" + s + "', expected x,y");
  return {x, y};
}

Rational rational_of(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) bad("expected a fraction string");
  std::string s = j.get<std::string>();
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    bad("bad fraction '" + s + "'");
  }
}

std::string frac(Rational r) { return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator()); }

json out_point(Point p) { return json::array({p.x + 0.0, p.y + 0.0}); }

json out_points(const std::vector<Point>& v) {
  json a = json::array();
  for (Point p : v) a.push_back(out_point(p));
  return a;
}

PolyContinuum continuum_of(const json& j) {
  if (j.contains("polygon")) return PolyContinuum::polygon(points_of(j.at("polygon")));
  if (j.contains("segment")) {
    auto s = points_of(j.at("segment"));
    if (s.size() != 2) bad("a segment has two endpoints");
    return PolyContinuum::segment(s[0], s[1]);
  }
  if (j.contains("tree")) {
    const json& t = j.at("tree");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : field(t, "edges")) {
      if (!e.is_array() || e.size() != 2) bad("tree edges are [i, j] pairs");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return PolyContinuum::tree(points_of(field(t, "nodes")), edges);
  }
  if (j.contains("union")) {
    std::vector<PolyContinuum> parts;
    for (const auto& p : j.at("union")) parts.push_back(continuum_of(p));
    return PolyContinuum::disjoint_union(std::move(parts));
  }
  bad("continuum needs one of polygon, segment, tree, union");
}

PolyContinuum continuum_in(const json& doc) {
  return doc.contains("continuum") ? continuum_of(doc.at("continuum")) : continuum_of(doc);
}

polydyn::Polynomial polynomial_of(const json& j) {
  const json& c = j.contains("polynomial") ? field(j.at("polynomial"), "coeffs") : field(j, "coeffs");
  polydyn::Polynomial P;
  for (const auto& z : c) P.coeffs.push_back(complex_of(z));
  P.validate();
  return P;
}

PlaneMap map_of(const json& j) {
  if (j.contains("affine")) {
    const json& a = j.at("affine");
    if (!a.is_array() || a.size() != 6) bad("affine map is [a11, a12, a21, a22, tx, ty]");
    return PlaneMap::affine(number(a[0]), number(a[1]), number(a[2]), number(a[3]), {number(a[4]), number(a[5])});
  }
  if (j.contains("mobius")) {
    const json& m = j.at("mobius");
    if (!m.is_array() || m.size() != 4) bad("mobius map is [a, b, c, d]");
    return PlaneMap::mobius(complex_of(m[0]), complex_of(m[1]), complex_of(m[2]), complex_of(m[3]));
  }
  return polynomial_of(j).as_map();
}

PolyCurve curve_in(const json& doc) {
  PolyCurve S(points_of(field(doc, "curve")), true);
  S.validate();
  return counterclockwise(S);
}

ArcPartition partition_in(const json& doc) {
  ArcPartition P;
  P.curve = curve_in(doc);
  P.cuts = doc.contains("cuts") ? points_of(doc.at("cuts")) : P.curve.vertices;
  P.validate();
  return P;
}

json ball_json(const GeneralizedBall& B) {
  json j;
  switch (B.kind) {
    case GeneralizedBall::Kind::disk:
      j["kind"] = "disk";
      j["center"] = out_point(B.center);
      j["radius"] = B.radius;
      break;
    case GeneralizedBall::Kind::exterior_disk:
      j["kind"] = "exterior_disk";
      j["center"] = out_point(B.center);
      j["radius"] = B.radius;
      break;
    case GeneralizedBall::Kind::half_plane:
      j["kind"] = "half_plane";
      j["point"] = out_point(B.line_point);
      j["normal"] = out_point(B.normal);
      break;
  }
  return j;
}

json chord_json(const kp::KPChord& c) {
  json j;
  j["a"] = out_point(c.a);
  j["b"] = out_point(c.b);
  const auto& v = c.curve.vertices;
  std::optional<Circle> cc;
  if (v.size() >= 3) cc = circumcircle(v.front(), v[v.size() / 2], v.back());
  if (cc && cc->radius < 1e8 * std::max(1.0, dist(c.a, c.b))) {
    j["carrier"] = {{"center", out_point(cc->center)}, {"radius", cc->radius}};
  } else {
    j["carrier"] = {{"line", out_points({c.a, c.b})}};
  }
  j["gap_at_infinity"] = c.gap_at_infinity;
  return j;
}

const char* element_name(const kp::KPElement& e) {
  if (!e.is_gap) return "chord";
  if (e.ball.ball.kind == GeneralizedBall::Kind::half_plane && e.chords.size() == 1) return "semi-disk";
  return "gap";
}

json element_json(const kp::KPElement& e) {
  json j;
  j["element"] = element_name(e);
  j["ball"] = ball_json(e.ball.ball);
  j["contacts"] = out_points(e.ball.contacts);
  json ch = json::array();
  for (const auto& c : e.chords) ch.push_back(chord_json(c));
  j["chords"] = ch;
  j["is_gap"] = e.is_gap;
  return j;
}

void draw_ball(svg::Canvas& cv, const GeneralizedBall& B, svg::Color c) {
  if (B.kind == GeneralizedBall::Kind::half_plane)
    cv.half_plane(B.line_point, B.normal, c);
  else
    cv.circle(B.center, B.radius, c);
}

void draw_continuum(svg::Canvas& cv, const PolyContinuum& K) {
  if (K.kind == PolyContinuum::Kind::polygon) {
    cv.polygon(K.boundary.vertices, svg::Color::boundary, svg::Color::boundary, 0.15);
    return;
  }
  for (const Segment& s : K.segments()) cv.polyline({s.a, s.b}, svg::Color::boundary, false, 2.0);
}

void emit(const Options& o, const json& j) {
  std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) bad("cannot write " + o.out);
  f << text;
}

int opt_or(int v, int fallback) { return v >= 0 ? v : fallback; }

// ---- plane maps on curves

void cmd_index(const Options& o) {
  PolyCurve S = curve_in(load(o.input, "--input"));
  PlaneMap f = map_of(load(o.map, "--map"));
  emit(o, {{"index", index(S, f)}});
}

void draw_partition(const Options& o, const ArcPartition& P, const PlaneMap& f) {
  if (o.svg.empty()) return;
  std::vector<Point> img = image_path(P.curve.vertices, f);
  Box b = Box::of(P.curve.vertices);
  for (Point p : img) b.include(p);
  svg::Canvas cv(b);
  cv.polyline(P.curve.vertices, svg::Color::boundary, true, 2.0);
  cv.polyline(img, svg::Color::image, true);
  for (Point c : P.cuts) cv.dot(c, svg::Color::accent);
  cv.save(o.svg);
}

void cmd_variation(const Options& o, bool summary) {
  ArcPartition P = partition_in(load(o.input, "--input"));
  PlaneMap f = map_of(load(o.map, "--map"));
  VariationReport r = variation_total(P, f, o.seed);
  json j;
  j["index"] = r.index;
  j["variation"] = r.total;
  if (!summary) j["per_arc"] = r.per_arc;
  j["identity"] = r.identity_holds;
  emit(o, j);
  draw_partition(o, P, f);
}

void cmd_lollipop(const Options& o) {
  json doc = load(o.input, "--input");
  ArcPartition P = partition_in(doc);
  PolyCurve I(points_of(field(doc, "arc")), false);
  auto split = field(doc, "split").get<std::size_t>();
  PlaneMap f = map_of(load(o.map, "--map"));
  LollipopReport r = lollipop_check(P, split, I, f, o.seed);
  emit(o, {{"image_in_right", r.image_in_right},
           {"per_arc", r.per_arc},
           {"variation", r.variation_sum},
           {"lhs", r.lhs},
           {"rhs", r.rhs},
           {"holds", r.holds}});
}

void cmd_fixed_points(const Options& o) {
  json doc = load(o.input, "--input");
  auto corners = points_of(field(doc, "box"));
  if (corners.size() != 2) bad("box is [[x0, y0], [x1, y1]]");
  Box region = Box::of(corners);
  PlaneMap f = map_of(load(o.map, "--map"));
  auto found = locate_fixed_points(region, f, opt_or(o.depth, 8), o.seed);
  json list = json::array();
  int total = 0;
  for (const auto& e : found) {
    list.push_back({{"center", out_point(e.center)},
                    {"box", out_points({e.box.lo, e.box.hi})},
                    {"index", e.index}});
    total += e.index;
  }
  emit(o, {{"fixed_points", list}, {"total_index", total}, {"box_index", box_index(region, f)}});
}

// ---- Kulkarni-Pinkall

void cmd_kp_balls(const Options& o) {
  PolyContinuum K = continuum_in(load(o.input, "--input"));
  auto balls = kp::maximal_balls(K, opt_or(o.budget, 0));
  json list = json::array();
  for (const auto& m : balls) {
    json b = ball_json(m.ball);
    b["contacts"] = out_points(m.contacts);
    b["sampled"] = m.sampled;
    list.push_back(b);
  }
  emit(o, {{"balls", list}});
  if (!o.svg.empty()) {
    Box bx = K.bbox().expanded(3.0);
    svg::Canvas cv(bx);
    draw_continuum(cv, K);
    for (const auto& m : balls) draw_ball(cv, m.ball, m.sampled ? svg::Color::ball : svg::Color::accent);
    cv.save(o.svg);
  }
}

void draw_element(svg::Canvas& cv, const kp::KPElement& e) {
  draw_ball(cv, e.ball.ball, svg::Color::ball);
  for (const auto& c : e.chords) cv.polyline(c.curve.vertices, svg::Color::chord, false, 1.5);
}

void cmd_kp_locate(const Options& o) {
  PolyContinuum K = continuum_in(load(o.input, "--input"));
  if (o.point.empty()) bad("missing --point");
  Point p = parse_point(o.point);
  kp::KPElement e = kp::kp_locate(p, K);
  json j = element_json(e);
  j["point"] = out_point(p);
  j["inverted_radius"] = kp::inverted_radius(e.ball.ball, p);
  emit(o, j);
  if (!o.svg.empty()) {
    Box bx = K.bbox();
    bx.include(p);
    svg::Canvas cv(bx.expanded(2.0));
    draw_continuum(cv, K);
    draw_element(cv, e);
    cv.dot(p, svg::Color::ink);
    cv.save(o.svg);
  }
}

void cmd_kp_partition(const Options& o) {
  PolyContinuum K = continuum_in(load(o.input, "--input"));
  std::mt19937_64 rng(o.seed);
  Box b = K.bbox().expanded(2.0);
  std::uniform_real_distribution<double> ux(b.lo.x, b.hi.x), uy(b.lo.y, b.hi.y);
  std::vector<Point> pts;
  int want = opt_or(o.samples, 200);
  while (static_cast<int>(pts.size()) < want) {
    Point p{ux(rng), uy(rng)};
    if (!K.hull_contains(p, 1e-6)) pts.push_back(p);
  }
  kp::PartitionReport r = kp::partition_check(K, pts);
  emit(o, {{"samples", r.samples},
           {"located", r.located},
           {"agreements", r.agreements},
           {"double_memberships", r.double_memberships},
           {"max_gap", r.max_gap},
           {"disagreements", out_points(r.disagreements)}});
  if (!o.svg.empty()) {
    svg::Canvas cv(b);
    draw_continuum(cv, K);
    for (const auto& m : kp::maximal_balls(K, opt_or(o.budget, 16))) {
      try {
        kp::KPElement e = kp::kp_element(m, K);
        for (const auto& c : e.chords) cv.polyline(c.curve.vertices, e.is_gap ? svg::Color::chord : svg::Color::ball);
      } catch (const Error& e) {
        if (e.code() != Errc::UnboundedGeodesic) throw;
      }
    }
    cv.save(o.svg);
  }
}

// ---- Schoenflies

void cmd_schoenflies(const Options& o) {
  json doc = load(o.input, "--input");
  auto S = points_of(field(doc, "source")), T = points_of(field(doc, "target"));
  std::vector<std::pair<Point, Point>> pairs;
  if (doc.contains("pairs")) {
    for (const auto& pr : doc.at("pairs")) {
      if (!pr.is_array() || pr.size() != 2) bad("pairs are [[x, y], [x', y']]");
      pairs.emplace_back(point_of(pr[0]), point_of(pr[1]));
    }
  } else {
    if (S.size() != T.size()) bad("without pairs, source and target need the same vertex count");
    for (std::size_t i = 0; i < S.size(); ++i) pairs.emplace_back(S[i], T[i]);
  }
  auto H = schoenflies::extend_homeomorphism(S, T, pairs, opt_or(o.budget, 256));
  auto rep = schoenflies::injectivity_probe(H, opt_or(o.samples, 10000));
  json gaps = json::array();
  for (const auto& g : H.lamination().gaps)
    gaps.push_back({{"center", out_point(g.ball.ball.center)},
                    {"radius", g.ball.ball.radius},
                    {"contacts", out_points(g.ball.contacts)},
                    {"barycenter", out_point(g.barycenter)}});
  json j;
  j["faces"] = H.faces().size();
  j["chords"] = H.source_chords().size();
  j["gaps"] = gaps;
  j["injectivity"] = {{"samples", rep.samples},
                      {"collisions", rep.collisions},
                      {"min_separation", rep.min_separation},
                      {"min_fan_area", rep.min_fan_area}};
  if (!o.point.empty()) {
    Point p = parse_point(o.point);
    j["point"] = out_point(p);
    j["image"] = out_point(H(p));
  }
  emit(o, j);
  if (!o.svg.empty()) {
    Box b = Box::of(H.lamination().polygon);
    svg::Canvas cv(b);
    cv.polygon(H.lamination().polygon, svg::Color::boundary, svg::Color::boundary, 0.1);
    for (const auto& c : H.lamination().chords)
      cv.polyline({c.a, c.b}, c.gap_side ? svg::Color::chord : svg::Color::ball);
    for (const auto& g : H.lamination().gaps) cv.dot(g.barycenter, svg::Color::accent);
    cv.save(o.svg);
  }
}

// ---- laminations

lam::Class class_of(const json& j) {
  lam::Class c;
  for (const auto& a : j) c.push_back(lam::parse_angle(a.is_string() ? a.get<std::string>() : a.dump()));
  return lam::normalize(c);
}

json class_json(const lam::Class& c) {
  json a = json::array();
  for (auto x : c) a.push_back(lam::to_string(x));
  return a;
}

lam::FiniteLamination lamination_of(const json& j) {
  lam::FiniteLamination L;
  L.degree = field(j, "degree").get<int>();
  for (const auto& c : field(j, "classes")) L.classes.push_back(class_of(c));
  return L;
}

json lamination_json(const lam::FiniteLamination& L) {
  json cls = json::array();
  for (const auto& c : L.classes) cls.push_back(class_json(c));
  return {{"degree", L.degree}, {"classes", cls}};
}

void draw_lamination(const Options& o, const lam::FiniteLamination& L) {
  if (o.svg.empty()) return;
  svg::Canvas cv({{-1, -1}, {1, 1}});
  cv.circle({0, 0}, 1.0, svg::Color::boundary, 1.5);
  auto at = [](lam::Rational a) {
    double t = 2.0 * kPi * boost::rational_cast<double>(a);
    return Point{std::cos(t), std::sin(t)};
  };
  for (const auto& c : L.classes) {
    std::vector<Point> v;
    for (auto a : c) v.push_back(at(a));
    if (v.size() == 2)
      cv.polyline(v, svg::Color::chord);
    else
      cv.polygon(v, svg::Color::chord, svg::Color::gap, 0.4);
  }
  cv.save(o.svg);
}

void cmd_lam_check(const Options& o) {
  auto L = lamination_of(load(o.input, "--input"));
  auto r = lam::check_invariant(L);
  emit(o, {{"ok", r.ok()},
           {"e1_finite_trivial", r.e1_finite_trivial},
           {"e2", r.e2},
           {"d1", r.d1},
           {"d2", r.d2},
           {"d3", r.d3},
           {"failures", r.failures}});
  draw_lamination(o, L);
}

void cmd_lam_refine(const Options& o) {
  auto L = lam::refine(lamination_of(load(o.input, "--input")), opt_or(o.depth, 1));
  emit(o, lamination_json(L));
  draw_lamination(o, L);
}

void cmd_lam_quotient(const Options& o) {
  auto L = lamination_of(load(o.input, "--input"));
  auto T = lam::quotient_tree(L);
  json verts = json::array();
  for (const auto& v : T.vertices) {
    if (v.kind == lam::QuotientTree::Kind::cls) {
      verts.push_back({{"kind", "class"}, {"class", class_json(v.cls)}});
    } else {
      json arcs = json::array();
      for (auto [a, b] : v.arcs) arcs.push_back(json::array({lam::to_string(a), lam::to_string(b)}));
      verts.push_back({{"kind", "region"}, {"arcs", arcs}});
    }
  }
  json edges = json::array();
  for (auto [a, b] : T.edges) edges.push_back(json::array({a, b}));
  emit(o, {{"vertices", verts}, {"edges", edges}, {"induced", T.induced}});
  draw_lamination(o, L);
}

void cmd_lam_periodic(const Options& o) {
  json doc = load(o.input, "--input");
  int d = field(doc, "degree").get<int>();
  std::vector<lam::Class> chords;
  for (const auto& c : doc.contains("chords") ? doc.at("chords") : field(doc, "classes")) {
    lam::Class k = class_of(c);
    for (std::size_t i = 0; i < k.size() && k.size() > 2; ++i) chords.push_back(lam::normalize({k[i], k[(i + 1) % k.size()]}));
    if (k.size() == 2) chords.push_back(k);
  }
  auto r = lam::find_periodic_leaf(chords, d);
  emit(o, {{"leaf", class_json(r.leaf)}, {"period", r.period}});
}

// ---- dendrites

dendrite::TreePoint tree_point_of(const dendrite::Dendrite& D, const json& j) {
  if (j.contains("vertex")) return dendrite::TreePoint::at_vertex(j.at("vertex").get<int>());
  int e = field(j, "edge").get<int>();
  if (e < 0 || e >= static_cast<int>(D.edges.size())) bad("edge index out of range");
  return dendrite::TreePoint::on_edge(D, e, rational_of(field(j, "t")));
}

json tree_point_json(const dendrite::TreePoint& p) {
  if (p.vertex >= 0) return {{"vertex", p.vertex}};
  return {{"edge", p.edge}, {"t", frac(p.t)}};
}

dendrite::TreeMap tree_map_of(const json& doc) {
  dendrite::Dendrite D;
  D.vertex_count = field(doc, "vertices").get<int>();
  for (const auto& e : field(doc, "edges")) {
    dendrite::Edge ed;
    ed.u = field(e, "u").get<int>();
    ed.v = field(e, "v").get<int>();
    if (e.contains("length")) ed.length = rational_of(e.at("length"));
    D.edges.push_back(ed);
  }
  D.validate();
  dendrite::Subtree S;
  if (doc.contains("domain"))
    S.edges = doc.at("domain").get<std::vector<int>>();
  else
    S = dendrite::whole(D);
  std::vector<std::vector<dendrite::Knot>> knots;
  for (const auto& list : field(doc, "map")) {
    std::vector<dendrite::Knot> ks;
    for (const auto& k : list) ks.push_back({rational_of(field(k, "s")), tree_point_of(D, field(k, "image"))});
    knots.push_back(std::move(ks));
  }
  return dendrite::TreeMap::from_knots(D, S, knots);
}

void cmd_dendrite_fix(const Options& o) {
  auto f = tree_map_of(load(o.input, "--input"));
  auto r = dendrite::find_fixed_point(f);
  json j;
  j["scrambles"] = r.scrambles;
  j["certified_none"] = r.certified_none;
  j["point"] = r.point ? tree_point_json(*r.point) : json(nullptr);
  json all = json::array();
  for (const auto& p : dendrite::fixed_points(f)) all.push_back(tree_point_json(p));
  j["fixed_points"] = all;
  emit(o, j);
}

void cmd_dendrite_scramble(const Options& o) {
  auto f = tree_map_of(load(o.input, "--input"));
  auto v = dendrite::check_scrambling(f);
  emit(o, {{"scrambles", v.scrambles}, {"violating", v.violating ? json(*v.violating) : json(nullptr)}});
}

void cmd_dendrite_cutpoints(const Options& o) {
  auto f = tree_map_of(load(o.input, "--input"));
  json list = json::array();
  for (const auto& p : dendrite::periodic_cutpoints(f, opt_or(o.depth, 3)))
    list.push_back({{"point", tree_point_json(p.point)}, {"period", p.period}});
  emit(o, {{"periodic_cutpoints", list}});
}

// ---- polynomials

void cmd_poly_fixed(const Options& o) {
  auto P = polynomial_of(load(o.map, "--map"));
  json list = json::array();
  for (const auto& r : polydyn::fixed_points(P))
    list.push_back({{"location", out_point(r.location)},
                    {"multiplier", json::array({r.multiplier.real(), r.multiplier.imag()})},
                    {"class", polydyn::class_name(r.cls)},
                    {"local_index", r.local_index},
                    {"cluster_size", r.cluster_size}});
  emit(o, {{"fixed_points", list}});
}

void cmd_poly_index(const Options& o) {
  PlaneMap f = map_of(load(o.map, "--map"));
  if (o.point.empty()) bad("missing --point");
  Point p = parse_point(o.point);
  emit(o, {{"point", out_point(p)}, {"local_index", polydyn::local_index(f, p)}});
}

void cmd_poly_argcheck(const Options& o) {
  PolyCurve S = curve_in(load(o.input, "--input"));
  PlaneMap f = map_of(load(o.map, "--map"));
  auto r = polydyn::argument_principle_check(f, S, opt_or(o.depth, 9));
  json loc = json::array();
  for (auto [p, k] : r.located) loc.push_back({{"point", out_point(p)}, {"local_index", k}});
  emit(o, {{"curve_index", r.curve_index}, {"located", loc}, {"sum", r.sum}, {"holds", r.holds}});
}

void cmd_poly_ray(const Options& o) {
  auto P = polynomial_of(load(o.map, "--map"));
  if (o.angle.empty()) bad("missing --angle");
  polydyn::RayOptions ro;
  ro.generations = opt_or(o.depth, ro.generations);
  auto ray = polydyn::trace_external_ray(P, lam::parse_angle(o.angle), ro);
  auto land = polydyn::landing_point(ray, o.tol > 0 ? o.tol : 1e-6);
  json j;
  j["angle"] = frac(ray.angle);
  j["trace"] = out_points(ray.trace);
  j["status"] = land.landed ? "landed" : "open";
  j["landing"] = land.landed ? out_point(land.point) : json(nullptr);
  j["tail_diameter"] = land.tail_diameter;
  j["generations"] = ray.generations;
  emit(o, j);
  if (!o.svg.empty()) {
    svg::Canvas cv(Box::of(ray.trace));
    cv.polyline(ray.trace, svg::Color::ray, false, 1.5);
    if (land.landed) cv.dot(land.point, svg::Color::accent);
    cv.save(o.svg);
  }
}

void cmd_poly_scramble(const Options& o) {
  json doc = load(o.input, "--input");
  polydyn::ScrambleConfig cfg;
  cfg.X = continuum_of(field(doc, "X"));
  if (doc.contains("Z"))
    for (const auto& z : doc.at("Z")) cfg.Z.push_back(continuum_of(z));
  if (doc.contains("K"))
    for (const auto& k : doc.at("K")) cfg.K.push_back(continuum_of(k));
  cfg.f = map_of(load(o.map, "--map"));
  auto r = polydyn::check_scrambling(cfg, opt_or(o.samples, 32), o.tol > 0 ? o.tol : 1e-7);
  emit(o, {{"verdict", polydyn::verdict_name(r.verdict)},
           {"clause", r.clause},
           {"witness", r.witness ? out_point(*r.witness) : json(nullptr)},
           {"component", r.component}});
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"planefix: plane fixed-point machinery"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--input", o.input, "input JSON");
  app.add_option("--map", o.map, "map JSON");
  app.add_option("--out", o.out, "write the JSON report here");
  app.add_option("--svg", o.svg, "write a figure here");
  app.add_option("--samples", o.samples, "sample count")->check(CLI::NonNegativeNumber);
  app.add_option("--budget", o.budget, "ball or chord budget")->check(CLI::NonNegativeNumber);
  app.add_option("--depth", o.depth, "depth, generations or refinement steps")->check(CLI::NonNegativeNumber);
  app.add_option("--tol", o.tol, "tolerance override")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "seed for randomized steps");
  app.add_option("--point", o.point, "query point x,y");
  app.add_option("--angle", o.angle, "angle p/q");

  std::function<void()> action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::function<void()> fn) {
    CLI::App* c = parent->add_subcommand(name, help);
    c->fallthrough();
    c->callback([&action, fn] { action = fn; });
    return c;
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    g->fallthrough();
    return g;
  };

  leaf(&app, "index", "index of a map on a closed curve", [&] { cmd_index(o); });
  leaf(&app, "variation", "variation on each arc of a partition", [&] { cmd_variation(o, false); });
  leaf(&app, "ivp1", "check index = variation + 1", [&] { cmd_variation(o, true); });
  leaf(&app, "lollipop", "lollipop identity", [&] { cmd_lollipop(o); });
  leaf(&app, "fixed-points", "fixed points in a box", [&] { cmd_fixed_points(o); });
  CLI::App* kp = group("kp", "maximal balls and their hulls");
  leaf(kp, "balls", "maximal balls", [&] { cmd_kp_balls(o); });
  leaf(kp, "locate", "element containing a point", [&] { cmd_kp_locate(o); });
  leaf(kp, "partition", "partition check on random points", [&] { cmd_kp_partition(o); });
  leaf(&app, "schoenflies", "extend a boundary map over the disk", [&] { cmd_schoenflies(o); });
  CLI::App* lm = group("lam", "invariant laminations");
  leaf(lm, "check", "invariance axioms", [&] { cmd_lam_check(o); });
  leaf(lm, "refine", "add pullback generations", [&] { cmd_lam_refine(o); });
  leaf(lm, "quotient", "quotient tree", [&] { cmd_lam_quotient(o); });
  leaf(lm, "periodic", "periodic leaf", [&] { cmd_lam_periodic(o); });
  CLI::App* dd = group("dendrite", "finite tree maps");
  leaf(dd, "fix", "fixed point", [&] { cmd_dendrite_fix(o); });
  leaf(dd, "scramble", "scrambling check", [&] { cmd_dendrite_scramble(o); });
  leaf(dd, "cutpoints", "periodic cutpoints", [&] { cmd_dendrite_cutpoints(o); });
  CLI::App* pd = group("poly", "polynomial dynamics");
  leaf(pd, "fixed", "fixed points and multipliers", [&] { cmd_poly_fixed(o); });
  leaf(pd, "index", "local index at a point", [&] { cmd_poly_index(o); });
  leaf(pd, "argcheck", "argument principle on a curve", [&] { cmd_poly_argcheck(o); });
  leaf(pd, "ray", "external ray", [&] { cmd_poly_ray(o); });
  leaf(pd, "scramble", "boundary scrambling", [&] { cmd_poly_scramble(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numerical(e.code()) ? 3 : 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace planefix::cli
