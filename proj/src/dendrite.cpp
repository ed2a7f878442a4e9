#include "planefix/dendrite.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "planefix/error.hpp"

namespace planefix::dendrite {

namespace {

std::optional<Rational> param_on(const Dendrite& D, const TreePoint& p, int e) {
  const Edge& E = D.edges[e];
  if (p.vertex >= 0) {
    if (p.vertex == E.u) return Rational(0);
    if (p.vertex == E.v) return Rational(1);
    return std::nullopt;
  }
  if (p.edge == e) return p.t;
  return std::nullopt;
}

Rational abs_r(Rational x) { return x < Rational(0) ? -x : x; }

std::vector<int> vertex_path(const Dendrite& D, const std::vector<std::vector<int>>& inc, int from, int to,
                             std::vector<int>* edges_out) {
  std::vector<int> parent(D.vertex_count, -2), via(D.vertex_count, -1);
  std::queue<int> q;
  q.push(from);
  parent[from] = -1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int e : inc[u]) {
      int w = D.edges[e].u == u ? D.edges[e].v : D.edges[e].u;
      if (parent[w] != -2) continue;
      parent[w] = u;
      via[w] = e;
      q.push(w);
    }
  }
  std::vector<int> path;
  edges_out->clear();
  for (int u = to; u != -1; u = parent[u]) {
    path.push_back(u);
    if (via[u] >= 0) edges_out->push_back(via[u]);
  }
  std::reverse(path.begin(), path.end());
  std::reverse(edges_out->begin(), edges_out->end());
  return path;
}

Rational piece_length(const Dendrite& D, const ArcPiece& p) { return abs_r(p.t1 - p.t0) * D.edges[p.edge].length; }

// Representation of p on an edge, preferring edges of `prefer`.
std::pair<int, Rational> represent(const Dendrite& D, const TreePoint& p, const Subtree* prefer) {
  if (p.vertex < 0) return {p.edge, p.t};
  int fallback = -1;
  for (int e = 0; e < static_cast<int>(D.edges.size()); ++e) {
    if (D.edges[e].u != p.vertex && D.edges[e].v != p.vertex) continue;
    if (!prefer || prefer->has_edge(e)) return {e, D.edges[e].u == p.vertex ? Rational(0) : Rational(1)};
    if (fallback < 0) fallback = e;
  }
  if (fallback < 0) throw Error(Errc::InvalidInput, "isolated vertex");
  return {fallback, D.edges[fallback].u == p.vertex ? Rational(0) : Rational(1)};
}

Cell constant_cell(int edge, Rational s0, Rational s1, std::pair<int, Rational> rep) {
  return {edge, s0, s1, rep.first, rep.second, Rational(0)};
}

std::vector<int> attachments(const Dendrite& D2, const Subtree& D1) {
  auto inc = D2.incident();
  std::vector<int> attach(D2.vertex_count, -1);
  std::queue<int> q;
  for (int v : D1.vertices(D2)) {
    attach[v] = v;
    q.push(v);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int e : inc[u]) {
      int w = D2.edges[e].u == u ? D2.edges[e].v : D2.edges[e].u;
      if (attach[w] >= 0) continue;
      attach[w] = attach[u];
      q.push(w);
    }
  }
  return attach;
}

int edge_attachment(const Dendrite& D2, const std::vector<int>& attach, const Subtree& D1, int e) {
  const Edge& E = D2.edges[e];
  bool u_in = false;
  for (int v : D1.vertices(D2)) u_in = u_in || v == E.u;
  return u_in ? E.u : attach[E.v];
}

std::vector<TreePoint> dedupe(std::vector<TreePoint> pts) {
  std::vector<TreePoint> out;
  for (const auto& p : pts)
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  return out;
}

// Fixed points of one cell, plus identity-cell endpoints.
void cell_fixed_points(const Dendrite& D, const Cell& c, std::vector<TreePoint>& out, bool* identity) {
  if (c.tedge != c.edge) return;
  if (c.b == Rational(1)) {
    if (c.a == Rational(0)) {
      *identity = true;
      out.push_back(TreePoint::on_edge(D, c.edge, c.s0));
      out.push_back(TreePoint::on_edge(D, c.edge, c.s1));
    }
    return;
  }
  Rational s = c.a / (Rational(1) - c.b);
  if (s >= c.s0 && s <= c.s1) out.push_back(TreePoint::on_edge(D, c.edge, s));
}

}  // namespace

void Dendrite::validate() const {
  if (vertex_count <= 0) throw Error(Errc::InvalidInput, "dendrite needs a vertex");
  if (static_cast<int>(edges.size()) != vertex_count - 1) throw Error(Errc::InvalidInput, "a tree has V - 1 edges");
  std::vector<int> parent(vertex_count);
  for (int i = 0; i < vertex_count; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count || e.u == e.v)
      throw Error(Errc::InvalidInput, "bad edge endpoints");
    if (e.length <= Rational(0)) throw Error(Errc::InvalidInput, "edge lengths must be positive");
    int a = find(e.u), b = find(e.v);
    if (a == b) throw Error(Errc::InvalidInput, "edges contain a cycle");
    parent[a] = b;
  }
}

int Dendrite::valence(int vertex) const {
  int n = 0;
  for (const Edge& e : edges) n += (e.u == vertex) + (e.v == vertex);
  return n;
}

std::vector<std::vector<int>> Dendrite::incident() const {
  std::vector<std::vector<int>> inc(vertex_count);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    inc[edges[e].u].push_back(e);
    inc[edges[e].v].push_back(e);
  }
  return inc;
}

TreePoint TreePoint::at_vertex(int v) { return {v, -1, Rational(0)}; }

TreePoint TreePoint::on_edge(const Dendrite& D, int edge, Rational t) {
  if (t < Rational(0) || t > Rational(1)) throw Error(Errc::InvalidInput, "edge parameter outside [0,1]");
  if (t == Rational(0)) return at_vertex(D.edges[edge].u);
  if (t == Rational(1)) return at_vertex(D.edges[edge].v);
  return {-1, edge, t};
}

bool TreePoint::operator==(const TreePoint& o) const {
  if (vertex >= 0 || o.vertex >= 0) return vertex == o.vertex;
  return edge == o.edge && t == o.t;
}

int point_valence(const Dendrite& D, const TreePoint& p) { return p.vertex >= 0 ? D.valence(p.vertex) : 2; }

std::vector<int> Subtree::vertices(const Dendrite& D) const {
  std::set<int> s;
  for (int e : edges) {
    s.insert(D.edges[e].u);
    s.insert(D.edges[e].v);
  }
  return {s.begin(), s.end()};
}

bool Subtree::has_edge(int e) const { return std::find(edges.begin(), edges.end(), e) != edges.end(); }

bool Subtree::contains(const Dendrite& D, const TreePoint& p) const {
  if (p.vertex >= 0) {
    auto vs = vertices(D);
    return std::binary_search(vs.begin(), vs.end(), p.vertex);
  }
  return has_edge(p.edge);
}

Subtree whole(const Dendrite& D) {
  Subtree S;
  for (int e = 0; e < static_cast<int>(D.edges.size()); ++e) S.edges.push_back(e);
  return S;
}

void validate_subtree(const Dendrite& D, const Subtree& S) {
  if (S.edges.empty()) throw Error(Errc::NotSubtree, "subtree needs at least one edge");
  std::set<int> es(S.edges.begin(), S.edges.end());
  if (es.size() != S.edges.size()) throw Error(Errc::NotSubtree, "repeated edge");
  for (int e : S.edges)
    if (e < 0 || e >= static_cast<int>(D.edges.size())) throw Error(Errc::NotSubtree, "edge not in the dendrite");
  // connected: edges = vertices - 1 on an acyclic host
  if (S.vertices(D).size() != S.edges.size() + 1) throw Error(Errc::NotSubtree, "edges are not connected");
}

std::vector<ArcPiece> geodesic(const Dendrite& D, const TreePoint& p, const TreePoint& q) {
  if (p == q) return {};
  for (int e = 0; e < static_cast<int>(D.edges.size()); ++e) {
    auto tp = param_on(D, p, e), tq = param_on(D, q, e);
    if (tp && tq) return {{e, *tp, *tq}};
  }
  auto inc = D.incident();
  struct Leg {
    int vertex;
    std::optional<ArcPiece> piece;
  };
  auto legs = [&](const TreePoint& x, bool outgoing) {
    std::vector<Leg> out;
    if (x.vertex >= 0) {
      out.push_back({x.vertex, std::nullopt});
      return out;
    }
    const Edge& E = D.edges[x.edge];
    if (outgoing) {
      out.push_back({E.u, ArcPiece{x.edge, x.t, Rational(0)}});
      out.push_back({E.v, ArcPiece{x.edge, x.t, Rational(1)}});
    } else {
      out.push_back({E.u, ArcPiece{x.edge, Rational(0), x.t}});
      out.push_back({E.v, ArcPiece{x.edge, Rational(1), x.t}});
    }
    return out;
  };
  std::vector<ArcPiece> best;
  std::optional<Rational> best_len;
  for (const Leg& a : legs(p, true))
    for (const Leg& b : legs(q, false)) {
      std::vector<int> es;
      auto vs = vertex_path(D, inc, a.vertex, b.vertex, &es);
      std::vector<ArcPiece> pieces;
      if (a.piece) pieces.push_back(*a.piece);
      for (std::size_t k = 0; k < es.size(); ++k) {
        const Edge& E = D.edges[es[k]];
        bool fwd = E.u == vs[k];
        pieces.push_back({es[k], fwd ? Rational(0) : Rational(1), fwd ? Rational(1) : Rational(0)});
      }
      if (b.piece) pieces.push_back(*b.piece);
      Rational len(0);
      for (const auto& pc : pieces) len += piece_length(D, pc);
      if (!best_len || len < *best_len) {
        best_len = len;
        best = pieces;
      }
    }
  return best;
}

Rational distance(const Dendrite& D, const TreePoint& p, const TreePoint& q) {
  Rational len(0);
  for (const auto& pc : geodesic(D, p, q)) len += piece_length(D, pc);
  return len;
}

TreeMap TreeMap::from_knots(const Dendrite& D2, const Subtree& D1, const std::vector<std::vector<Knot>>& knots) {
  D2.validate();
  validate_subtree(D2, D1);
  if (knots.size() != D1.edges.size()) throw Error(Errc::InvalidInput, "one knot list per domain edge");
  TreeMap f;
  f.tree = D2;
  f.domain = D1;
  std::vector<std::optional<TreePoint>> vimg(D2.vertex_count);
  for (std::size_t i = 0; i < knots.size(); ++i) {
    int e = D1.edges[i];
    const auto& ks = knots[i];
    if (ks.size() < 2 || ks.front().s != Rational(0) || ks.back().s != Rational(1))
      throw Error(Errc::InvalidInput, "knots must start at s = 0 and end at s = 1");
    for (std::size_t k = 0; k + 1 < ks.size(); ++k)
      if (ks[k + 1].s <= ks[k].s) throw Error(Errc::InvalidInput, "knot parameters must increase");
    for (const Knot& kn : ks)
      if (kn.image.vertex >= D2.vertex_count || kn.image.edge >= static_cast<int>(D2.edges.size()))
        throw Error(Errc::InvalidInput, "knot image outside the dendrite");
    for (auto [v, img] : {std::pair{D2.edges[e].u, ks.front().image}, std::pair{D2.edges[e].v, ks.back().image}}) {
      if (vimg[v] && *vimg[v] != img) throw Error(Errc::InvalidInput, "vertex images disagree across edges");
      vimg[v] = img;
    }
    for (std::size_t k = 0; k + 1 < ks.size(); ++k) {
      Rational s0 = ks[k].s, s1 = ks[k + 1].s;
      auto geo = geodesic(D2, ks[k].image, ks[k + 1].image);
      if (geo.empty()) {
        f.cells.push_back(constant_cell(e, s0, s1, represent(D2, ks[k].image, &D1)));
        continue;
      }
      Rational total(0);
      for (const auto& pc : geo) total += piece_length(D2, pc);
      Rational run(0);
      for (const auto& pc : geo) {
        Rational l = piece_length(D2, pc);
        Rational c0 = s0 + (s1 - s0) * run / total;
        run += l;
        Rational c1 = s0 + (s1 - s0) * run / total;
        Rational b = (pc.t1 - pc.t0) / (c1 - c0);
        f.cells.push_back({e, c0, c1, pc.edge, pc.t0 - b * c0, b});
      }
    }
  }
  return f;
}

std::vector<Cell> TreeMap::cells_on(int edge) const {
  std::vector<Cell> out;
  for (const Cell& c : cells)
    if (c.edge == edge) out.push_back(c);
  return out;
}

TreePoint TreeMap::operator()(const TreePoint& p) const {
  for (int e : domain.edges) {
    auto s = param_on(tree, p, e);
    if (!s) continue;
    for (const Cell& c : cells)
      if (c.edge == e && c.s0 <= *s && *s <= c.s1) return TreePoint::on_edge(tree, c.tedge, c.a + c.b * *s);
  }
  throw Error(Errc::OutsideDomain, "point outside the domain of the tree map");
}

std::vector<int> boundary_set(const Dendrite& D2, const Subtree& D1) {
  validate_subtree(D2, D1);
  std::vector<int> out;
  for (int v : D1.vertices(D2))
    for (int e = 0; e < static_cast<int>(D2.edges.size()); ++e)
      if (!D1.has_edge(e) && (D2.edges[e].u == v || D2.edges[e].v == v)) {
        out.push_back(v);
        break;
      }
  return out;
}

TreeMap natural_retraction(const Dendrite& D2, const Subtree& D1) {
  D2.validate();
  validate_subtree(D2, D1);
  auto attach = attachments(D2, D1);
  TreeMap r;
  r.tree = D2;
  r.domain = whole(D2);
  for (int e = 0; e < static_cast<int>(D2.edges.size()); ++e) {
    if (D1.has_edge(e)) {
      r.cells.push_back({e, Rational(0), Rational(1), e, Rational(0), Rational(1)});
    } else {
      int a = edge_attachment(D2, attach, D1, e);
      r.cells.push_back(constant_cell(e, Rational(0), Rational(1), represent(D2, TreePoint::at_vertex(a), &D1)));
    }
  }
  return r;
}

TreeMap retracted_map(const TreeMap& f) {
  auto attach = attachments(f.tree, f.domain);
  TreeMap g = f;
  for (Cell& c : g.cells) {
    if (f.domain.has_edge(c.tedge)) continue;
    // an image point at a domain vertex stays put; everything else collapses to the attachment vertex
    int a = edge_attachment(f.tree, attach, f.domain, c.tedge);
    c = constant_cell(c.edge, c.s0, c.s1, represent(f.tree, TreePoint::at_vertex(a), &f.domain));
  }
  return g;
}

TreeMap compose(const TreeMap& f, const TreeMap& g, std::size_t cell_budget) {
  TreeMap h;
  h.tree = g.tree;
  h.domain = g.domain;
  for (const Cell& c : g.cells) {
    if (c.b == Rational(0)) {
      TreePoint q = f(TreePoint::on_edge(g.tree, c.tedge, c.a));
      h.cells.push_back(constant_cell(c.edge, c.s0, c.s1, represent(f.tree, q, &f.domain)));
      continue;
    }
    if (!f.domain.has_edge(c.tedge)) throw Error(Errc::OutsideDomain, "image leaves the domain of the outer map");
    Rational t0 = c.a + c.b * c.s0, t1 = c.a + c.b * c.s1;
    Rational lo = std::min(t0, t1), hi = std::max(t0, t1);
    std::vector<Cell> pieces;
    for (const Cell& d : f.cells) {
      if (d.edge != c.tedge) continue;
      Rational a = std::max(lo, d.s0), b = std::min(hi, d.s1);
      if (b <= a) continue;
      Rational sa = (a - c.a) / c.b, sb = (b - c.a) / c.b;
      if (sb < sa) std::swap(sa, sb);
      pieces.push_back({c.edge, sa, sb, d.tedge, d.a + d.b * c.a, d.b * c.b});
    }
    std::sort(pieces.begin(), pieces.end(), [](const Cell& x, const Cell& y) { return x.s0 < y.s0; });
    for (const Cell& p : pieces) h.cells.push_back(p);
    if (h.cells.size() > cell_budget) throw Error(Errc::CellBudgetExceeded, "composition exceeds the cell budget");
  }
  return h;
}

TreeMap iterate(const TreeMap& f, int n, std::size_t cell_budget) {
  if (n < 1) throw Error(Errc::InvalidInput, "iterate needs n >= 1");
  TreeMap h = f;
  for (int k = 1; k < n; ++k) h = compose(f, h, cell_budget);
  return h;
}

ScrambleVerdict check_scrambling(const TreeMap& f) {
  ScrambleVerdict v;
  for (int e : boundary_set(f.tree, f.domain)) {
    TreePoint pe = TreePoint::at_vertex(e), fe = f(pe);
    if (fe == pe) continue;
    auto geo = geodesic(f.tree, pe, fe);
    if (!f.domain.has_edge(geo.front().edge)) {
      v.scrambles = false;
      v.violating = e;
      return v;
    }
  }
  return v;
}

std::vector<TreePoint> fixed_points(const TreeMap& f) {
  std::vector<TreePoint> out;
  bool identity = false;
  for (const Cell& c : f.cells) cell_fixed_points(f.tree, c, out, &identity);
  for (int v : f.domain.vertices(f.tree)) {
    TreePoint p = TreePoint::at_vertex(v);
    if (f(p) == p) out.push_back(p);
  }
  return dedupe(out);
}

FixedPointResult find_fixed_point(const TreeMap& f) {
  FixedPointResult r;
  r.scrambles = check_scrambling(f).scrambles;
  auto fps = fixed_points(f);
  if (!fps.empty()) {
    // prefer cutpoints
    r.point = fps.front();
    for (const auto& p : fps)
      if (point_valence(f.tree, p) >= 2) {
        r.point = p;
        break;
      }
    return r;
  }
  if (r.scrambles) throw Error(Errc::HypothesisFailed, "boundary scrambles but no fixed point was found");
  r.certified_none = true;
  return r;
}

bool separates(const Dendrite& D, const TreePoint& x, const TreePoint& p, const TreePoint& q) {
  if (x == p || x == q) return false;
  return distance(D, p, x) + distance(D, x, q) == distance(D, p, q);
}

std::optional<TreePoint> fixed_point_between(const TreeMap& f, const TreePoint& a, const TreePoint& b) {
  for (const auto& p : fixed_points(f))
    if (separates(f.tree, p, a, b)) return p;
  return std::nullopt;
}

namespace {

WeakRepulsionReport first_cell_verdict(const TreeMap& h, const TreePoint& a, const Branch& B) {
  WeakRepulsionReport r;
  auto ta = param_on(h.tree, a, B.edge);
  if (!ta || !h.domain.has_edge(B.edge)) throw Error(Errc::InvalidInput, "branch edge does not start at the point");
  const Cell* first = nullptr;
  for (const Cell& c : h.cells) {
    if (c.edge != B.edge) continue;
    if (B.toward_v && c.s0 <= *ta && *ta < c.s1) first = &c;
    if (!B.toward_v && c.s0 < *ta && *ta <= c.s1) first = &c;
  }
  if (!first) throw Error(Errc::InvalidInput, "branch leaves the edge immediately");
  if (first->tedge != B.edge || first->b <= Rational(0)) return r;
  Rational far = B.toward_v ? first->s1 : first->s0;
  TreePoint y = TreePoint::on_edge(h.tree, B.edge, (*ta + far) / Rational(2));
  if (first->b > Rational(1)) {
    r.weakly_repelling = true;
    r.kind = WeakRepulsionReport::Witness::separating;
    r.witness = y;
  } else if (first->b == Rational(1) && first->a == Rational(0)) {
    r.weakly_repelling = true;
    r.kind = WeakRepulsionReport::Witness::fixed_cutpoints;
    r.witness = y;
  }
  return r;
}

}  // namespace

WeakRepulsionReport weakly_repelling(const TreeMap& f, const TreePoint& a, const Branch& B) {
  if (f(a) != a) throw Error(Errc::NotFixed, "point is not fixed");
  TreeMap g = retracted_map(f);
  WeakRepulsionReport r = first_cell_verdict(g, a, B);
  TreeMap h = g;
  for (int n = 1; n <= 6; ++n) {
    if (n > 1) h = compose(g, h);
    r.power_stable.push_back(first_cell_verdict(h, a, B).weakly_repelling);
  }
  return r;
}

std::vector<PeriodicPoint> periodic_cutpoints(const TreeMap& f, int up_to, std::size_t cell_budget) {
  if (f.domain.edges.size() != f.tree.edges.size())
    throw Error(Errc::InvalidInput, "periodic cutpoints need an invariant dendrite (D1 = D2)");
  std::vector<PeriodicPoint> out;
  auto known = [&](const TreePoint& p) {
    for (const auto& q : out)
      if (q.point == p) return true;
    return false;
  };
  TreeMap h = f;
  for (int k = 1; k <= up_to; ++k) {
    if (k > 1) h = compose(f, h, cell_budget);
    std::vector<TreePoint> pts;
    for (const Cell& c : h.cells) {
      bool identity = false;
      std::vector<TreePoint> cand;
      cell_fixed_points(h.tree, c, cand, &identity);
      if (identity) {
        for (const auto& p : cand)
          if (p.vertex >= 0) pts.push_back(p);
      } else {
        pts.insert(pts.end(), cand.begin(), cand.end());
      }
    }
    for (int v = 0; v < h.tree.vertex_count; ++v) {
      TreePoint p = TreePoint::at_vertex(v);
      if (h(p) == p) pts.push_back(p);
    }
    for (const auto& p : dedupe(pts))
      if (point_valence(h.tree, p) >= 2 && !known(p)) out.push_back({p, k});
  }
  return out;
}

}  // namespace planefix::dendrite
