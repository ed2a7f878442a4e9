#include "planefix/lam.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

#include "planefix/error.hpp"

namespace planefix::lam {

namespace {

long long floor_div(long long n, long long d) {
  long long q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

// Index i of the open complementary arc (c[i], c[i+1]) containing x; -1 if x is a point of c.
int arc_index(const Class& c, Rational x) {
  auto it = std::lower_bound(c.begin(), c.end(), x);
  if (it != c.end() && *it == x) return -1;
  int i = static_cast<int>(it - c.begin()) - 1;
  return i < 0 ? static_cast<int>(c.size()) - 1 : i;
}

bool one_sided(const Class& a, const Class& b) {
  if (a.size() < 2) return true;
  int side = -2;
  for (const Rational& x : b) {
    int i = arc_index(a, x);
    if (i < 0) continue;
    if (side == -2) side = i;
    if (side != i) return false;
  }
  return true;
}

std::string show(const Class& c) {
  std::string s = "{";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + to_string(c[i]);
  return s + "}";
}

Rational forward(Rational from, Rational to) { return reduce(to - from); }

// Image order preserved on a class: consecutive distinct images step to the circular successor.
bool orientation_preserved(const Class& c, int d) {
  Class img = image(c, d);
  if (img.size() < 2) return true;
  std::vector<Rational> seq;
  for (const Rational& a : c) {
    Rational s = sigma(a, d);
    if (seq.empty() || seq.back() != s) seq.push_back(s);
  }
  while (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto pos = std::lower_bound(img.begin(), img.end(), seq[i]) - img.begin();
    Rational succ = img[(pos + 1) % img.size()];
    if (seq[(i + 1) % seq.size()] != succ) return false;
  }
  return true;
}

}  // namespace

Rational reduce(Rational a) {
  long long f = floor_div(a.numerator(), a.denominator());
  return a - Rational(f);
}

Rational angle(long long p, long long q) {
  if (q == 0) throw Error(Errc::InvalidInput, "zero denominator");
  return reduce(Rational(p, q));
}

Rational parse_angle(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return reduce(Rational(std::stoll(s)));
    return angle(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(Errc::InvalidInput, "bad angle '" + s + "'");
  }
}

std::string to_string(Rational a) {
  if (a.denominator() == 1) return std::to_string(a.numerator());
  return std::to_string(a.numerator()) + "/" + std::to_string(a.denominator());
}

Rational sigma(Rational a, int d) { return reduce(a * Rational(d)); }

Class normalize(Class c) {
  for (Rational& a : c) a = reduce(a);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

Class image(const Class& c, int d) {
  Class out;
  for (const Rational& a : c) out.push_back(sigma(a, d));
  return normalize(out);
}

Rational leaf_length(const Class& leaf) {
  if (leaf.size() != 2) throw Error(Errc::NotALeaf, show(leaf) + " has " + std::to_string(leaf.size()) + " points");
  Rational diff = leaf[1] > leaf[0] ? leaf[1] - leaf[0] : leaf[0] - leaf[1];
  return std::min(diff, Rational(1) - diff);
}

bool unlinked(const Class& a, const Class& b) { return one_sided(a, b) && one_sided(b, a); }

std::vector<Rational> FiniteLamination::angles() const {
  std::set<Rational> s;
  for (const Class& c : classes) s.insert(c.begin(), c.end());
  return {s.begin(), s.end()};
}

AxiomReport check_invariant(const FiniteLamination& L) {
  AxiomReport r;
  const int d = L.degree;
  for (std::size_t i = 0; i < L.classes.size(); ++i)
    for (std::size_t j = i + 1; j < L.classes.size(); ++j)
      if (!unlinked(L.classes[i], L.classes[j])) {
        r.e2 = false;
        r.failures.push_back("E2: " + show(L.classes[i]) + " and " + show(L.classes[j]) + " are linked");
      }
  std::set<Class> present(L.classes.begin(), L.classes.end());
  for (const Class& c : L.classes) {
    if (c.size() < 2) continue;
    Class img = image(c, d);
    if (img.size() >= 2 && !present.count(img)) {
      r.d1 = false;
      r.failures.push_back("D1: image of " + show(c) + " is " + show(img) + ", not a class");
    }
  }
  std::vector<Rational> pts = L.angles();
  for (const Class& D : L.classes) {
    if (D.size() < 2) continue;
    std::set<Rational> pre;
    for (const Rational& x : pts)
      if (std::binary_search(D.begin(), D.end(), sigma(x, d))) pre.insert(x);
    for (const Class& c : L.classes) {
      std::size_t in = 0;
      for (const Rational& x : c) in += pre.count(x);
      if (in != 0 && in != c.size()) {
        r.d2 = false;
        r.failures.push_back("D2: preimage of " + show(D) + " splits " + show(c));
      }
    }
  }
  for (const Class& c : L.classes)
    if (c.size() >= 3 && !orientation_preserved(c, d)) {
      r.d3 = false;
      r.failures.push_back("D3: " + show(c) + " is not mapped with positive orientation");
    }
  return r;
}

std::vector<Class> orbit(const Class& leaf, int d, int max_len) {
  std::vector<Class> out;
  std::set<Class> seen;
  Class cur = normalize(leaf);
  while (!seen.count(cur) && static_cast<int>(out.size()) < max_len) {
    seen.insert(cur);
    out.push_back(cur);
    cur = image(cur, d);
  }
  return out;
}

PeriodicLeaf find_periodic_leaf(const std::vector<Class>& chords, int d) {
  if (chords.empty()) throw Error(Errc::NoPeriodicLeaf, "empty chord set");
  std::set<Class> set;
  for (const Class& c : chords) {
    Class n = normalize(c);
    if (n.size() != 2) throw Error(Errc::NotALeaf, show(n) + " is not a leaf");
    set.insert(n);
  }
  for (const Class& c : set)
    if (!set.count(image(c, d)))
      throw Error(Errc::InvalidInput, "chord set not forward invariant at " + show(c));
  std::map<Class, int> step;
  Class cur = normalize(chords.front());
  for (int k = 0; k <= static_cast<int>(set.size()); ++k) {
    auto it = step.find(cur);
    if (it != step.end()) {
      // first leaf of the cycle along the orbit
      Class first = normalize(chords.front());
      for (int j = 0; j < it->second; ++j) first = image(first, d);
      return {first, k - it->second};
    }
    step[cur] = k;
    cur = image(cur, d);
  }
  throw Error(Errc::NoPeriodicLeaf, "no cycle within the chord set");
}

FiniteLamination refine(const FiniteLamination& L, int g) {
  const int d = L.degree;
  FiniteLamination out = L;
  for (Class& c : out.classes) c = normalize(c);
  for (int gen = 0; gen < g; ++gen) {
    std::vector<Class> targets = out.classes;
    for (const Class& D : targets) {
      if (D.size() < 2) continue;
      const std::size_t m = D.size();
      std::set<Rational> used;
      for (const Class& c : out.classes)
        if (image(c, d) == D) used.insert(c.begin(), c.end());
      // free preimages of each point of D
      std::vector<std::vector<Rational>> free(m);
      for (std::size_t j = 0; j < m; ++j)
        for (int k = 0; k < d; ++k) {
          Rational x = reduce((D[j] + Rational(k)) / Rational(d));
          if (!used.count(x)) free[j].push_back(x);
        }
      std::size_t groups = free[0].size();
      for (const auto& f : free)
        if (f.size() != groups)
          throw Error(Errc::NotRefined, "pullback of " + show(D) + " is critical relative to existing classes");
      if (groups == 0) continue;
      // first admissible assignment, enumerated in angle order
      std::vector<std::vector<std::size_t>> orders(m);
      for (std::size_t j = 0; j < m; ++j) {
        orders[j].resize(groups);
        for (std::size_t k = 0; k < groups; ++k) orders[j][k] = k;
      }
      std::vector<Class> found;
      std::function<bool(std::size_t)> search = [&](std::size_t j) -> bool {
        if (j == m) {
          std::vector<Class> cand(groups);
          for (std::size_t q = 0; q < groups; ++q) {
            for (std::size_t jj = 0; jj < m; ++jj) cand[q].push_back(free[jj][orders[jj][q]]);
            cand[q] = normalize(cand[q]);
            if (!orientation_preserved(cand[q], d) || image(cand[q], d) != D) return false;
          }
          for (std::size_t q = 0; q < groups; ++q) {
            for (std::size_t p = q + 1; p < groups; ++p)
              if (!unlinked(cand[q], cand[p])) return false;
            for (const Class& c : out.classes)
              if (!unlinked(cand[q], c)) return false;
          }
          found = cand;
          return true;
        }
        std::sort(orders[j].begin(), orders[j].end());
        do {
          if (search(j + 1)) return true;
        } while (j > 0 && std::next_permutation(orders[j].begin(), orders[j].end()));
        return false;
      };
      if (!search(0)) throw Error(Errc::NotRefined, "no unlinked pullback of " + show(D));
      for (Class& c : found) out.classes.push_back(c);
    }
  }
  return out;
}

std::vector<std::vector<int>> QuotientTree::adjacency() const {
  std::vector<std::vector<int>> adj(vertices.size());
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& n : adj) std::sort(n.begin(), n.end());
  return adj;
}

int QuotientTree::valence(int v) const {
  int n = 0;
  for (auto [a, b] : edges) n += (a == v) + (b == v);
  return n;
}

std::vector<int> QuotientTree::branch_vertices(int v, int branch) const {
  auto adj = adjacency();
  std::vector<int> out;
  std::vector<char> seen(vertices.size(), 0);
  seen[v] = 1;
  std::queue<int> q;
  q.push(branch);
  seen[branch] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    out.push_back(u);
    for (int w : adj[u])
      if (!seen[w]) {
        seen[w] = 1;
        q.push(w);
      }
  }
  return out;
}

std::vector<int> QuotientTree::path(int from, int to) const {
  auto adj = adjacency();
  std::vector<int> parent(vertices.size(), -2);
  std::queue<int> q;
  q.push(from);
  parent[from] = -1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : adj[u])
      if (parent[w] == -2) {
        parent[w] = u;
        q.push(w);
      }
  }
  std::vector<int> out;
  for (int u = to; u != -1; u = parent[u]) out.push_back(u);
  std::reverse(out.begin(), out.end());
  return out;
}

int QuotientTree::vertex_of_class(const Class& c) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].kind == Kind::cls && vertices[i].cls == c) return static_cast<int>(i);
  return -1;
}

QuotientTree quotient_tree(const FiniteLamination& L) {
  const int d = L.degree;
  QuotientTree T;
  std::vector<Class> classes;
  for (const Class& c : L.classes) classes.push_back(normalize(c));
  std::vector<Rational> X = FiniteLamination{d, classes}.angles();
  const int m = static_cast<int>(X.size());
  if (m == 0) {
    T.vertices.push_back({QuotientTree::Kind::region, {}, {{Rational(0), Rational(0)}}});
    T.induced = {0};
    return T;
  }
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = i + 1; j < classes.size(); ++j)
      if (!unlinked(classes[i], classes[j]))
        throw Error(Errc::NotATree, show(classes[i]) + " crosses " + show(classes[j]));
  std::set<Class> present(classes.begin(), classes.end());
  for (const Class& c : classes) {
    Class img = image(c, d);
    if (img.size() >= 2 && !present.count(img))
      throw Error(Errc::NotRefined, "image of " + show(c) + " is not a class");
    if (img.size() == 1 && !std::binary_search(X.begin(), X.end(), img[0]))
      throw Error(Errc::NotRefined, "image point of " + show(c) + " is not an angle of the lamination");
  }
  auto idx = [&](const Rational& x) { return static_cast<int>(std::lower_bound(X.begin(), X.end(), x) - X.begin()); };

  // half-edges: arcs forward (key 0), arcs backward (key 1), chords (key = forward distance)
  struct Half {
    int from, to;
    int cls;  // -1 forward arc, -2 backward arc
    Rational key;
  };
  std::vector<Half> H;
  std::map<std::pair<int, int>, int> chord_of;
  for (int u = 0; u < m; ++u) {
    int v = (u + 1) % m;
    H.push_back({u, v, -1, Rational(0)});
    H.push_back({v, u, -2, Rational(1)});
  }
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const Class& c = classes[ci];
    if (c.size() < 2) continue;
    std::size_t ne = c.size() == 2 ? 1 : c.size();
    for (std::size_t k = 0; k < ne; ++k) {
      int a = idx(c[k]), b = idx(c[(k + 1) % c.size()]);
      auto key = std::minmax(a, b);
      if (chord_of.count(key)) throw Error(Errc::InvalidInput, "chord shared by two classes at " + show(c));
      chord_of[key] = static_cast<int>(ci);
      H.push_back({a, b, static_cast<int>(ci), forward(X[a], X[b])});
      H.push_back({b, a, static_cast<int>(ci), forward(X[b], X[a])});
    }
  }
  std::vector<std::vector<int>> out_at(m);
  for (int h = 0; h < static_cast<int>(H.size()); ++h) out_at[H[h].from].push_back(h);
  for (auto& o : out_at) std::sort(o.begin(), o.end(), [&](int a, int b) { return H[a].key < H[b].key; });
  auto twin_key = [&](int h) {
    const Half& e = H[h];
    if (e.cls == -1) return Rational(1);
    if (e.cls == -2) return Rational(0);
    return forward(X[e.to], X[e.from]);
  };
  auto next_of = [&](int h) {
    const auto& o = out_at[H[h].to];
    Rational k = twin_key(h);
    int best = -1;
    for (int c : o)
      if (H[c].key < k) best = c;
    if (best < 0) best = o.back();
    return best;
  };

  std::vector<int> face_of(H.size(), -1);
  std::vector<std::vector<int>> faces;
  for (int h = 0; h < static_cast<int>(H.size()); ++h) {
    if (face_of[h] >= 0) continue;
    std::vector<int> cyc;
    int cur = h;
    while (face_of[cur] < 0) {
      face_of[cur] = static_cast<int>(faces.size());
      cyc.push_back(cur);
      cur = next_of(cur);
    }
    faces.push_back(cyc);
  }

  // classify faces
  std::vector<int> region_vertex(faces.size(), -1);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    bool outer = true, has_arc = false;
    std::set<int> cls;
    for (int h : faces[f]) {
      outer = outer && H[h].cls == -2;
      has_arc = has_arc || H[h].cls == -1;
      if (H[h].cls >= 0) cls.insert(H[h].cls);
    }
    if (outer) continue;
    if (!has_arc && cls.size() == 1) {
      const Class& c = classes[*cls.begin()];
      bool interior = c.size() >= 3;
      for (int h : faces[f]) {
        auto pos = std::lower_bound(c.begin(), c.end(), X[H[h].from]) - c.begin();
        interior = interior && idx(c[(pos + 1) % c.size()]) == H[h].to;
      }
      if (interior) continue;
    }
    QuotientTree::Vertex v;
    v.kind = QuotientTree::Kind::region;
    for (int h : faces[f])
      if (H[h].cls == -1) v.arcs.push_back({X[H[h].from], X[H[h].to]});
    std::sort(v.arcs.begin(), v.arcs.end());
    region_vertex[f] = static_cast<int>(T.vertices.size());
    T.vertices.push_back(v);
  }
  std::vector<int> class_vertex(classes.size());
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    class_vertex[ci] = static_cast<int>(T.vertices.size());
    T.vertices.push_back({QuotientTree::Kind::cls, classes[ci], {}});
  }
  std::set<std::pair<int, int>> edge_set;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (region_vertex[f] < 0) continue;
    for (int h : faces[f])
      if (H[h].cls >= 0) edge_set.insert({region_vertex[f], class_vertex[H[h].cls]});
  }
  // forward arc starting at point u
  auto arc_face = [&](int u) { return face_of[2 * u]; };
  for (std::size_t ci = 0; ci < classes.size(); ++ci)
    if (classes[ci].size() == 1) edge_set.insert({region_vertex[arc_face(idx(classes[ci][0]))], class_vertex[ci]});
  T.edges.assign(edge_set.begin(), edge_set.end());

  int V = static_cast<int>(T.vertices.size());
  if (static_cast<int>(T.edges.size()) != V - 1) throw Error(Errc::NotATree, "edges != vertices - 1");
  {
    auto adj = T.adjacency();
    std::vector<char> seen(V, 0);
    std::vector<int> st{0};
    seen[0] = 1;
    int cnt = 0;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      ++cnt;
      for (int w : adj[u])
        if (!seen[w]) {
          seen[w] = 1;
          st.push_back(w);
        }
    }
    if (cnt != V) throw Error(Errc::NotATree, "quotient graph is disconnected");
  }

  // Markov condition on region arcs
  for (int v = 0; v < V; ++v)
    for (auto [a, b] : T.vertices[v].arcs) {
      Rational len = m == 1 ? Rational(1) : forward(a, b);
      if (len * Rational(d) >= Rational(1))
        throw Error(Errc::NotRefined, "region arc (" + to_string(a) + "," + to_string(b) + ") covers the circle");
    }

  auto region_at = [&](Rational x) {
    // region of the elementary arc containing x; a lamination angle selects the arc starting there
    int i = static_cast<int>(std::upper_bound(X.begin(), X.end(), x) - X.begin()) - 1;
    if (i < 0) i = m - 1;
    return region_vertex[arc_face(i)];
  };
  auto class_target = [&](const Class& img) {
    if (img.size() >= 2) return class_vertex[std::find(classes.begin(), classes.end(), img) - classes.begin()];
    for (std::size_t ci = 0; ci < classes.size(); ++ci)
      if (classes[ci] == img) return class_vertex[ci];
    for (std::size_t ci = 0; ci < classes.size(); ++ci)
      if (std::binary_search(classes[ci].begin(), classes[ci].end(), img[0])) return class_vertex[ci];
    return region_at(img[0]);
  };

  T.induced.assign(V, -1);
  auto adj = T.adjacency();
  for (std::size_t ci = 0; ci < classes.size(); ++ci) T.induced[class_vertex[ci]] = class_target(image(classes[ci], d));
  for (int v = 0; v < V; ++v) {
    const auto& vx = T.vertices[v];
    if (vx.kind != QuotientTree::Kind::region) continue;
    if (vx.arcs.empty()) {
      std::set<int> targets;
      for (int w : adj[v]) targets.insert(T.induced[w]);
      int pick = -1;
      for (int r = 0; r < V && pick < 0; ++r) {
        if (T.vertices[r].kind != QuotientTree::Kind::region) continue;
        bool all = true;
        for (int t : targets)
          if (T.vertices[t].kind == QuotientTree::Kind::cls &&
              !std::binary_search(adj[r].begin(), adj[r].end(), t))
            all = false;
        if (all) pick = r;
      }
      T.induced[v] = pick >= 0 ? pick : *targets.begin();
      continue;
    }
    std::set<int> hit;
    for (auto [a, b] : vx.arcs) {
      Rational start = sigma(a, d), len = forward(a, b) * Rational(d), run(0);
      int i = idx(start);
      while (run < len) {
        hit.insert(region_vertex[arc_face(i)]);
        int n = (i + 1) % m;
        run += m == 1 ? Rational(1) : forward(X[i], X[n]);
        i = n;
      }
    }
    if (hit.size() == 1) {
      T.induced[v] = *hit.begin();
      continue;
    }
    auto longest = vx.arcs.front();
    for (auto arc : vx.arcs)
      if (forward(arc.first, arc.second) > forward(longest.first, longest.second)) longest = arc;
    Rational mid = reduce(longest.first + forward(longest.first, longest.second) / Rational(2));
    T.induced[v] = region_at(sigma(mid, d));
  }
  return T;
}

WeakRepulsion weakly_repelling_certificate(const QuotientTree& T, int v, int branch) {
  if (v < 0 || v >= static_cast<int>(T.vertices.size()) || T.induced[v] != v)
    throw Error(Errc::NotFixed, "vertex " + std::to_string(v) + " is not fixed");
  auto adj = T.adjacency();
  if (!std::binary_search(adj[v].begin(), adj[v].end(), branch))
    throw Error(Errc::InvalidInput, "branch must be a neighbour of the fixed vertex");
  WeakRepulsion r;
  for (int y : T.branch_vertices(v, branch)) {
    int fy = T.induced[y];
    if (fy == y && T.valence(y) >= 2) {
      r = {true, WeakRepulsion::Witness::fixed_cutpoint, y};
      return r;
    }
    if (fy != y) {
      auto p = T.path(v, fy);
      if (std::find(p.begin(), p.end(), y) != p.end()) {
        r = {true, WeakRepulsion::Witness::separating, y};
        return r;
      }
    }
  }
  return r;
}

QuotientTree power(const QuotientTree& T, int n) {
  QuotientTree P = T;
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    int cur = static_cast<int>(v);
    for (int k = 0; k < n; ++k) cur = T.induced[cur];
    P.induced[v] = cur;
  }
  return P;
}

PeriodicRepulsion weakly_repelling_periodic(const QuotientTree& T, int v, int max_n) {
  auto adj = T.adjacency();
  for (int n = 1; n <= max_n; ++n) {
    QuotientTree P = power(T, n);
    if (P.induced[v] != v) continue;
    for (int b : adj[v]) {
      WeakRepulsion w = weakly_repelling_certificate(P, v, b);
      if (w.weakly_repelling) return {true, n, b, w};
    }
  }
  return {};
}

std::vector<PeriodicVertex> periodic_cutpoints(const QuotientTree& T, int up_to) {
  std::vector<PeriodicVertex> out;
  for (int v = 0; v < static_cast<int>(T.vertices.size()); ++v) {
    if (T.valence(v) < 2) continue;
    int cur = v;
    for (int k = 1; k <= up_to; ++k) {
      cur = T.induced[cur];
      if (cur == v) {
        out.push_back({v, k});
        break;
      }
    }
  }
  return out;
}

}  // namespace planefix::lam
