#pragma once

// Finite sigma_d-invariant laminations on R/Z with exact rational angles.

#include <boost/rational.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace planefix::lam {

using Rational = boost::rational<long long>;
// Sorted, reduced to [0,1), no duplicates. Two points: a leaf; three or more: a gap class.
using Class = std::vector<Rational>;

Rational reduce(Rational a);
Rational angle(long long p, long long q);
Rational parse_angle(const std::string& s);
std::string to_string(Rational a);

Rational sigma(Rational a, int d);
Class normalize(Class c);
Class image(const Class& c, int d);

Rational leaf_length(const Class& leaf);

// Hulls meet at most in shared endpoints.
bool unlinked(const Class& a, const Class& b);

struct FiniteLamination {
  int degree = 2;
  std::vector<Class> classes;

  std::vector<Rational> angles() const;
};

struct AxiomReport {
  bool e1_finite_trivial = true;
  bool e2 = true;
  bool d1 = true;
  bool d2 = true;
  bool d3 = true;
  std::vector<std::string> failures;

  bool ok() const { return e2 && d1 && d2 && d3; }
};

AxiomReport check_invariant(const FiniteLamination& L);

struct PeriodicLeaf {
  Class leaf;
  int period = 0;
};

// Forward orbit of a leaf until it repeats, at most max_len steps.
std::vector<Class> orbit(const Class& leaf, int d, int max_len = 4096);
PeriodicLeaf find_periodic_leaf(const std::vector<Class>& chords, int d);

// Adds g generations of pullbacks; existing classes mapping onto a class are kept as its pullbacks.
FiniteLamination refine(const FiniteLamination& L, int g);

struct QuotientTree {
  enum class Kind { region, cls };
  struct Vertex {
    Kind kind = Kind::region;
    Class cls;                                      // for class vertices
    std::vector<std::pair<Rational, Rational>> arcs;  // for region vertices, open arcs (from, to) counterclockwise
  };
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> induced;

  std::vector<std::vector<int>> adjacency() const;
  int valence(int v) const;
  // Vertices of the component of T minus v containing the neighbour `branch`.
  std::vector<int> branch_vertices(int v, int branch) const;
  std::vector<int> path(int from, int to) const;
  int vertex_of_class(const Class& c) const;
};

QuotientTree quotient_tree(const FiniteLamination& L);

struct WeakRepulsion {
  enum class Witness { none, separating, fixed_cutpoint };
  bool weakly_repelling = false;
  Witness kind = Witness::none;
  int witness = -1;
};

WeakRepulsion weakly_repelling_certificate(const QuotientTree& T, int v, int branch);

// Same tree with the induced map replaced by its n-th iterate.
QuotientTree power(const QuotientTree& T, int n);

struct PeriodicRepulsion {
  bool weakly_repelling = false;
  int n = 0;
  int branch = -1;
  WeakRepulsion certificate;
};

// Smallest n <= max_n and branch in which v is a weakly repelling fixed point of the n-th iterate.
PeriodicRepulsion weakly_repelling_periodic(const QuotientTree& T, int v, int max_n);

struct PeriodicVertex {
  int vertex = -1;
  int period = 0;
};

std::vector<PeriodicVertex> periodic_cutpoints(const QuotientTree& T, int up_to);

}  // namespace planefix::lam
