#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace zqft::graph {

using Rational = boost::rational<std::int64_t>;

enum class Side : std::uint8_t { L = 0, R = 1 };

// Half-edge model. Vertices are numbered bulk first, then V_L, then V_R.
// Half-edges are numbered by vertex blocks: bulk vertex 0 owns
// [0, bulk_valence[0]), the next bulk vertex the following block, and every
// boundary vertex owns exactly one half-edge. The involution is stored as
// a list of disjoint pairs covering all half-edges.
struct FeynmanGraph {
  std::vector<int> bulk_valence;
  int n_left = 0;
  int n_right = 0;
  std::vector<std::pair<int, int>> pairs;

  int num_bulk() const { return int(bulk_valence.size()); }
  int num_vertices() const { return num_bulk() + n_left + n_right; }
  int num_half_edges() const;
  int num_edges() const { return int(pairs.size()); }
  int vertex_of(int half_edge) const;
  bool is_bulk(int v) const { return v < num_bulk(); }
  bool is_left(int v) const { return v >= num_bulk() && v < num_bulk() + n_left; }
  bool is_right(int v) const { return v >= num_bulk() + n_left; }
  // Edges as vertex pairs, in the order of `pairs`.
  std::vector<std::pair<int, int>> edge_vertices() const;
  bool has_short_loop() const;
  // Throws if the pairs do not form a fixed-point-free involution.
  void validate() const;

  // V_b=[3,3];V_L=2;V_R=0;pairs=[(0,1),(2,6),(3,7),(4,5)]
  std::string to_string() const;
  static FeynmanGraph parse(const std::string& text);
};

// Decoration: a side per vertex and a cut flag per edge (index into pairs).
struct DecoratedGraph {
  FeynmanGraph graph;
  std::vector<Side> side;
  std::vector<bool> cut;

  bool admissible() const;
  std::string to_string() const;
};

// Canonical encoding; equal iff the (decorated) graphs are isomorphic.
struct Canon {
  std::vector<int> code;
  bool operator==(const Canon&) const = default;
  auto operator<=>(const Canon&) const = default;
};

Canon canonical_form(const FeynmanGraph& g);
Canon canonical_form(const DecoratedGraph& g);
// A representative rebuilt from the canonical encoding, so that
// canonical_graph(canonical_graph(g)) == canonical_graph(g) literally.
FeynmanGraph canonical_graph(const FeynmanGraph& g);

// |Aut| from the multigraph structure: vertex symmetries times edge-bundle
// permutations (and loop flips).
std::int64_t aut_order(const FeynmanGraph& g);
std::int64_t aut_order(const DecoratedGraph& g);
// Direct backtracking over vertex and half-edge bijections; small graphs only.
std::int64_t aut_order_bruteforce(const FeynmanGraph& g);
std::int64_t aut_order_bruteforce(const DecoratedGraph& g);

// l = |E| - |V_b| - |V_boundary| / 2
Rational loop_order(const FeynmanGraph& g);

// All isomorphism classes with exactly n_left / n_right boundary vertices,
// bulk valences drawn from `valences`, and at most max_half_edges half-edges.
// The empty graph is not included.
std::vector<FeynmanGraph> enumerate_graphs(int max_half_edges, const std::vector<int>& valences, int n_left,
                                           int n_right, bool allow_short_loops = true);
// Classes whose bulk vertices have exactly these valences (as a multiset).
std::vector<FeynmanGraph> enumerate_graphs_with(const std::vector<int>& bulk_valences, int n_left, int n_right,
                                                bool allow_short_loops = true, bool allow_boundary_edges = true);

struct DecorationOrbit {
  DecoratedGraph representative;
  std::int64_t orbit_size = 0;  // counted decorations in the class
  std::int64_t stabilizer = 0;  // |Aut^dec|
};
struct DecorationCensus {
  std::vector<DecorationOrbit> orbits;
  std::int64_t total = 0;  // admissible decorations
  std::int64_t aut = 0;    // |Aut(Gamma)|
};
DecorationCensus enumerate_decorations(const FeynmanGraph& g);
// |sum_orbits 1/|Aut^dec| - total/|Aut||, and max over orbits of
// |orbit * |Aut^dec| - |Aut||; both exact.
struct DecorationCheck {
  Rational identity_residual{0};
  std::int64_t orbit_stabilizer_residual = 0;
};
DecorationCheck check_decorations(const FeynmanGraph& g);

struct GluedTerm {
  DecoratedGraph graph;
  std::int64_t multiplicity = 0;
};
// Sum over perfect matchings of V_R(gL) + V_L(gR); matched boundary vertices
// are removed and their neighbours joined by a cut edge.
std::vector<GluedTerm> glue_graphs(const FeynmanGraph& gL, const FeynmanGraph& gR);
// Inverse of gluing: replace every cut edge by two boundary legs.
std::pair<FeynmanGraph, FeynmanGraph> cut_graph(const DecoratedGraph& g);
// max over glued terms of |m |Aut^dec| - |Aut gL| |Aut gR||
std::int64_t auto_gluing_residual(const FeynmanGraph& gL, const FeynmanGraph& gR);
// Round trip: cutting each glued term recovers (gL, gR) up to isomorphism.
bool gluing_roundtrip(const FeynmanGraph& gL, const FeynmanGraph& gR);

// Number of perfect matchings of 2k points, (2k - 1)!!.
std::int64_t double_factorial_odd(int two_k);

}  // namespace zqft::graph
