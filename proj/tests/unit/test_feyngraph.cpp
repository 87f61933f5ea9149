#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "zqft/feyngraph.hpp"

using namespace zqft::graph;

namespace {

std::int64_t fact(int n) { return n <= 1 ? 1 : n * fact(n - 1); }

// Sum of 1/|Aut| over all classes equals (#pairings) / (#vertex relabelings
// times the half-edge permutations at each vertex).
Rational expected_weight(const std::vector<int>& vals, int nl, int nr) {
  const int h = std::accumulate(vals.begin(), vals.end(), 0) + nl + nr;
  if (h % 2) return 0;
  std::int64_t denom = fact(nl) * fact(nr);
  std::map<int, int> mult;
  for (int k : vals) {
    denom *= fact(k);
    ++mult[k];
  }
  for (auto [k, c] : mult) denom *= fact(c);
  return Rational(double_factorial_odd(h), denom);
}

}  // namespace

TEST_CASE("named graphs") {
  const auto theta = FeynmanGraph::parse("V_b=[3,3];V_L=0;V_R=0;pairs=[(0,3),(1,4),(2,5)]");
  const auto dumbbell = FeynmanGraph::parse("V_b=[3,3];V_L=0;V_R=0;pairs=[(0,1),(2,5),(3,4)]");
  const auto eight = FeynmanGraph::parse("V_b=[4];V_L=0;V_R=0;pairs=[(0,1),(2,3)]");
  const auto ll = FeynmanGraph::parse("V_b=[];V_L=2;V_R=0;pairs=[(0,1)]");
  CHECK(aut_order(theta) == 12);
  CHECK(aut_order(dumbbell) == 8);
  CHECK(aut_order(eight) == 8);
  CHECK(aut_order(ll) == 2);
  CHECK(loop_order(theta) == Rational(1));
  CHECK(loop_order(eight) == Rational(1));
  CHECK(loop_order(ll) == Rational(1, 1) - Rational(1));
  CHECK(theta.has_short_loop() == false);
  CHECK(dumbbell.has_short_loop());
  CHECK(FeynmanGraph::parse(theta.to_string()).to_string() == theta.to_string());
  CHECK_THROWS(FeynmanGraph::parse("V_b=[3];V_L=0;V_R=0;pairs=[(0,1)]"));
}

TEST_CASE("vacuum cubic graphs with six half-edges") {
  const auto gs = enumerate_graphs(6, {3}, 0, 0);
  CHECK(gs.size() == 2);
  CHECK(enumerate_graphs(6, {3}, 0, 0, false).size() == 1);
}

TEST_CASE("automorphism counts sum to the pairing count") {
  const std::vector<std::vector<int>> multisets = {{3, 3}, {4}, {4, 4}, {3, 3, 4}, {3, 3, 3, 3}, {5, 3}, {6}};
  for (const auto& vals : multisets) {
    for (int nl = 0; nl <= 2; ++nl) {
      for (int nr = 0; nr <= 2; ++nr) {
        const auto gs = enumerate_graphs_with(vals, nl, nr);
        Rational sum = 0;
        for (const auto& g : gs) sum += Rational(1, aut_order(g));
        CAPTURE(nl);
        CAPTURE(nr);
        CHECK(sum == expected_weight(vals, nl, nr));
      }
    }
  }
}

TEST_CASE("structural and brute-force automorphisms agree") {
  for (const auto& g : enumerate_graphs(8, {3, 4}, 1, 1)) {
    CAPTURE(g.to_string());
    CHECK(aut_order(g) == aut_order_bruteforce(g));
  }
}

TEST_CASE("canonical form ignores labels") {
  const auto a = FeynmanGraph::parse("V_b=[3,3];V_L=1;V_R=1;pairs=[(0,6),(1,3),(2,4),(5,7)]");
  const auto b = FeynmanGraph::parse("V_b=[3,3];V_L=1;V_R=1;pairs=[(3,6),(0,4),(1,5),(2,7)]");
  CHECK(canonical_form(a) == canonical_form(b));
  CHECK(canonical_graph(canonical_graph(a)).to_string() == canonical_graph(a).to_string());
  const auto c = FeynmanGraph::parse("V_b=[3,3];V_L=1;V_R=1;pairs=[(0,7),(1,3),(2,4),(5,6)]");
  CHECK(canonical_form(a) == canonical_form(c));  // swapping the two ends of a symmetric chain
  const auto d = FeynmanGraph::parse("V_b=[3,3];V_L=1;V_R=1;pairs=[(0,1),(2,3),(4,6),(5,7)]");
  CHECK_FALSE(canonical_form(a) == canonical_form(d));
}

TEST_CASE("decorations") {
  for (const auto& g : enumerate_graphs(8, {3, 4}, 0, 0)) {
    const auto check = check_decorations(g);
    CHECK(check.identity_residual.numerator() == 0);
    CHECK(check.orbit_stabilizer_residual == 0);
  }
  const auto theta = FeynmanGraph::parse("V_b=[3,3];V_L=0;V_R=0;pairs=[(0,3),(1,4),(2,5)]");
  const auto census = enumerate_decorations(theta);
  CHECK(census.aut == 12);
  std::int64_t total = 0;
  for (const auto& o : census.orbits) {
    CHECK(o.representative.admissible());
    total += o.orbit_size;
  }
  CHECK(total == census.total);
}

TEST_CASE("gluing") {
  const auto l = FeynmanGraph::parse("V_b=[3];V_L=0;V_R=1;pairs=[(0,1),(2,3)]");
  const auto r = FeynmanGraph::parse("V_b=[3];V_L=1;V_R=0;pairs=[(0,1),(2,3)]");
  const auto terms = glue_graphs(l, r);
  REQUIRE(terms.size() == 1);
  CHECK(terms.front().graph.graph.num_edges() == 3);
  CHECK(auto_gluing_residual(l, r) == 0);
  CHECK(gluing_roundtrip(l, r));
  const auto l2 = FeynmanGraph::parse("V_b=[4];V_L=0;V_R=2;pairs=[(0,1),(2,4),(3,5)]");
  const auto r2 = FeynmanGraph::parse("V_b=[3,3];V_L=2;V_R=0;pairs=[(0,6),(1,3),(2,4),(5,7)]");
  CHECK(auto_gluing_residual(l2, r2) == 0);
  CHECK(gluing_roundtrip(l2, r2));
  CHECK(double_factorial_odd(8) == 105);
}
