#include "zqft/feyngraph.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "zqft/errors.hpp"

namespace zqft::graph {

namespace {

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

std::int64_t pow2(int n) { return std::int64_t(1) << n; }

// Multigraph on the bulk vertices. Univalent boundary vertices are folded
// into per-vertex leg counts; boundary-boundary edges into six counters.
// Colour 0 is an ordinary edge, colour 1 a cut edge.
struct Shape {
  int n = 0;
  std::vector<int> vlab;                // 2 * valence + side
  std::vector<std::array<int, 4>> legs;  // (L,u) (L,c) (R,u) (R,c)
  std::vector<int> mu, mc;              // n x n, loops on the diagonal
  std::array<int, 6> e2{};              // LLu LLc LRu LRc RRu RRc

  int& m(int colour, int i, int j) { return colour ? mc[i * n + j] : mu[i * n + j]; }
  int m(int colour, int i, int j) const { return colour ? mc[i * n + j] : mu[i * n + j]; }
};

Shape make_shape(const FeynmanGraph& g, const std::vector<Side>* side, const std::vector<bool>* cut) {
  Shape s;
  s.n = g.num_bulk();
  s.vlab.resize(s.n);
  s.legs.assign(s.n, {0, 0, 0, 0});
  s.mu.assign(s.n * s.n, 0);
  s.mc.assign(s.n * s.n, 0);
  for (int v = 0; v < s.n; ++v) s.vlab[v] = 2 * g.bulk_valence[v] + (side ? int((*side)[v]) : 0);
  auto bside = [&](int v) { return g.is_left(v) ? 0 : 1; };
  const auto ev = g.edge_vertices();
  for (std::size_t e = 0; e < ev.size(); ++e) {
    const int c = cut ? int((*cut)[e]) : 0;
    auto [a, b] = ev[e];
    const bool ba = g.is_bulk(a), bb = g.is_bulk(b);
    if (ba && bb) {
      s.m(c, a, b) += 1;
      if (a != b) s.m(c, b, a) += 1;
    } else if (ba || bb) {
      const int v = ba ? a : b, w = ba ? b : a;
      s.legs[v][2 * bside(w) + c] += 1;
    } else {
      const int k = bside(a) + bside(b);  // 0 LL, 1 LR, 2 RR
      s.e2[2 * k + c] += 1;
    }
  }
  return s;
}

struct CanonResult {
  std::vector<int> perm;  // position -> vertex
  std::vector<int> code;
  std::int64_t vertex_automorphisms = 0;
};

// Colour refinement followed by a lex-min search over orderings compatible
// with the refined cells. Every ordering reaching the minimum differs from
// the first by an automorphism, so their number is |Aut| on vertices.
CanonResult canonicalize(const Shape& s) {
  const int n = s.n;
  std::vector<std::vector<int>> sig(n);
  std::vector<int> colour(n, 0);
  for (int v = 0; v < n; ++v) {
    sig[v] = {s.vlab[v], s.legs[v][0], s.legs[v][1], s.legs[v][2], s.legs[v][3], s.m(0, v, v), s.m(1, v, v)};
  }
  auto relabel = [&]() {
    std::vector<std::vector<int>> keys = sig;
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    int classes = int(keys.size());
    for (int v = 0; v < n; ++v) colour[v] = int(std::lower_bound(keys.begin(), keys.end(), sig[v]) - keys.begin());
    return classes;
  };
  int classes = relabel();
  for (;;) {
    for (int v = 0; v < n; ++v) {
      std::vector<std::array<int, 3>> nb;
      for (int w = 0; w < n; ++w) {
        if (w == v) continue;
        if (s.m(0, v, w) || s.m(1, v, w)) nb.push_back({colour[w], s.m(0, v, w), s.m(1, v, w)});
      }
      std::sort(nb.begin(), nb.end());
      sig[v] = {colour[v]};
      for (auto& t : nb) sig[v].insert(sig[v].end(), t.begin(), t.end());
    }
    const int next = relabel();
    if (next == classes) break;
    classes = next;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return colour[a] < colour[b]; });
  std::vector<int> cell(n);
  for (int i = 0; i < n; ++i) cell[i] = colour[order[i]];

  std::vector<int> head;
  head.push_back(n);
  head.insert(head.end(), s.e2.begin(), s.e2.end());
  for (int i = 0; i < n; ++i) {
    const int v = order[i];
    head.push_back(s.vlab[v]);
    head.insert(head.end(), s.legs[v].begin(), s.legs[v].end());
  }

  CanonResult out;
  std::vector<int> best, cur, perm(n);
  std::vector<char> used(n, 0);
  bool have_best = false;
  std::int64_t count = 0;

  // Prefix comparison against the current best; the best may change while
  // a subtree is being explored, so the state is not inherited.
  auto compare = [&]() {
    for (std::size_t k = 0; k < cur.size(); ++k) {
      if (cur[k] != best[k]) return cur[k] < best[k] ? -1 : 1;
    }
    return 0;
  };
  std::function<void(int)> rec = [&](int depth) {
    if (depth == n) {
      const int c = have_best ? compare() : -1;
      if (c < 0) {
        best = cur;
        out.perm = perm;
        have_best = true;
        count = 1;
      } else if (c == 0) {
        ++count;
      }
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v] || colour[v] != cell[depth]) continue;
      const std::size_t mark = cur.size();
      for (int j = 0; j <= depth; ++j) {
        const int w = j == depth ? v : perm[j];
        cur.push_back(s.m(0, v, w));
        cur.push_back(s.m(1, v, w));
      }
      if (!have_best || compare() <= 0) {
        used[v] = 1;
        perm[depth] = v;
        rec(depth + 1);
        used[v] = 0;
      }
      cur.resize(mark);
    }
  };
  rec(0);
  if (n == 0) out.perm.clear();
  out.code = head;
  out.code.insert(out.code.end(), best.begin(), best.end());
  out.vertex_automorphisms = n == 0 ? 1 : count;
  return out;
}

std::int64_t aut_from_shape(const Shape& s) {
  std::int64_t a = canonicalize(s).vertex_automorphisms;
  for (int i = 0; i < s.n; ++i) {
    for (int k = 0; k < 4; ++k) a *= factorial(s.legs[i][k]);
    for (int c = 0; c < 2; ++c) {
      const int l = s.m(c, i, i);
      a *= factorial(l) * pow2(l);
      for (int j = i + 1; j < s.n; ++j) a *= factorial(s.m(c, i, j));
    }
  }
  for (int c = 0; c < 2; ++c) {
    a *= factorial(s.e2[c]) * pow2(s.e2[c]);          // LL
    a *= factorial(s.e2[2 + c]);                       // LR
    a *= factorial(s.e2[4 + c]) * pow2(s.e2[4 + c]);  // RR
  }
  return a;
}

// Rebuild a half-edge graph from a shape, vertices in the order given by perm.
DecoratedGraph build_from_shape(const Shape& s, const std::vector<int>& perm) {
  const int n = s.n;
  DecoratedGraph d;
  FeynmanGraph& g = d.graph;
  for (int i = 0; i < n; ++i) g.bulk_valence.push_back(s.vlab[perm[i]] / 2);
  int nl = 0, nr = 0;
  for (int i = 0; i < n; ++i) nl += s.legs[i][0] + s.legs[i][1], nr += s.legs[i][2] + s.legs[i][3];
  for (int c = 0; c < 2; ++c) {
    nl += 2 * s.e2[c] + s.e2[2 + c];
    nr += 2 * s.e2[4 + c] + s.e2[2 + c];
  }
  g.n_left = nl;
  g.n_right = nr;
  std::vector<int> next(n);
  int h = 0;
  for (int i = 0; i < n; ++i) next[i] = h, h += g.bulk_valence[i];
  int next_l = h, next_r = h + nl;
  std::vector<Side> side(g.num_vertices());
  for (int i = 0; i < n; ++i) side[i] = Side(s.vlab[perm[i]] % 2);
  for (int v = n; v < n + nl; ++v) side[v] = Side::L;
  for (int v = n + nl; v < n + nl + nr; ++v) side[v] = Side::R;
  auto add = [&](int a, int b, int c) {
    g.pairs.emplace_back(a, b);
    d.cut.push_back(c != 0);
  };
  for (int i = 0; i < n; ++i) {
    const int vi = perm[i];
    for (int c = 0; c < 2; ++c) {
      for (int k = 0; k < s.m(c, vi, vi); ++k) {
        add(next[i], next[i] + 1, c);
        next[i] += 2;
      }
    }
    for (int j = i + 1; j < n; ++j) {
      for (int c = 0; c < 2; ++c) {
        for (int k = 0; k < s.m(c, vi, perm[j]); ++k) add(next[i]++, next[j]++, c);
      }
    }
    for (int k = 0; k < 4; ++k) {
      for (int t = 0; t < s.legs[vi][k]; ++t) add(next[i]++, k < 2 ? next_l++ : next_r++, k % 2);
    }
  }
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < s.e2[c]; ++k) add(next_l, next_l + 1, c), next_l += 2;
    for (int k = 0; k < s.e2[2 + c]; ++k) add(next_l++, next_r++, c);
    for (int k = 0; k < s.e2[4 + c]; ++k) add(next_r, next_r + 1, c), next_r += 2;
  }
  d.side = side;
  return d;
}

// Generic brute-force automorphism count on the half-edge model. Vertex
// classes (kind + side) and edge cut flags must be preserved.
std::int64_t bruteforce(const FeynmanGraph& g, const std::vector<Side>* side, const std::vector<bool>* cut) {
  const int H = g.num_half_edges();
  const int V = g.num_vertices();
  std::vector<int> vof(H), partner(H), edge_of(H);
  for (int h = 0; h < H; ++h) vof[h] = g.vertex_of(h);
  for (std::size_t e = 0; e < g.pairs.size(); ++e) {
    auto [a, b] = g.pairs[e];
    partner[a] = b, partner[b] = a;
    edge_of[a] = edge_of[b] = int(e);
  }
  auto vclass = [&](int v) {
    int k = g.is_bulk(v) ? 2 * g.bulk_valence[v] + 100 : (g.is_left(v) ? 0 : 1);
    if (side && g.is_bulk(v)) k += 1000 * int((*side)[v]);
    return k;
  };
  std::vector<int> hmap(H, -1), vmap(V, -1), vinv(V, -1);
  std::vector<char> hused(H, 0);
  std::int64_t count = 0;
  std::function<void(int)> rec = [&](int h) {
    while (h < H && hmap[h] >= 0) ++h;
    if (h == H) {
      ++count;
      return;
    }
    const int v = vof[h];
    for (int t = 0; t < H; ++t) {
      if (hused[t]) continue;
      const int w = vof[t];
      if (vclass(w) != vclass(v)) continue;
      if (vmap[v] >= 0 ? vmap[v] != w : vinv[w] >= 0) continue;
      // partner constraint
      const int hp = partner[h];
      const int tp = partner[t];
      if (cut && (*cut)[edge_of[h]] != (*cut)[edge_of[t]]) continue;
      const bool set_v = vmap[v] < 0;
      if (set_v) vmap[v] = w, vinv[w] = v;
      hmap[h] = t, hused[t] = 1;
      bool ok = true;
      bool set_p = false, set_pv = false;
      if (hmap[hp] >= 0) {
        ok = hmap[hp] == tp;
      } else if (hused[tp]) {
        ok = false;
      } else {
        const int vp = vof[hp], wp = vof[tp];
        if (vclass(vp) != vclass(wp)) ok = false;
        else if (vmap[vp] >= 0) ok = vmap[vp] == wp;
        else if (vinv[wp] >= 0) ok = false;
        else vmap[vp] = wp, vinv[wp] = vp, set_pv = true;
        if (ok) hmap[hp] = tp, hused[tp] = 1, set_p = true;
      }
      if (ok) rec(h + 1);
      if (set_p) hmap[hp] = -1, hused[tp] = 0;
      if (set_pv) vinv[vmap[vof[hp]]] = -1, vmap[vof[hp]] = -1;
      hmap[h] = -1, hused[t] = 0;
      if (set_v) vinv[w] = -1, vmap[v] = -1;
    }
  };
  rec(0);
  // Isolated vertices cannot occur: every vertex has at least one half-edge.
  return count;
}

void expect(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

// ---------------------------------------------------------------- FeynmanGraph

int FeynmanGraph::num_half_edges() const {
  return std::accumulate(bulk_valence.begin(), bulk_valence.end(), 0) + n_left + n_right;
}

int FeynmanGraph::vertex_of(int h) const {
  int start = 0;
  for (int v = 0; v < num_bulk(); ++v) {
    if (h < start + bulk_valence[v]) return v;
    start += bulk_valence[v];
  }
  const int rest = h - start;
  expect(rest >= 0 && rest < n_left + n_right, "half-edge index out of range");
  return num_bulk() + rest;
}

std::vector<std::pair<int, int>> FeynmanGraph::edge_vertices() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(pairs.size());
  for (auto [a, b] : pairs) out.emplace_back(vertex_of(a), vertex_of(b));
  return out;
}

bool FeynmanGraph::has_short_loop() const {
  for (auto [a, b] : edge_vertices()) {
    if (a == b) return true;
  }
  return false;
}

void FeynmanGraph::validate() const {
  for (int v : bulk_valence) expect(v >= 1, "bulk valence must be positive");
  expect(n_left >= 0 && n_right >= 0, "negative boundary count");
  const int H = num_half_edges();
  expect(int(pairs.size()) * 2 == H, "pairs must cover every half-edge exactly once");
  std::vector<char> seen(H, 0);
  for (auto [a, b] : pairs) {
    expect(a >= 0 && a < H && b >= 0 && b < H, "half-edge index out of range");
    expect(a != b, "involution has a fixed point");
    expect(!seen[a] && !seen[b], "half-edge paired twice");
    seen[a] = seen[b] = 1;
  }
}

std::string FeynmanGraph::to_string() const {
  std::ostringstream os;
  os << "V_b=[";
  for (std::size_t i = 0; i < bulk_valence.size(); ++i) os << (i ? "," : "") << bulk_valence[i];
  os << "];V_L=" << n_left << ";V_R=" << n_right << ";pairs=[";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    os << (i ? "," : "") << "(" << pairs[i].first << "," << pairs[i].second << ")";
  }
  os << "]";
  return os.str();
}

FeynmanGraph FeynmanGraph::parse(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  }
  FeynmanGraph g;
  auto field = [&](const std::string& key) -> std::string {
    const auto p = t.find(key + "=");
    expect(p != std::string::npos, "graph text is missing " + key);
    const auto start = p + key.size() + 1;
    auto end = t.find(';', start);
    if (end == std::string::npos) end = t.size();
    return t.substr(start, end - start);
  };
  auto ints = [&](const std::string& s) {
    std::vector<int> out;
    std::string num;
    for (char c : s) {
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
        num.push_back(c);
      } else if (!num.empty()) {
        out.push_back(std::stoi(num));
        num.clear();
      }
    }
    if (!num.empty()) out.push_back(std::stoi(num));
    return out;
  };
  try {
    g.bulk_valence = ints(field("V_b"));
    g.n_left = std::stoi(field("V_L"));
    g.n_right = std::stoi(field("V_R"));
    const auto p = ints(field("pairs"));
    expect(p.size() % 2 == 0, "pairs list has odd length");
    for (std::size_t i = 0; i < p.size(); i += 2) g.pairs.emplace_back(p[i], p[i + 1]);
  } catch (const std::invalid_argument&) {
    throw DomainError("malformed graph text: " + text);
  }
  g.validate();
  return g;
}

// ---------------------------------------------------------------- decorations

bool DecoratedGraph::admissible() const {
  if (int(side.size()) != graph.num_vertices() || int(cut.size()) != graph.num_edges()) return false;
  for (int v = graph.num_bulk(); v < graph.num_vertices(); ++v) {
    if (side[v] != (graph.is_left(v) ? Side::L : Side::R)) return false;
  }
  const auto ev = graph.edge_vertices();
  for (std::size_t e = 0; e < ev.size(); ++e) {
    if (side[ev[e].first] != side[ev[e].second] && !cut[e]) return false;
  }
  return true;
}

std::string DecoratedGraph::to_string() const {
  std::ostringstream os;
  os << graph.to_string() << ";sides=";
  for (int v = 0; v < graph.num_bulk(); ++v) os << (side[v] == Side::L ? 'L' : 'R');
  os << ";cut=[";
  bool first = true;
  for (std::size_t e = 0; e < cut.size(); ++e) {
    if (cut[e]) os << (first ? "" : ",") << e, first = false;
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- canon / aut

Canon canonical_form(const FeynmanGraph& g) { return {canonicalize(make_shape(g, nullptr, nullptr)).code}; }

Canon canonical_form(const DecoratedGraph& d) {
  expect(d.admissible(), "decoration is not admissible");
  auto code = canonicalize(make_shape(d.graph, &d.side, &d.cut)).code;
  code.insert(code.begin(), 1);
  return {code};
}

FeynmanGraph canonical_graph(const FeynmanGraph& g) {
  const Shape s = make_shape(g, nullptr, nullptr);
  return build_from_shape(s, canonicalize(s).perm).graph;
}

std::int64_t aut_order(const FeynmanGraph& g) { return aut_from_shape(make_shape(g, nullptr, nullptr)); }

std::int64_t aut_order(const DecoratedGraph& d) {
  expect(d.admissible(), "decoration is not admissible");
  return aut_from_shape(make_shape(d.graph, &d.side, &d.cut));
}

std::int64_t aut_order_bruteforce(const FeynmanGraph& g) { return bruteforce(g, nullptr, nullptr); }

std::int64_t aut_order_bruteforce(const DecoratedGraph& d) { return bruteforce(d.graph, &d.side, &d.cut); }

Rational loop_order(const FeynmanGraph& g) {
  return Rational(2 * g.num_edges() - 2 * g.num_bulk() - g.n_left - g.n_right, 2);
}

// ---------------------------------------------------------------- enumeration

namespace {

using Found = std::map<std::vector<int>, FeynmanGraph>;

// All multigraphs on the given bulk vertices (sorted valences) with exactly
// n_left / n_right univalent boundary vertices, inserted by canonical code.
void fill_shapes(const std::vector<int>& vs, int n_left, int n_right, bool allow_short_loops, bool allow_boundary_edges,
                 Found& found) {
  Shape s;
  s.n = int(vs.size());
  s.vlab.resize(s.n);
  for (int i = 0; i < s.n; ++i) s.vlab[i] = 2 * vs[i];
  s.legs.assign(s.n, {0, 0, 0, 0});
  s.mu.assign(s.n * s.n, 0);
  s.mc.assign(s.n * s.n, 0);
  std::vector<int> rem = vs;
  int remL = n_left, remR = n_right;

  auto finish = [&]() {
    for (int k = 0; k <= std::min(remL, remR); ++k) {
      if ((remL - k) % 2 || (remR - k) % 2) continue;
      s.e2 = {(remL - k) / 2, 0, k, 0, (remR - k) / 2, 0};
      if (!allow_boundary_edges && (remL || remR)) continue;
      if (s.n == 0 && n_left + n_right == 0) continue;  // empty graph
      const CanonResult c = canonicalize(s);
      if (!found.count(c.code)) found.emplace(c.code, build_from_shape(s, c.perm).graph);
    }
  };

  // vertex i; j == i chooses loops, i < j < n partners, j == n legs
  std::function<void(int, int)> rec = [&](int i, int j) {
    if (i == s.n) {
      finish();
      return;
    }
    if (j == i) {
      const int max_loops = allow_short_loops ? rem[i] / 2 : 0;
      for (int l = 0; l <= max_loops; ++l) {
        s.m(0, i, i) = l;
        rem[i] -= 2 * l;
        rec(i, i + 1);
        rem[i] += 2 * l;
      }
      s.m(0, i, i) = 0;
      return;
    }
    if (j < s.n) {
      for (int k = 0; k <= std::min(rem[i], rem[j]); ++k) {
        s.m(0, i, j) = s.m(0, j, i) = k;
        rem[i] -= k, rem[j] -= k;
        rec(i, j + 1);
        rem[i] += k, rem[j] += k;
      }
      s.m(0, i, j) = s.m(0, j, i) = 0;
      return;
    }
    for (int a = 0; a <= std::min(rem[i], remL); ++a) {
      const int b = rem[i] - a;
      if (b > remR) continue;
      s.legs[i] = {a, 0, b, 0};
      remL -= a, remR -= b;
      const int saved = rem[i];
      rem[i] = 0;
      rec(i + 1, i + 1);
      rem[i] = saved;
      remL += a, remR += b;
    }
    s.legs[i] = {0, 0, 0, 0};
  };
  rec(0, 0);
}

std::vector<FeynmanGraph> collect(Found& found) {
  std::vector<FeynmanGraph> out;
  out.reserve(found.size());
  for (auto& [code, g] : found) out.push_back(std::move(g));
  std::stable_sort(out.begin(), out.end(),
                   [](const FeynmanGraph& a, const FeynmanGraph& b) { return a.num_half_edges() < b.num_half_edges(); });
  return out;
}

}  // namespace

std::vector<FeynmanGraph> enumerate_graphs(int max_half_edges, const std::vector<int>& valences_in, int n_left,
                                           int n_right, bool allow_short_loops) {
  expect(max_half_edges >= 0 && n_left >= 0 && n_right >= 0, "negative enumeration bound");
  std::vector<int> valences = valences_in;
  std::sort(valences.begin(), valences.end());
  valences.erase(std::unique(valences.begin(), valences.end()), valences.end());
  for (int v : valences) expect(v >= 1, "valences must be positive");

  Found found;
  std::vector<int> vals;
  const int budget = max_half_edges - n_left - n_right;
  std::function<void(std::size_t, int)> choose = [&](std::size_t from, int used) {
    if ((used + n_left + n_right) % 2 == 0) fill_shapes(vals, n_left, n_right, allow_short_loops, true, found);
    for (std::size_t k = from; k < valences.size(); ++k) {
      if (used + valences[k] > budget) break;
      vals.push_back(valences[k]);
      choose(k, used + valences[k]);
      vals.pop_back();
    }
  };
  if (budget >= 0) choose(0, 0);
  return collect(found);
}

std::vector<FeynmanGraph> enumerate_graphs_with(const std::vector<int>& bulk_valences, int n_left, int n_right,
                                                bool allow_short_loops, bool allow_boundary_edges) {
  expect(n_left >= 0 && n_right >= 0, "negative boundary count");
  std::vector<int> vs = bulk_valences;
  for (int v : vs) expect(v >= 1, "valences must be positive");
  std::sort(vs.begin(), vs.end());
  Found found;
  if ((std::accumulate(vs.begin(), vs.end(), 0) + n_left + n_right) % 2 == 0) {
    fill_shapes(vs, n_left, n_right, allow_short_loops, allow_boundary_edges, found);
  }
  return collect(found);
}

DecorationCensus enumerate_decorations(const FeynmanGraph& g) {
  g.validate();
  const int nb = g.num_bulk();
  const auto ev = g.edge_vertices();
  const int ne = int(ev.size());
  expect(nb + ne <= 40, "graph too large for explicit decoration census");
  DecorationCensus census;
  census.aut = aut_order(g);
  std::map<std::vector<int>, std::size_t> index;
  DecoratedGraph d;
  d.graph = g;
  d.side.assign(g.num_vertices(), Side::L);
  for (int v = nb; v < g.num_vertices(); ++v) d.side[v] = g.is_left(v) ? Side::L : Side::R;
  d.cut.assign(ne, false);
  for (std::uint64_t vmask = 0; vmask < (std::uint64_t(1) << nb); ++vmask) {
    for (int v = 0; v < nb; ++v) d.side[v] = Side((vmask >> v) & 1);
    std::vector<int> free_edges;
    for (int e = 0; e < ne; ++e) {
      const bool forced = d.side[ev[e].first] != d.side[ev[e].second];
      d.cut[e] = forced;
      if (!forced) free_edges.push_back(e);
    }
    const int nf = int(free_edges.size());
    for (std::uint64_t emask = 0; emask < (std::uint64_t(1) << nf); ++emask) {
      for (int k = 0; k < nf; ++k) d.cut[free_edges[k]] = (emask >> k) & 1;
      ++census.total;
      const Canon c = canonical_form(d);
      auto it = index.find(c.code);
      if (it == index.end()) {
        index.emplace(c.code, census.orbits.size());
        census.orbits.push_back({d, 1, aut_order(d)});
      } else {
        census.orbits[it->second].orbit_size += 1;
      }
    }
  }
  return census;
}

DecorationCheck check_decorations(const FeynmanGraph& g) {
  const DecorationCensus c = enumerate_decorations(g);
  DecorationCheck out;
  Rational sum(0);
  for (const auto& o : c.orbits) {
    sum += Rational(1, o.stabilizer);
    out.orbit_stabilizer_residual =
        std::max(out.orbit_stabilizer_residual, std::abs(o.orbit_size * o.stabilizer - c.aut));
  }
  out.identity_residual = boost::abs(sum - Rational(c.total, c.aut));
  return out;
}

// ---------------------------------------------------------------- gluing

std::int64_t double_factorial_odd(int two_k) {
  std::int64_t r = 1;
  for (int k = two_k - 1; k > 1; k -= 2) r *= k;
  return r;
}

std::vector<GluedTerm> glue_graphs(const FeynmanGraph& gL, const FeynmanGraph& gR) {
  gL.validate();
  gR.validate();
  const auto evL = gL.edge_vertices();
  const auto evR = gR.edge_vertices();
  for (auto [a, b] : evL) expect(!(gL.is_right(a) && gL.is_right(b)), "left graph has a V_R-V_R edge");
  for (auto [a, b] : evR) expect(!(gR.is_left(a) && gR.is_left(b)), "right graph has a V_L-V_L edge");

  // Glued vertex numbering: bulk(gL), bulk(gR), V_L(gL), V_R(gR).
  const int bl = gL.num_bulk(), br = gR.num_bulk();
  const int outL = gL.n_left, outR = gR.n_right;
  auto mapL = [&](int v) { return gL.is_bulk(v) ? v : bl + br + (v - bl); };  // bulk or outer V_L
  auto mapR = [&](int v) { return gR.is_bulk(v) ? bl + v : bl + br + outL + (v - br - gR.n_left); };

  std::vector<std::pair<int, int>> kept;  // glued vertex pairs, uncut
  std::vector<int> iface_nb;              // glued neighbour of each interface vertex
  std::vector<int> nbL(gL.num_vertices(), -1), nbR(gR.num_vertices(), -1);
  for (auto [a, b] : evL) {
    if (gL.is_right(a)) nbL[a] = mapL(b);
    else if (gL.is_right(b)) nbL[b] = mapL(a);
    else kept.emplace_back(mapL(a), mapL(b));
  }
  for (auto [a, b] : evR) {
    if (gR.is_left(a)) nbR[a] = mapR(b);
    else if (gR.is_left(b)) nbR[b] = mapR(a);
    else kept.emplace_back(mapR(a), mapR(b));
  }
  for (int v = bl + gL.n_left; v < gL.num_vertices(); ++v) iface_nb.push_back(nbL[v]);
  for (int v = br; v < br + gR.n_left; ++v) iface_nb.push_back(nbR[v]);
  const int k = int(iface_nb.size());
  if (k % 2) return {};

  std::vector<int> valence;
  for (int v : gL.bulk_valence) valence.push_back(v);
  for (int v : gR.bulk_valence) valence.push_back(v);
  const int nb = bl + br;
  const int nv = nb + outL + outR;

  auto assemble = [&](const std::vector<std::pair<int, int>>& cuts) {
    // Build a half-edge graph from vertex-level edges.
    DecoratedGraph d;
    FeynmanGraph& g = d.graph;
    g.bulk_valence = valence;
    g.n_left = outL;
    g.n_right = outR;
    std::vector<int> next(nv);
    int h = 0;
    for (int v = 0; v < nb; ++v) next[v] = h, h += valence[v];
    for (int v = nb; v < nv; ++v) next[v] = h++;
    auto add = [&](int a, int b, bool c) {
      g.pairs.emplace_back(next[a]++, next[b]++);
      d.cut.push_back(c);
    };
    for (auto [a, b] : kept) add(a, b, false);
    for (auto [a, b] : cuts) add(a, b, true);
    d.side.assign(nv, Side::L);
    for (int v = bl; v < nb; ++v) d.side[v] = Side::R;
    for (int v = nb + outL; v < nv; ++v) d.side[v] = Side::R;
    return d;
  };

  std::map<std::vector<int>, std::size_t> index;
  std::vector<GluedTerm> out;
  std::vector<char> used(k, 0);
  std::vector<std::pair<int, int>> cuts;
  std::function<void()> rec = [&]() {
    int i = 0;
    while (i < k && used[i]) ++i;
    if (i == k) {
      DecoratedGraph d = assemble(cuts);
      const Canon c = canonical_form(d);
      auto it = index.find(c.code);
      if (it == index.end()) {
        index.emplace(c.code, out.size());
        out.push_back({std::move(d), 1});
      } else {
        out[it->second].multiplicity += 1;
      }
      return;
    }
    used[i] = 1;
    for (int j = i + 1; j < k; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      cuts.emplace_back(iface_nb[i], iface_nb[j]);
      rec();
      cuts.pop_back();
      used[j] = 0;
    }
    used[i] = 0;
  };
  rec();
  return out;
}

std::pair<FeynmanGraph, FeynmanGraph> cut_graph(const DecoratedGraph& d) {
  expect(d.admissible(), "decoration is not admissible");
  const FeynmanGraph& g = d.graph;
  const auto ev = g.edge_vertices();
  // Per side: vertex lists in glued numbering.
  std::array<std::vector<int>, 2> bulk, outer;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const int s = int(d.side[v]);
    (g.is_bulk(v) ? bulk[s] : outer[s]).push_back(v);
  }
  std::array<FeynmanGraph, 2> piece;
  std::array<std::vector<std::pair<int, int>>, 2> edges;  // local vertex ids
  std::array<std::vector<int>, 2> local;
  for (int s = 0; s < 2; ++s) local[s].assign(g.num_vertices(), -1);
  std::array<int, 2> new_legs{0, 0};
  for (int s = 0; s < 2; ++s) {
    for (int v : bulk[s]) local[s][v] = int(piece[s].bulk_valence.size()), piece[s].bulk_valence.push_back(g.bulk_valence[v]);
  }
  // count new legs first so the boundary blocks can be laid out
  for (std::size_t e = 0; e < ev.size(); ++e) {
    if (!d.cut[e]) continue;
    new_legs[int(d.side[ev[e].first])] += 1;
    new_legs[int(d.side[ev[e].second])] += 1;
  }
  // Left piece: outer L vertices are V_L, new legs are V_R. Right piece:
  // new legs are V_L, outer R vertices are V_R.
  piece[0].n_left = int(outer[0].size());
  piece[0].n_right = new_legs[0];
  piece[1].n_left = new_legs[1];
  piece[1].n_right = int(outer[1].size());
  {
    int k = 0;
    for (int v : outer[0]) local[0][v] = piece[0].num_bulk() + k++;
    k = 0;
    for (int v : outer[1]) local[1][v] = piece[1].num_bulk() + piece[1].n_left + k++;
  }
  std::array<int, 2> leg_next{piece[0].num_bulk() + piece[0].n_left, piece[1].num_bulk()};
  for (std::size_t e = 0; e < ev.size(); ++e) {
    auto [a, b] = ev[e];
    if (!d.cut[e]) {
      const int s = int(d.side[a]);
      edges[s].emplace_back(local[s][a], local[s][b]);
      continue;
    }
    for (int x : {a, b}) {
      const int s = int(d.side[x]);
      edges[s].emplace_back(local[s][x], leg_next[s]++);
    }
  }
  for (int s = 0; s < 2; ++s) {
    FeynmanGraph& p = piece[s];
    std::vector<int> next(p.num_vertices());
    int h = 0;
    for (int v = 0; v < p.num_bulk(); ++v) next[v] = h, h += p.bulk_valence[v];
    for (int v = p.num_bulk(); v < p.num_vertices(); ++v) next[v] = h++;
    for (auto [a, b] : edges[s]) p.pairs.emplace_back(next[a]++, next[b]++);
    p.validate();
  }
  return {canonical_graph(piece[0]), canonical_graph(piece[1])};
}

std::int64_t auto_gluing_residual(const FeynmanGraph& gL, const FeynmanGraph& gR) {
  const std::int64_t target = aut_order(gL) * aut_order(gR);
  std::int64_t worst = 0;
  for (const auto& t : glue_graphs(gL, gR)) worst = std::max(worst, std::abs(t.multiplicity * aut_order(t.graph) - target));
  return worst;
}

bool gluing_roundtrip(const FeynmanGraph& gL, const FeynmanGraph& gR) {
  const Canon cl = canonical_form(gL), cr = canonical_form(gR);
  for (const auto& t : glue_graphs(gL, gR)) {
    auto [a, b] = cut_graph(t.graph);
    if (canonical_form(a) != cl || canonical_form(b) != cr) return false;
  }
  return true;
}

}  // namespace zqft::graph
