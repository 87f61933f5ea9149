#include "zqft/pertpart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "zqft/errors.hpp"
#include "zqft/quadrature.hpp"
#include "zqft/zetareg.hpp"

namespace zqft::pert {

namespace {

using Poly = std::map<std::vector<int>, HbarSeries>;

void poly_add(Poly& p, const std::vector<int>& e, const HbarSeries& c) {
  auto it = p.find(e);
  if (it == p.end()) p.emplace(e, c);
  else it->second += c;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      poly_add(r, e, ca * cb);
    }
  }
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double odd_double_factorial(int i) {  // (i - 1)!! for even i
  double r = 1.0;
  for (int k = i - 1; k > 1; k -= 2) r *= k;
  return r;
}

bool is_interval(const Geometry& g) { return g.kind == Kind::Interval; }

void require_1d(const Geometry& g) {
  if (g.kind != Kind::Interval && g.kind != Kind::Circle) {
    throw UnsupportedError("interacting partition functions are implemented on intervals and circles only, got " +
                           g.to_string());
  }
}

// Shift an hbar series down by two half-steps (divide by hbar).
HbarSeries divide_by_hbar(const HbarSeries& s) {
  if (s[0] != 0.0 || s[1] != 0.0) throw UnsupportedError("p_0 must be O(hbar) to be resummed");
  HbarSeries r(s.twice_kmax());
  for (int j = 2; j <= s.twice_kmax(); ++j) r.at(j - 2) = s[j];
  return r;
}

// hbar^{s/2} * x for either sign of s; low-valence couplings carry the
// compensating powers of hbar themselves.
HbarSeries shift_signed(const HbarSeries& x, int s) {
  if (s >= 0) return x.shifted(s);
  if (x.valuation() < -s) throw UnsupportedError("graph of negative hbar order");
  HbarSeries r(x.twice_kmax());
  for (int j = -s; j <= x.twice_kmax(); ++j) r.at(j + s) = x[j];
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Potential

Potential Potential::zero(int twice_kmax) {
  Potential p;
  p.twice_kmax = twice_kmax;
  return p;
}

Potential Potential::monomial(int k, double c, int twice_kmax) {
  Potential p = zero(twice_kmax);
  p.set(k, c);
  return p;
}

Potential Potential::parse(std::string_view spec, int twice_kmax) {
  Potential pot = zero(twice_kmax);
  std::string s(spec);
  if (s.empty() || s == "0" || s == "free") return pot;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (item.size() < 3 || item[0] != 'p' || eq == std::string::npos) {
      throw DomainError("potential term must look like p3=1, got '" + item + "'");
    }
    try {
      std::size_t used = 0;
      const int k = std::stoi(item.substr(1, eq - 1), &used);
      if (used != eq - 1 || k < 0) throw std::invalid_argument("index");
      const double c = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("value");
      pot.set(k, pot.coeff(k) + HbarSeries::constant(c, twice_kmax));
    } catch (const std::logic_error&) {
      throw DomainError("malformed potential term '" + item + "'");
    }
  }
  return pot;
}

int Potential::degree() const {
  for (int k = int(p.size()) - 1; k >= 0; --k) {
    if (!p[k].is_zero()) return k;
  }
  return -1;
}

HbarSeries Potential::coeff(int k) const {
  if (k >= 0 && k < int(p.size())) return p[k].truncated(twice_kmax);
  return HbarSeries(twice_kmax);
}

void Potential::set(int k, const HbarSeries& c) {
  if (k < 0) throw DomainError("negative potential index");
  if (int(p.size()) <= k) p.resize(k + 1, HbarSeries(twice_kmax));
  p[k] = c.truncated(twice_kmax);
}

void Potential::validate() const {
  if (low_valence) return;
  for (int k = 0; k <= 2; ++k) {
    if (!coeff(k).is_zero()) {
      throw UnsupportedError("p_0, p_1, p_2 must vanish (reduce the potential or enable low-valence mode)");
    }
  }
}

std::string Potential::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < int(p.size()); ++k) {
    if (p[k].is_zero()) continue;
    os << (first ? "" : " + ") << "(" << p[k].to_string() << ") phi^" << k << "/" << k << "!";
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------- TadpoleField

TadpoleField TadpoleField::zero() { return {}; }

TadpoleField TadpoleField::constant(double c) {
  std::ostringstream os;
  os.precision(15);
  os << "constant(" << c << ")";
  if (c == 0.0) return zero();
  return {os.str(), [c](double) { return c; }};
}

TadpoleField TadpoleField::local(const Geometry& g, double m) {
  if (g.kind == Kind::Interval) {
    const double l = g.a;
    return {"local", [l, m](double x) { return std::sinh(m * x) * std::sinh(m * (l - x)) / (m * std::sinh(m * l)); }};
  }
  if (g.kind == Kind::Circle) {
    const double c = 1.0 / (2.0 * m * std::tanh(0.5 * m * g.a));
    return {"local", [c](double) { return c; }};
  }
  throw UnsupportedError("1D local tadpole requested on " + g.to_string());
}

TadpoleField TadpoleField::glued_correction(const dn::Gluing& gl, double m) {
  if (gl.kind != dn::GlueKind::IntervalChain && gl.kind != dn::GlueKind::CircleFromArcs) {
    throw UnsupportedError("glued tadpole field is 1D only");
  }
  return {"interface", [gl, m](double x) { return dn::interface_correction(gl, m, {x, 0.0}, {x, 0.0}); }};
}

TadpoleField TadpoleField::function(std::string name, std::function<double(double)> f) {
  return {std::move(name), std::move(f)};
}

// ---------------------------------------------------------------- BoundaryState

BoundaryState BoundaryState::unit(std::vector<std::string> points, int twice_kmax) {
  BoundaryState s;
  s.points = std::move(points);
  s.quad.assign(s.points.size() * s.points.size(), 0.0);
  s.twice_kmax = twice_kmax;
  s.poly.emplace(std::vector<int>(s.points.size(), 0), HbarSeries::constant(1.0, twice_kmax));
  return s;
}

int BoundaryState::index(const std::string& point) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] == point) return int(i);
  }
  return -1;
}

void BoundaryState::add(const std::vector<int>& e, const HbarSeries& c) {
  if (e.size() != points.size()) throw DomainError("monomial arity does not match the boundary points");
  poly_add(poly, e, c.truncated(twice_kmax));
}

int BoundaryState::max_degree() const {
  int d = 0;
  for (const auto& [e, c] : poly) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

HbarSeries BoundaryState::evaluate(const std::vector<double>& eta) const {
  if (eta.size() != points.size()) throw DomainError("boundary value count does not match the state");
  const std::size_t n = points.size();
  double quadform = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) quadform += eta[i] * quad[i * n + j] * eta[j];
  }
  HbarSeries sum(twice_kmax);
  for (const auto& [e, c] : poly) {
    double mono = 1.0;
    for (std::size_t i = 0; i < n; ++i) mono *= std::pow(eta[i], e[i]);
    sum += c * mono;
  }
  return sum * (scale * std::exp(-0.5 * quadform));
}

HbarSeries BoundaryState::evaluate_named(const std::map<std::string, double>& eta) const {
  std::vector<double> v(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto it = eta.find(points[i]);
    if (it == eta.end()) throw DomainError("no boundary value given for point " + points[i]);
    v[i] = it->second;
  }
  return evaluate(v);
}

BoundaryState multiply(const BoundaryState& a, const BoundaryState& b) {
  BoundaryState r;
  r.points = a.points;
  for (const auto& p : b.points) {
    if (r.index(p) < 0) r.points.push_back(p);
  }
  const std::size_t n = r.points.size();
  r.twice_kmax = std::min(a.twice_kmax, b.twice_kmax);
  r.scale = a.scale * b.scale;
  r.quad.assign(n * n, 0.0);
  std::vector<int> mb(b.points.size());
  for (std::size_t i = 0; i < b.points.size(); ++i) mb[i] = r.index(b.points[i]);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    for (std::size_t j = 0; j < a.points.size(); ++j) r.quad[i * n + j] += a.q(int(i), int(j));
  }
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    for (std::size_t j = 0; j < b.points.size(); ++j) r.quad[mb[i] * n + mb[j]] += b.q(int(i), int(j));
  }
  Poly pa, pb;
  for (const auto& [e, c] : a.poly) {
    std::vector<int> x(n, 0);
    std::copy(e.begin(), e.end(), x.begin());
    poly_add(pa, x, c.truncated(r.twice_kmax));
  }
  for (const auto& [e, c] : b.poly) {
    std::vector<int> x(n, 0);
    for (std::size_t i = 0; i < e.size(); ++i) x[mb[i]] += e[i];
    poly_add(pb, x, c.truncated(r.twice_kmax));
  }
  r.poly = poly_mul(pa, pb);
  return r;
}

BoundaryState integrate_point(const BoundaryState& s, const std::string& point, double extra, double c) {
  const int j = s.index(point);
  if (j < 0) throw DomainError("state has no boundary point " + point);
  const int n = int(s.points.size());
  const double A = s.q(j, j) + extra;
  if (!(A > 0.0)) throw DomainError("interface quadratic form is not positive definite");
  if (!(c > 0.0)) throw DomainError("gluing constant must be positive");

  std::vector<int> others;
  for (int i = 0; i < n; ++i) {
    if (i != j) others.push_back(i);
  }
  const int no = int(others.size());
  BoundaryState r;
  r.twice_kmax = s.twice_kmax;
  for (int o : others) r.points.push_back(s.points[o]);
  r.quad.assign(no * no, 0.0);
  for (int a = 0; a < no; ++a) {
    for (int b = 0; b < no; ++b) {
      r.quad[a * no + b] = s.q(others[a], others[b]) - s.q(j, others[a]) * s.q(j, others[b]) / A;
    }
  }
  r.scale = s.scale / std::sqrt(c * A);

  // y = xi - sum_o (Q_jo / A) eta_o; powers of the shift as polynomials
  int kmax = 0;
  for (const auto& [e, cc] : s.poly) kmax = std::max(kmax, e[j]);
  Poly shift;
  for (int a = 0; a < no; ++a) {
    const double coef = -s.q(j, others[a]) / A;
    if (coef == 0.0) continue;
    std::vector<int> e(no, 0);
    e[a] = 1;
    poly_add(shift, e, HbarSeries::constant(coef, s.twice_kmax));
  }
  std::vector<Poly> shift_pow(kmax + 1);
  shift_pow[0].emplace(std::vector<int>(no, 0), HbarSeries::constant(1.0, s.twice_kmax));
  for (int k = 1; k <= kmax; ++k) shift_pow[k] = poly_mul(shift_pow[k - 1], shift);

  for (const auto& [e, coef] : s.poly) {
    const int k = e[j];
    std::vector<int> rest(no);
    for (int a = 0; a < no; ++a) rest[a] = e[others[a]];
    for (int i = 0; i <= k; i += 2) {
      const double w = binomial(k, i) * odd_double_factorial(i) * std::pow(A, -0.5 * i);
      for (const auto& [es, cs] : shift_pow[k - i]) {
        std::vector<int> x = rest;
        for (int a = 0; a < no; ++a) x[a] += es[a];
        poly_add(r.poly, x, coef * cs * w);
      }
    }
  }
  return r;
}

BoundaryState hat(const BoundaryState& s, const std::vector<std::string>& points, std::vector<double>* removed) {
  BoundaryState r = s;
  if (removed) removed->clear();
  for (const auto& p : points) {
    const int i = r.index(p);
    if (i < 0) throw DomainError("state has no boundary point " + p);
    if (removed) removed->push_back(r.q(i, i));
    r.q(i, i) = 0.0;
  }
  return r;
}

BoundaryState unhat(const BoundaryState& s, const std::vector<std::string>& points, const std::vector<double>& diag) {
  if (points.size() != diag.size()) throw DomainError("unhat needs one diagonal entry per point");
  BoundaryState r = s;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const int i = r.index(points[k]);
    if (i < 0) throw DomainError("state has no boundary point " + points[k]);
    r.q(i, i) += diag[k];
  }
  return r;
}

BoundaryState pairing_dn(const BoundaryState& left, const BoundaryState& right, const std::string& point,
                         double d_left, double d_right, double c) {
  return integrate_point(multiply(left, right), point, d_left + d_right, c);
}

BoundaryState bar(const BoundaryState& s, double m) {
  BoundaryState r = s;
  for (std::size_t i = 0; i < r.points.size(); ++i) r.q(int(i), int(i)) -= m;
  return r;
}

BoundaryState unbar(const BoundaryState& s, double m) {
  BoundaryState r = s;
  for (std::size_t i = 0; i < r.points.size(); ++i) r.q(int(i), int(i)) += m;
  return r;
}

BoundaryState pairing_2kappa(const BoundaryState& left, const BoundaryState& right, const std::string& point,
                             double m, double c) {
  return integrate_point(multiply(left, right), point, 2.0 * m, c);
}

// ---------------------------------------------------------------- Feynman weights

std::vector<std::string> default_points(const Geometry& g) {
  if (g.kind == Kind::Interval) return {"L", "R"};
  return {};
}

GraphWeight feynman_weight(const graph::FeynmanGraph& g, const Geometry& geom, double m, const Potential& pot,
                           const TadpoleField& tau, const FeynmanOptions& opt) {
  require_1d(geom);
  g.validate();
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  const int nb = g.num_bulk();
  const bool interval = is_interval(geom);
  if (!interval && (g.n_left || g.n_right)) throw DomainError("a circle has no boundary vertices");
  const double len = geom.a;

  GraphWeight out;
  out.exponents = interval ? std::vector<int>{g.n_left, g.n_right} : std::vector<int>{};
  HbarSeries coupling = HbarSeries::constant(1.0, pot.twice_kmax);
  for (int v : g.bulk_valence) coupling = coupling * (pot.coeff(v) * -1.0);
  out.value = HbarSeries(pot.twice_kmax);

  std::vector<int> loops(nb, 0), legs_l(nb, 0), legs_r(nb, 0);
  std::vector<int> mult(nb * nb, 0);
  int e_ll = 0, e_lr = 0, e_rr = 0;
  for (auto [a, b] : g.edge_vertices()) {
    const bool ba = g.is_bulk(a), bb = g.is_bulk(b);
    if (ba && bb) {
      if (a == b) loops[a] += 1;
      else mult[std::min(a, b) * nb + std::max(a, b)] += 1;
    } else if (ba || bb) {
      const int v = ba ? a : b, w = ba ? b : a;
      (g.is_left(w) ? legs_l : legs_r)[v] += 1;
    } else {
      const int k = int(g.is_right(a)) + int(g.is_right(b));
      (k == 0 ? e_ll : k == 1 ? e_lr : e_rr) += 1;
    }
  }
  bool any_loop = false;
  for (int l : loops) any_loop |= l > 0;
  if (coupling.is_zero() || (any_loop && tau.is_zero())) return out;

  double boundary_factor = 1.0;
  if (e_ll || e_lr || e_rr) {
    const auto D = dn::interval_dn_matrix(len, m);
    boundary_factor = std::pow(-D[0][0], e_ll) * std::pow(-D[0][1], e_lr) * std::pow(-D[1][1], e_rr);
  }

  const double sh = interval ? std::sinh(m * len) : 0.0;
  auto G = [&](double x, double y) {
    if (opt.greens) return opt.greens(x, y);
    if (interval) {
      const double lo = std::min(x, y), hi = std::max(x, y);
      return std::sinh(m * lo) * std::sinh(m * (len - hi)) / (m * sh);
    }
    const double d = std::abs(x - y);
    return std::cosh(m * (0.5 * len - d)) / (2.0 * m * std::sinh(0.5 * m * len));
  };
  auto vertex_factor = [&](int v, double x) {
    double f = 1.0;
    if (loops[v]) f *= std::pow(tau(x), loops[v]);
    if (legs_l[v]) f *= std::pow(std::sinh(m * (len - x)) / sh, legs_l[v]);
    if (legs_r[v]) f *= std::pow(std::sinh(m * x) / sh, legs_r[v]);
    return f;
  };

  std::vector<double> pos(nb);
  std::function<double(int)> nest = [&](int k) -> double {
    if (k == nb) return 1.0;
    std::vector<double> breaks(pos.begin(), pos.begin() + k);
    breaks.insert(breaks.end(), opt.breaks.begin(), opt.breaks.end());
    const auto nodes = quad::composite_gl(0.0, len, breaks, opt.panels);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.x.size(); ++i) {
      const double x = nodes.x[i];
      double f = vertex_factor(k, x);
      for (int j = 0; j < k && f != 0.0; ++j) {
        const int mu = mult[j * nb + k];
        if (mu) f *= std::pow(G(pos[j], x), mu);
      }
      if (f == 0.0) continue;
      pos[k] = x;
      sum += nodes.w[i] * f * nest(k + 1);
    }
    return sum;
  };
  out.integral = boundary_factor * nest(0);
  out.value = coupling * out.integral;
  return out;
}

std::vector<GraphTerm> contributing_graphs(const Geometry& g, const Potential& pot, bool with_short_loops,
                                           int twice_kmax) {
  require_1d(g);
  const bool interval = is_interval(g);
  // twice the hbar order carried by one vertex of valence k
  std::vector<int> ks, eff;
  for (int k = 1; k <= pot.degree(); ++k) {
    const HbarSeries c = pot.coeff(k);
    if (c.is_zero()) continue;
    const int e = (k - 2) + c.valuation();
    if (e <= 0) {
      throw UnsupportedError("valence-" + std::to_string(k) +
                             " vertices at hbar order zero give infinitely many graphs; reduce the potential first");
    }
    ks.push_back(k);
    eff.push_back(e);
  }
  std::vector<GraphTerm> out;
  std::vector<int> ms;
  std::function<void(std::size_t, int)> choose = [&](std::size_t from, int used) {
    if (!ms.empty()) {
      const int H = std::accumulate(ms.begin(), ms.end(), 0);
      int lo = 0;
      for (int v : ms) lo += v - 2;
      for (int nl = 0; nl <= (interval ? H : 0); ++nl) {
        for (int nr = 0; nl + nr <= (interval ? H : 0); ++nr) {
          if ((H - nl - nr) % 2) continue;
          for (auto& gr : graph::enumerate_graphs_with(ms, nl, nr, with_short_loops, false)) {
            out.push_back({gr, lo, graph::aut_order(gr)});
          }
        }
      }
    }
    for (std::size_t i = from; i < ks.size(); ++i) {
      if (used + eff[i] > twice_kmax) continue;
      ms.push_back(ks[i]);
      choose(i, used + eff[i]);
      ms.pop_back();
    }
  };
  choose(0, 0);
  return out;
}

BoundaryState partition_function(const Geometry& g, double m, const Potential& pot, const TadpoleField& tau,
                                 int twice_kmax, const std::vector<std::string>& points_in, const FeynmanOptions& opt) {
  require_1d(g);
  pot.validate();
  // 1- and 2-valent vertices lower the graph order, so their couplings are
  // multiplied out deeper than the target order before the shift
  Potential p = pot;
  p.twice_kmax = 3 * twice_kmax;
  if (!p.p.empty()) p.p[0] = HbarSeries(p.twice_kmax);
  std::vector<std::string> points = points_in.empty() ? default_points(g) : points_in;
  if (points.size() != default_points(g).size()) throw DomainError("wrong number of boundary point names");

  BoundaryState z = BoundaryState::unit(points, twice_kmax);
  z.scale = std::exp(-0.5 * zeta::log_det_closed(g, m));
  if (is_interval(g)) {
    const auto D = dn::interval_dn_matrix(g.a, m);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) z.q(i, j) = D[i][j];
    }
  }
  for (const auto& t : contributing_graphs(g, p, !tau.is_zero(), twice_kmax)) {
    const GraphWeight w = feynman_weight(t.graph, g, m, p, tau, opt);
    if (w.value.is_zero()) continue;
    z.add(w.exponents, shift_signed(w.value, t.twice_order) * (1.0 / double(t.aut)));
  }
  // p_0 enters as exp(-p_0 Vol / hbar), so it is read one hbar order deeper
  const HbarSeries p0 = pot.p.empty() ? HbarSeries(twice_kmax + 2) : pot.p[0].truncated(twice_kmax + 2);
  if (!p0.is_zero()) {
    // isolated 0-valent vertices exponentiate
    const HbarSeries factor = (divide_by_hbar(p0) * -g.volume()).exp();
    for (auto& [e, c] : z.poly) c = c * factor;
  }
  return z;
}

// ---------------------------------------------------------------- gluing checks

double OrderResiduals::max() const {
  double m = 0.0;
  for (double r : residual) m = std::max(m, r);
  return m;
}

namespace {

OrderResiduals compare(const BoundaryState& a, const BoundaryState& b, const std::vector<double>& grid,
                       int twice_kmax) {
  OrderResiduals out;
  out.residual.assign(twice_kmax + 1, 0.0);
  for (double x : grid) {
    for (double y : grid) {
      const std::map<std::string, double> eta{{"L", x}, {"R", y}};
      const HbarSeries d = a.evaluate_named(eta) - b.evaluate_named(eta);
      for (int j = 0; j <= twice_kmax; ++j) out.residual[j] = std::max(out.residual[j], std::abs(d[j]));
    }
  }
  return out;
}

}  // namespace

OrderResiduals gluing_theorem_residual(double l1, double l2, double m, const Potential& pot, TadpoleMode mode,
                                       int twice_kmax, const std::vector<double>& eta_grid) {
  const Geometry gl = Geometry::interval(l1), gr = Geometry::interval(l2);
  const auto glue = dn::Gluing::make(gl, gr);
  const Geometry sigma = glue.glued();
  TadpoleField tl, tr, ts;
  switch (mode) {
    case TadpoleMode::Local:
      tl = TadpoleField::local(gl, m);
      tr = TadpoleField::local(gr, m);
      ts = TadpoleField::local(sigma, m);
      break;
    case TadpoleMode::ZeroWithCorrection:
      ts = TadpoleField::glued_correction(glue, m);
      break;
    case TadpoleMode::ZeroUncorrected:
      break;
  }
  const BoundaryState zl = partition_function(gl, m, pot, tl, twice_kmax, {"L", "Y"});
  const BoundaryState zr = partition_function(gr, m, pot, tr, twice_kmax, {"Y", "R"});
  FeynmanOptions opt;
  if (mode == TadpoleMode::ZeroWithCorrection) opt.breaks = {l1};
  const BoundaryState zs = partition_function(sigma, m, pot, ts, twice_kmax, {"L", "R"}, opt);

  std::vector<double> dl, dr;
  const BoundaryState hl = hat(zl, {"L", "Y"}, &dl);
  const BoundaryState hr = hat(zr, {"Y", "R"}, &dr);
  const double c = std::exp(glue.log_bfk_constant());
  const BoundaryState paired = pairing_dn(hl, hr, "Y", dl[1], dr[0], c);
  const BoundaryState glued = unhat(paired, {"L", "R"}, {dl[0], dr[1]});
  return compare(zs, glued, eta_grid, twice_kmax);
}

OrderResiduals composition_residual(double l1, double l2, double l3, double m, const Potential& pot, int twice_kmax,
                                    const std::vector<double>& eta_grid) {
  auto piece = [&](double l, const char* a, const char* b) {
    const Geometry g = Geometry::interval(l);
    return bar(partition_function(g, m, pot, TadpoleField::local(g, m), twice_kmax, {a, b}), m);
  };
  const BoundaryState z1 = piece(l1, "L", "Y1");
  const BoundaryState z2 = piece(l2, "Y1", "Y2");
  const BoundaryState z3 = piece(l3, "Y2", "R");
  const double c = std::exp(dn::Gluing::make(Geometry::interval(l1), Geometry::interval(l2)).log_bfk_constant());
  const BoundaryState left_first = pairing_2kappa(pairing_2kappa(z1, z2, "Y1", m, c), z3, "Y2", m, c);
  const BoundaryState right_first = pairing_2kappa(z1, pairing_2kappa(z2, z3, "Y2", m, c), "Y1", m, c);
  const Geometry whole = Geometry::interval(l1 + l2 + l3);
  const BoundaryState one_shot =
      partition_function(whole, m, pot, TadpoleField::local(whole, m), twice_kmax, {"L", "R"});
  OrderResiduals a = compare(one_shot, unbar(left_first, m), eta_grid, twice_kmax);
  const OrderResiduals b = compare(one_shot, unbar(right_first, m), eta_grid, twice_kmax);
  for (std::size_t j = 0; j < a.residual.size(); ++j) a.residual[j] = std::max(a.residual[j], b.residual[j]);
  return a;
}

double two_kappa_threshold(double m) { return std::atanh(0.5) / m; }

TwoKappaResult pairing_2kappa_residual(double m, double l1, double l2, int k_max) {
  if (!(m > 0.0) || !(l1 > 0.0) || !(l2 > 0.0)) throw DomainError("mass and lengths must be positive");
  for (double l : {l1, l2}) {
    const double c = 1.0 / std::tanh(m * l);
    if (c >= 2.0) {
      std::ostringstream os;
      os.precision(6);
      os << "||delta|| >= 1 on an interval of length " << l << " (coth(ml) = " << c
         << "); the dressed propagator series diverges for l <= " << two_kappa_threshold(m);
      throw AssumptionViolation(os.str());
    }
  }
  const double dl = m / std::tanh(m * l1), dr = m / std::tanh(m * l2);
  TwoKappaResult r;
  r.delta_tot = (dl + dr) / (2.0 * m) - 1.0;
  double kernel = 0.0, term = 1.0 / (2.0 * m);
  double logsum = 0.0, pw = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    kernel += term;
    term *= -r.delta_tot;
    if (k >= 1) {
      pw *= -r.delta_tot;
      logsum += pw / (2.0 * k);
    }
  }
  r.kernel_residual = std::abs(kernel - 1.0 / (dl + dr));
  r.log_residual = std::abs(logsum + 0.5 * std::log1p(r.delta_tot));
  return r;
}

}  // namespace zqft::pert
