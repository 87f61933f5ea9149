#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zqft/dnglue.hpp"
#include "zqft/feyngraph.hpp"
#include "zqft/geometry.hpp"
#include "zqft/hbar.hpp"

namespace zqft::pert {

// p(phi) = sum_k p_k phi^k / k!, coefficients are hbar series.
struct Potential {
  std::vector<HbarSeries> p;
  bool low_valence = false;  // allow p_0, p_1, p_2
  int twice_kmax = 2;

  static Potential zero(int twice_kmax);
  static Potential monomial(int k, double c, int twice_kmax);
  // "p3=1,p4=-0.5"; "0" or "" for the free theory
  static Potential parse(std::string_view spec, int twice_kmax);

  int degree() const;  // -1 for the zero potential
  HbarSeries coeff(int k) const;
  void set(int k, const HbarSeries& c);
  void set(int k, double c) { set(k, HbarSeries::constant(c, twice_kmax)); }
  // Throws unless p_0 = p_1 = p_2 = 0 or low_valence is set.
  void validate() const;
  std::string to_string() const;
};

// Value assigned to short loops, as a function of the 1D coordinate.
struct TadpoleField {
  std::string name = "zero";
  std::function<double(double)> value;  // empty: identically zero

  bool is_zero() const { return !value; }
  double operator()(double x) const { return value ? value(x) : 0.0; }

  static TadpoleField zero();
  static TadpoleField constant(double c);
  // G(x, x) on an interval or circle (the 1D zeta-regularized tadpole).
  static TadpoleField local(const Geometry& g, double m);
  // tau_L * tau_R for zero piece tadpoles: the interface term P(x) K P(x),
  // in the chart of the glued interval or circle.
  static TadpoleField glued_correction(const dn::Gluing& gl, double m);
  static TadpoleField function(std::string name, std::function<double(double)> f);
};

// c * exp(-1/2 eta^T Q eta) * sum_alpha c_alpha eta^alpha over named points.
struct BoundaryState {
  std::vector<std::string> points;
  double scale = 1.0;
  std::vector<double> quad;  // row-major |points| x |points|
  std::map<std::vector<int>, HbarSeries> poly;
  int twice_kmax = 2;

  static BoundaryState unit(std::vector<std::string> points, int twice_kmax);
  int index(const std::string& point) const;  // -1 if absent
  double q(int i, int j) const { return quad[i * points.size() + j]; }
  double& q(int i, int j) { return quad[i * points.size() + j]; }
  void add(const std::vector<int>& exponents, const HbarSeries& c);
  int max_degree() const;

  // eta is given in the order of `points`.
  HbarSeries evaluate(const std::vector<double>& eta) const;
  HbarSeries evaluate_named(const std::map<std::string, double>& eta) const;
};

BoundaryState multiply(const BoundaryState& a, const BoundaryState& b);
// Gaussian integral over one point with measure (2 pi c)^{-1/2} dy, after
// adding extra_quadratic / 2 * y^2 to the exponent. Completes the square
// against the remaining points and integrates the polynomial by Wick's rule.
BoundaryState integrate_point(const BoundaryState& s, const std::string& point, double extra_quadratic,
                              double bfk_constant);

// Hat normalization: drop the diagonal of Q at the given points (multiply by
// exp(+S_0) of each point's own harmonic extension); returns the removed values.
BoundaryState hat(const BoundaryState& s, const std::vector<std::string>& points, std::vector<double>* removed = nullptr);
BoundaryState unhat(const BoundaryState& s, const std::vector<std::string>& points, const std::vector<double>& diag);

// <Psi_L, Psi_R> over the shared point with Gaussian weight
// exp(-1/2 (d_left + d_right) y^2) normalized by (c (d_left + d_right))^{-1/2}.
BoundaryState pairing_dn(const BoundaryState& left, const BoundaryState& right, const std::string& point,
                         double d_left, double d_right, double bfk_constant);

struct FeynmanOptions {
  // Replaces the geometry's Green's function (used by oracle tests).
  std::function<double(double, double)> greens;
  int panels = 1;  // Gauss-Legendre panels per piece between break points
  std::vector<double> breaks;  // fixed kinks of the tadpole field
};

struct GraphWeight {
  std::vector<int> exponents;  // degree in eta at each boundary point
  double integral = 0.0;       // configuration-space integral incl. E2 factors
  HbarSeries value;            // prod(-p_k) * integral, no hbar^l or 1/|Aut|
};

// F(Gamma) on an interval (V_L at x = 0, V_R at x = l) or a circle.
GraphWeight feynman_weight(const graph::FeynmanGraph& g, const Geometry& geom, double m, const Potential& pot,
                           const TadpoleField& tau, const FeynmanOptions& opt = {});

// Names of the boundary points used by partition_function.
std::vector<std::string> default_points(const Geometry& g);

// det^{-1/2} exp(-1/2 eta^T D eta) sum_{E_2 = 0} hbar^l F / |Aut| up to hbar^{twice_kmax/2}.
// A constant term p_0 = O(hbar) is resummed as exp(-p_0 Vol / hbar); it is
// read to order twice_kmax + 2, so pass a potential with that many orders.
// Couplings of 1- and 2-valent vertices are read up to order 3 twice_kmax.
BoundaryState partition_function(const Geometry& g, double m, const Potential& pot, const TadpoleField& tau,
                                 int twice_kmax, const std::vector<std::string>& points = {},
                                 const FeynmanOptions& opt = {});

// Graphs summed by partition_function, with their hbar order (twice).
struct GraphTerm {
  graph::FeynmanGraph graph;
  int twice_order = 0;
  std::int64_t aut = 1;
};
std::vector<GraphTerm> contributing_graphs(const Geometry& g, const Potential& pot, bool with_short_loops,
                                           int twice_kmax);

// ---------------------------------------------------------------- gluing checks

enum class TadpoleMode {
  Local,               // G(x, x) on every piece and on the glued interval
  ZeroWithCorrection,  // zero on pieces, interface term on the glued interval
  ZeroUncorrected,     // zero everywhere
};

struct OrderResiduals {
  std::vector<double> residual;  // index: twice the hbar order
  double max() const;
};

// |Z_Sigma - e^{-S_0 L} e^{-S_0 R} <Zhat_L, Zhat_R>| per order, max over the
// grid of outer boundary values (both outer points range over eta_grid).
OrderResiduals gluing_theorem_residual(double l1, double l2, double m, const Potential& pot, TadpoleMode mode,
                                       int twice_kmax, const std::vector<double>& eta_grid);

// Zbar = exp(+1/2 kappa eta^2) Z per boundary point, kappa = m in 1D.
BoundaryState bar(const BoundaryState& s, double m);
BoundaryState unbar(const BoundaryState& s, double m);
// <Zbar_L, Zbar_R> with Gaussian weight exp(-1/2 (2 kappa) y^2).
BoundaryState pairing_2kappa(const BoundaryState& left, const BoundaryState& right, const std::string& point,
                             double m, double bfk_constant);

// Chain of three intervals with local tadpoles: one-shot Z versus both
// bracketings of successive 2-kappa pairings.
OrderResiduals composition_residual(double l1, double l2, double l3, double m, const Potential& pot, int twice_kmax,
                                    const std::vector<double>& eta_grid);

struct TwoKappaResult {
  double delta_tot = 0.0;         // (D_L + D_R) / (2m) - 1
  double kernel_residual = 0.0;   // geometric series vs 1 / (D_L + D_R)
  double log_residual = 0.0;      // -1/2 log(1 + delta) vs sum (-delta)^p / (2p)
};
// Requires coth(m l_i) < 2 on both pieces; throws AssumptionViolation otherwise.
TwoKappaResult pairing_2kappa_residual(double m, double l1, double l2, int k_max = 60);
// Shortest interval with ||delta|| < 1: arccoth(2) / m.
double two_kappa_threshold(double m);

}  // namespace zqft::pert
