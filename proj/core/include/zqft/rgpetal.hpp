#pragma once

#include <map>
#include <vector>

#include <boost/rational.hpp>

#include "zqft/geometry.hpp"
#include "zqft/pertpart.hpp"

namespace zqft::rg {

// ---------------------------------------------------------------- petal resummation

// [R_tau p]_n = sum_k (hbar tau / 2)^k / k! p_{n+2k}, truncated at the
// potential's hbar order.
pert::Potential petal_transform(const pert::Potential& p, double tau);

// Exact variant: coefficient [n][j] multiplies hbar^j phi^n / n!.
using Rational = boost::rational<std::int64_t>;
struct ExactPotential {
  std::vector<std::vector<Rational>> c;
  int kmax = 2;  // integer hbar orders kept

  static ExactPotential monomial(int n, Rational coeff, int kmax);
  Rational at(int n, int j) const;
  bool operator==(const ExactPotential& o) const;
};
ExactPotential petal_transform(const ExactPotential& p, Rational tau);

// max |R_{t1 + t2} p - R_{t1} R_{t2} p| over coefficients.
double group_law_residual(const pert::Potential& p, double tau1, double tau2);
// Same in exact arithmetic: the largest deviation (zero when the law holds).
Rational group_law_residual_exact(const ExactPotential& p, Rational tau1, Rational tau2);

// max |central difference of R_tau p in tau - (hbar/2) d^2/dphi^2 R_tau p|.
double rg_flow_residual(const pert::Potential& p, double tau, double dtau);

// Z with (tadpole tau1, potential p) against Z with (tadpole tau2,
// potential R_{tau1 - tau2} p), constant tadpoles on a 1D geometry. Per order.
pert::OrderResiduals partition_consistency_residual(const Geometry& g, double m, const pert::Potential& p,
                                                    double tau1, double tau2, int twice_kmax,
                                                    const std::vector<double>& eta_grid = {-1.0, 0.0, 1.0});

// ---------------------------------------------------------------- low valence

struct Reduction {
  double phi_cr = 0.0;
  double mass = 0.0;        // m~ = sqrt(m^2 + p''(phi_cr))
  double constant = 0.0;    // m^2 phi_cr^2 / 2 + p(phi_cr)
  std::vector<double> p;    // p~_n = p^(n)(phi_cr) for n >= 3 (entries 0..2 are zero)
  int iterations = 0;
};
// p holds p_0, p_1, ... (p(phi) = sum p_k phi^k / k!). Iterates
// Xi(phi) = -(p_1 + sum_{n>=2} p_n phi^{n-1} / (n-1)!) / m^2 to 1e-13.
// Throws ConvergenceError if the iteration does not contract.
Reduction reduce_low_valence(const std::vector<double>& p, double m);

// |sum_{k<=K} (-p2)^k G^{k+1}(x, y) - G_{m~}(x, y)| on Circle(L), mode by mode.
double neumann_residual(double L, double m, double p2, double separation, int K = 40);

// ---------------------------------------------------------------- trace anomaly

struct AnomalyCheck {
  double lhs = 0.0;       // (R^2 d/dR^2 - m^2 d/dm^2) log det, finite differences
  double rhs = 0.0;       // -1/3 + m^2 R^2
  double residual = 0.0;
  double density = 0.0;   // zeta_A(0, x) from the heat trace
  double density_expected = 0.0;  // (s/6 - m^2) / (4 pi), s = 2/R^2
};
// Requires |mR - 1/2| >= 1e-3 so that the stencil does not straddle the branch point.
AnomalyCheck trace_anomaly_sphere(double R, double m, double h = 1e-3);

// m^2 int_S tau dVol on a sphere; tends to 1 as m -> 0.
double integrated_classical_trace(double R, double m);

// Flat anomaly density: zeta_A(0, x) versus -m^2 / (4 pi) on a torus.
double flat_anomaly_residual(double L1, double L2, double m);

struct SmallMassLaw {
  double spread = 0.0;      // max relative deviation of det / (m^2 R^2) over the m range
  double exponent = 0.0;    // fitted power of R in det / (m^2 R^2)
  double exponent_error = 0.0;  // |exponent + 2/3|
};
SmallMassLaw sphere_small_mass_law(double m_lo = 1e-3, double m_hi = 1e-2, std::vector<double> radii = {0.5, 1, 2});

struct CutoffTadpole {
  std::vector<double> lambda;
  std::vector<double> shifted;  // G_Lambda(x, x) - log(Lambda) / (2 pi)
  double extrapolated = 0.0;
  double target = 0.0;          // tau_reg - gamma / (4 pi)
  double residual = 0.0;
};
// Proper-time cutoff t >= 1/Lambda^2 of the diagonal heat kernel on a torus.
CutoffTadpole cutoff_tadpole(double L1, double L2, double m, std::vector<double> lambdas = {1e2, 1e3, 1e4});

}  // namespace zqft::rg
