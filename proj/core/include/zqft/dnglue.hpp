#pragma once

#include <array>
#include <string>
#include <vector>

#include "zqft/geometry.hpp"

namespace zqft::dn {

// DN eigenvalue on a circle boundary, mode n (lambda_{-n} = lambda_n).
//   Disk:       m I_n'(mR) / I_n(mR)
//   Cylinder:   w_n coth(H w_n), the self block of either boundary circle
//   Hemisphere: (2/R) Gamma((n+1+a1)/2) Gamma((n+1+a2)/2) / (Gamma((n+a1)/2) Gamma((n+a2)/2))
// For an interval, n = 0 gives the diagonal entry m coth(ml) and n = 1 the
// off-diagonal entry -m / sinh(ml) of the 2x2 DN matrix.
double dn_eigenvalue(const Geometry& g, BoundaryId b, double m, int n);
// log(lambda_n / omega_n), computed without forming lambda_n.
double log_dn_ratio(const Geometry& g, double m, int n);
// Cylinder block coupling the two boundary circles: -w_n / sinh(H w_n).
double cylinder_dn_offdiag(const Geometry& g, double m, int n);

using Matrix2 = std::array<std::array<double, 2>, 2>;
Matrix2 interval_dn_matrix(double l, double m);

// Three-term large-n asymptotic of lambda_n / omega_n on a spherical sector
// with cone angle phi; omega_n = sqrt(n^2 / (R sin phi)^2 + m^2). Only the
// asymptotic is available, so results built on it are flagged.
double sector_dn_ratio_asymptotic(double R, double phi, double m, int n);

// omega_n = sqrt(m^2 + (2 pi n / L)^2) on a boundary circle of length L;
// L = 0 denotes a point boundary, for which the value is m.
double kappa_eigenvalue(double L, double m, int n);
// log det_reg(kappa) on a circle of length L: log(2 sinh(mL/2)).
double log_det_reg_kappa(double L, double m);

struct SpectrumRow {
  int n = 0;
  double lambda = 0.0;
  double omega = 0.0;
  double ratio = 0.0;
};
// Rows n = 0..n_max for a circle-boundary geometry (sector: asymptotic ratio).
std::vector<SpectrumRow> dn_spectrum(const Geometry& g, double m, int n_max);

struct DeltaFit {
  double slope = 0.0;
  bool superpolynomial = false;  // fewer than two points above 1e-15
  bool asymptotic_only = false;  // sector: synthetic spectrum
  int points = 0;
};
DeltaFit delta_order_fit(const Geometry& g, double m, int n_lo, int n_hi);
// sup_n |lambda_n / omega_n - 1|
double delta_norm(const Geometry& g, double m);
// Smallest height H with ||delta|| < 1 on Cylinder(L, H), by bisection.
double cylinder_delta_threshold(double L, double m, double tol = 1e-10);

// ---------------------------------------------------------------- gluing

enum class GlueKind { IntervalChain, CircleFromArcs, CylinderStack, SphereFromHemispheres };

// Two pieces glued along an interface. Points passed to the residual
// functions below live in the chart of the glued geometry:
//   IntervalChain          [0, l1 + l2], interface at x = l1
//   CircleFromArcs         [0, l1 + l2), interface points x = 0 and x = l1
//   CylinderStack          height H1 + H2, interface circle y = H1
//   SphereFromHemispheres  interface is the equator
struct Gluing {
  GlueKind kind = GlueKind::IntervalChain;
  Geometry left, right;

  static Gluing make(const Geometry& left, const Geometry& right, bool close_into_circle = false);
  Geometry glued() const;
  int interface_points() const;  // 1D only
  // BFK constant c: 1/2 per interface point in 1D, 1 in 2D.
  double log_bfk_constant() const;
  std::string describe() const;
};

struct FredholmResult {
  double log_det = 0.0;    // includes the fitted tail
  double tail = 0.0;       // fitted tail that was added
  double fit_order = 0.0;  // p in delta_n ~ C n^{-p}; 0 if superpolynomial
  int n_max = 0;
};
// log det_reg(D_L + D_R) on the interface.
FredholmResult log_det_dn(const Gluing& gl, double m, int n_max = 128);

struct Residual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tail = 0.0;
};
// |log det_Sigma - log det_L - log det_R - log(c det(D_L + D_R))|
Residual bfk_residual(const Gluing& gl, double m, int n_max = 128);

// G_Sigma(p, q) versus G_piece(p, q) [same piece] + P(p) K P(q).
Residual greens_glue_residual(const Gluing& gl, double m, Point p, Point q, int n_max = 64);

enum class PieceTadpole { Local, Zero };
// (tau_L * tau_R)(p) = tau_piece(p) + P(p) K P(p); Local uses G(x, x) in 1D
// and the zeta-regularized tadpole in 2D.
double tadpole_glue(const Gluing& gl, double m, Point p, PieceTadpole rule = PieceTadpole::Local, int n_max = 64);
// Residual against the glued geometry's own tadpole of the same kind.
Residual tadpole_glue_residual(const Gluing& gl, double m, Point p, int n_max = 64);

// Interface correction P(p) K P(q) alone.
double interface_correction(const Gluing& gl, double m, Point p, Point q, int n_max = 64);

}  // namespace zqft::dn
