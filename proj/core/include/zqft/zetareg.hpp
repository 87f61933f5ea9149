#pragma once

#include <functional>

#include "zqft/geometry.hpp"

namespace zqft::zeta {

// Small-t split of the local heat trace of Delta + m^2:
//   theta_A(p, t) = e^{-m^2 t} [ 1/(4 pi t) (2D) or 1/sqrt(4 pi t) (1D) + remainder(t) ].
// a1 is the t^0 coefficient of the bracketed remainder, i.e. s(p)/(24 pi) on a surface
// with s the scalar curvature (2/R^2 on a sphere).
struct HeatTraceSplit {
  int dimension = 2;
  double leading = 0.0;  // 1/(4 pi) in 2D, 1/sqrt(4 pi) in 1D; power t^{-dim/2}
  double a1 = 0.0;
  std::function<double(double)> remainder;
};
HeatTraceSplit heat_trace_split(const Geometry& g, Point p);

// Tadpole by Mellin quadrature:
//   2D: -log(m^2)/(4 pi) + int_0^inf e^{-m^2 t} (theta - 1/(4 pi t)) dt
//   1D: 1/(2m) + int_0^inf e^{-m^2 t} (theta - 1/sqrt(4 pi t)) dt  (= G(x, x))
double tau_reg(const Geometry& g, double m, Point p);
// Same value from image sums / closed forms (Bessel, digamma, G(x,x)).
double tau_reg_closed(const Geometry& g, double m, Point p);

// Point-splitting tadpole, Mellin route: tau_reg + (log 2 - gamma)/(2 pi).
double tau_split(const Geometry& g, double m, Point p);
// lim_{q -> p} [G(p, q) + log d(p, q) / (2 pi)] evaluated from the Green's
// function itself (image sums, or the log-case expansion of 2F1 on the sphere).
double tau_split_limit(const Geometry& g, double m, Point p);
// Richardson extrapolation of G(p, q) + log d / (2 pi) along a geodesic ray.
double tau_split_extrapolated(const Geometry& g, double m, Point p);

inline double tau_reg_minus_split() {
  return (0.57721566490153286061 - 0.69314718055994530942) / (2.0 * 3.14159265358979323846);
}

// log det(Delta + m^2), Dirichlet on any boundary. Uses the closed form where
// one exists and the Mellin route otherwise.
double log_det_zeta(const Geometry& g, double m);
double log_det_closed(const Geometry& g, double m);
double log_det_mellin(const Geometry& g, double m, BoundaryCondition bc = BoundaryCondition::Dirichlet);

// int_Sigma tau_reg dVol, by quadrature of the pointwise closed form.
double integrated_tadpole(const Geometry& g, double m);
// 4th-order central difference of log_det_closed in m^2 with h = 1e-4 m^2.
double dlogdet_dm2(const Geometry& g, double m);
double weak_compatibility_residual(const Geometry& g, double m);

// zeta_A(0, p) = lim_{t->0} of e^{-m^2 t} theta - 1/(4 pi t), i.e. (s/6 - m^2)/(4 pi).
double local_zeta_at_zero(const Geometry& g, double m, Point p);

}  // namespace zqft::zeta
