#pragma once

#include <complex>

#include "zqft/errors.hpp"

namespace zqft::specfun {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double euler_gamma = 0.57721566490153286061;
// zeta'(-1)
inline constexpr double zeta_prime_m1 = -0.16542114370045092921;

struct Precision {
  double rel_tol = 1e-13;
  int max_terms = 10000;
};

// Modified Bessel function of the first kind, integer order.
double bessel_i(int n, double x, Precision prec = {});
// I_{n+1}(x) / I_n(x) by continued fraction; stays finite where I_n underflows.
double bessel_i_ratio(int n, double x, Precision prec = {});
// x I_n'(x) / I_n(x) = n + x I_{n+1}(x)/I_n(x).
double bessel_i_log_derivative(int n, double x, Precision prec = {});

// Modified Bessel function of the second kind, real order nu >= 0, x > 0.
double bessel_k(double nu, double x, Precision prec = {});

// theta(z, iT) = sum_k exp(-pi k^2 T) cos(2 pi k z). Switches to the
// Poisson-resummed form for T < 1.
double jacobi_theta3(double z, double t, Precision prec = {});
// Plain sum over |k| <= kmax, no resummation. Used as a cross-check.
double jacobi_theta3_direct(double z, double t, int kmax);

double digamma(double x);
cplx digamma(cplx z);

cplx log_gamma(cplx z);
// log Gamma(z + a) - log Gamma(z), accurate for large |z|.
cplx log_gamma_ratio(cplx z, double a);

double log_barnes_g(double x);
cplx log_barnes_g(cplx z);

// Gauss hypergeometric 2F1(a, b; c; z) for real z < 1.
cplx hyp2f1(cplx a, cplx b, double c, double z, Precision prec = {});
// d/dz 2F1(a, b; c; z), with the logarithmic case c = a + b handled by
// differentiating the expansion around z = 1.
cplx hyp2f1_dz(cplx a, cplx b, double c, double z, Precision prec = {});

double exp_integral_e1(double u);

}  // namespace zqft::specfun
