#include "zqft/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace zqft::specfun {

namespace {

// B_2, B_4, ..., B_20
constexpr std::array<double, 10> kBernoulli2k = {
    1.0 / 6.0,          -1.0 / 30.0,     1.0 / 42.0,     -1.0 / 30.0,
    5.0 / 66.0,         -691.0 / 2730.0, 7.0 / 6.0,      -3617.0 / 510.0,
    43867.0 / 798.0,    -174611.0 / 330.0};

constexpr double kLogTwoPi = 1.83787706640934548356;
constexpr double kMaxExpArg = 709.0;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

cplx clog1p(cplx w) {
  cplx u = 1.0 + w;
  if (u == cplx(1.0, 0.0)) return w;
  return std::log(u) * w / (u - 1.0);
}

}  // namespace

// ---------------------------------------------------------------- Bessel I

double bessel_i(int n, double x, Precision prec) {
  if (n < 0) n = -n;
  if (x < 0.0) throw DomainError("bessel_i: x must be nonnegative");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x > kMaxExpArg) throw std::overflow_error("bessel_i: x beyond representable range");

  // Hankel expansion once x dominates n^2; the series is cheaper otherwise.
  if (x > 30.0 && x > 0.5 * n * n) {
    const double mu = 4.0 * n * n;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      const double next = -term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
      if (std::abs(next) > std::abs(term)) break;
      term = next;
      sum += term;
      if (std::abs(term) < prec.rel_tol * 1e-3 * std::abs(sum)) break;
    }
    return std::exp(x) / std::sqrt(2.0 * pi * x) * sum;
  }

  const double log_t0 = n * std::log(0.5 * x) - std::lgamma(n + 1.0);
  const double q = 0.25 * x * x;
  double r = 1.0, s = 1.0;
  for (int k = 1; k <= prec.max_terms; ++k) {
    r *= q / (double(k) * double(n + k));
    s += r;
    if (r < 0.1 * prec.rel_tol * s) return std::exp(log_t0 + std::log(s));
  }
  throw ConvergenceError("bessel_i: series did not converge");
}

double bessel_i_ratio(int n, double x, Precision prec) {
  if (n < 0) throw DomainError("bessel_i_ratio: n must be nonnegative");
  if (x <= 0.0) throw DomainError("bessel_i_ratio: x must be positive");
  // Modified Lentz on I_{n+1}/I_n = 1/(2(n+1)/x + 1/(2(n+2)/x + ...)).
  const double tiny = 1e-300;
  double f = tiny, c = f, d = 0.0;
  for (int k = 1; k <= prec.max_terms * 10; ++k) {
    const double b = 2.0 * (n + k) / x;
    const double a = 1.0;
    d = b + a * d;
    if (d == 0.0) d = tiny;
    c = b + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 0.1 * prec.rel_tol) return f;
  }
  throw ConvergenceError("bessel_i_ratio: continued fraction did not converge");
}

double bessel_i_log_derivative(int n, double x, Precision prec) {
  if (n < 0) n = -n;
  return n + x * bessel_i_ratio(n, x, prec);
}

// ---------------------------------------------------------------- Bessel K

double bessel_k(double nu, double x, Precision prec) {
  if (!(x > 0.0)) throw DomainError("bessel_k: x must be positive");
  nu = std::abs(nu);
  // K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt. The integrand is entire
  // and decays doubly exponentially, so the trapezoid rule converges
  // geometrically in 1/h; halve h until successive sums agree.
  auto f = [&](double t) {
    const double e = -x * std::cosh(t);
    return 0.5 * (std::exp(e + nu * t) + std::exp(e - nu * t));
  };
  // the integrand peaks where x sinh t = nu
  const double t_peak = nu > 0.0 ? std::asinh(nu / x) : 0.0;
  auto tail_sum = [&](double h, double start, bool odd_only) {
    double s = 0.0;
    for (int k = odd_only ? 1 : 1;; k += odd_only ? 2 : 1) {
      const double t = start + k * h;
      const double v = f(t);
      s += v;
      if (t > t_peak && (v < 1e-18 * s || v == 0.0)) break;
      if (k > 4 * prec.max_terms) throw ConvergenceError("bessel_k: trapezoid tail did not terminate");
    }
    return s;
  };
  double h = std::min(0.5, 2.0 / std::sqrt(x + nu + 1.0));
  double sum = 0.5 * f(0.0) + tail_sum(h, 0.0, false);
  double t_old = h * sum;
  for (int level = 0; level < 30; ++level) {
    h *= 0.5;
    sum += tail_sum(h, 0.0, true);
    const double t_new = h * sum;
    if (!std::isfinite(t_new)) throw std::overflow_error("bessel_k: overflow");
    if (std::abs(t_new - t_old) <= 1e-9 * std::abs(t_new) || t_new == 0.0) return t_new;
    t_old = t_new;
  }
  throw ConvergenceError("bessel_k: refinement did not converge");
}

// ---------------------------------------------------------------- theta

double jacobi_theta3(double z, double t, Precision prec) {
  if (!(t > 0.0)) throw DomainError("jacobi_theta3: t must be positive");
  if (t >= 1.0) {
    double s = 1.0;
    for (int k = 1; k <= prec.max_terms; ++k) {
      const double e = std::exp(-pi * k * k * t);
      s += 2.0 * e * std::cos(2.0 * pi * k * z);
      if (e < 0.1 * prec.rel_tol) break;
    }
    return s;
  }
  // sum_k exp(-pi (z - k)^2 / t) / sqrt(t); centre the sum at the nearest k.
  const double zr = z - std::round(z);
  double s = std::exp(-pi * zr * zr / t);
  for (int k = 1; k <= prec.max_terms; ++k) {
    const double a = std::exp(-pi * (zr - k) * (zr - k) / t);
    const double b = std::exp(-pi * (zr + k) * (zr + k) / t);
    s += a + b;
    if (a + b < 0.1 * prec.rel_tol * s) break;
  }
  return s / std::sqrt(t);
}

double jacobi_theta3_direct(double z, double t, int kmax) {
  if (!(t > 0.0)) throw DomainError("jacobi_theta3_direct: t must be positive");
  double s = 0.0;
  for (int k = kmax; k >= 1; --k) s += 2.0 * std::exp(-pi * k * k * t) * std::cos(2.0 * pi * k * z);
  return 1.0 + s;
}

// ---------------------------------------------------------------- gamma family

cplx digamma(cplx z) {
  if (z.imag() == 0.0 && is_nonpositive_integer(z.real()))
    throw SingularityError("digamma: pole at nonpositive integer");
  if (z.real() < 0.5) {
    // psi(1 - z) - psi(z) = pi cot(pi z)
    return digamma(1.0 - z) - pi / std::tan(pi * z);
  }
  cplx acc = 0.0;
  while (std::abs(z) < 12.0 || z.real() < 12.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const cplx iz2 = 1.0 / (z * z);
  cplx p = iz2, s = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    s += kBernoulli2k[k] / (2.0 * (k + 1)) * p;
    p *= iz2;
  }
  return acc + std::log(z) - 0.5 / z - s;
}

double digamma(double x) {
  if (is_nonpositive_integer(x)) throw SingularityError("digamma: pole at nonpositive integer");
  return digamma(cplx(x, 0.0)).real();
}

namespace {

cplx log_gamma_stirling(cplx z) {
  const cplx iz = 1.0 / z, iz2 = iz * iz;
  cplx p = iz, s = 0.0;
  for (std::size_t k = 0; k < 9; ++k) {
    const double kk = double(k + 1);
    s += kBernoulli2k[k] / (2.0 * kk * (2.0 * kk - 1.0)) * p;
    p *= iz2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * kLogTwoPi + s;
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.imag() == 0.0 && is_nonpositive_integer(z.real()))
    throw SingularityError("log_gamma: pole at nonpositive integer");
  if (z.real() < 0.5) {
    // reflection; branch of the imaginary part is not normalised
    return std::log(pi / std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  cplx acc = 0.0;
  while (z.real() < 12.0) {
    acc -= std::log(z);
    z += 1.0;
  }
  return acc + log_gamma_stirling(z);
}

cplx log_gamma_ratio(cplx z, double a) {
  cplx acc = 0.0;
  while (z.real() < 16.0) {
    acc -= clog1p(a / z);
    z += 1.0;
  }
  // (z+a-1/2) log(z+a) - (z-1/2) log z - a, arranged to avoid cancellation
  cplx main = (z - 0.5) * clog1p(a / z) + a * std::log(z + a) - a;
  cplx corr = 0.0;
  cplx p1 = 1.0 / (z + a), p0 = 1.0 / z;
  const cplx q1 = p1 * p1, q0 = p0 * p0;
  for (std::size_t k = 0; k < 9; ++k) {
    const double kk = double(k + 1);
    corr += kBernoulli2k[k] / (2.0 * kk * (2.0 * kk - 1.0)) * (p1 - p0);
    p1 *= q1;
    p0 *= q0;
  }
  return acc + main + corr;
}

// ---------------------------------------------------------------- Barnes G

cplx log_barnes_g(cplx z) {
  if (z.imag() == 0.0 && is_nonpositive_integer(z.real()))
    throw SingularityError("log_barnes_g: zero of G at nonpositive integer");
  if (z.real() <= 0.0) throw DomainError("log_barnes_g: requires Re z > 0");
  // log G(z) = log G(z + N) - sum_{k<N} log Gamma(z + k)
  cplx acc = 0.0;
  while (z.real() < 11.0) {
    acc -= log_gamma(z);
    z += 1.0;
  }
  const cplx w = z - 1.0;
  const cplx lw = std::log(w);
  cplx s = 0.5 * w * w * lw - 0.75 * w * w + 0.5 * w * kLogTwoPi - lw / 12.0 + zeta_prime_m1;
  const cplx iw2 = 1.0 / (w * w);
  cplx p = iw2;
  for (std::size_t k = 1; k < 9; ++k) {
    const double kk = double(k);
    s += kBernoulli2k[k] / (4.0 * kk * (kk + 1.0)) * p;
    p *= iw2;
  }
  return acc + s;
}

double log_barnes_g(double x) {
  if (is_nonpositive_integer(x)) throw SingularityError("log_barnes_g: zero of G at nonpositive integer");
  if (x <= 0.0) throw DomainError("log_barnes_g: requires x > 0");
  return log_barnes_g(cplx(x, 0.0)).real();
}

// ---------------------------------------------------------------- 2F1

namespace {

cplx rgamma(cplx z) {
  if (z.imag() == 0.0 && is_nonpositive_integer(z.real())) return 0.0;
  return std::exp(-log_gamma(z));
}

cplx hyp2f1_series(cplx a, cplx b, cplx c, double z, const Precision& prec) {
  cplx term = 1.0, sum = 1.0;
  for (int k = 0; k < prec.max_terms; ++k) {
    term *= (a + double(k)) * (b + double(k)) / ((c + double(k)) * double(k + 1)) * z;
    sum += term;
    if (std::abs(term) < 0.1 * prec.rel_tol * std::abs(sum) && k > 2) return sum;
    if (term == 0.0) return sum;
  }
  throw ConvergenceError("hyp2f1: power series exceeded max_terms", std::abs(term));
}

bool is_nonpositive_int(cplx a) { return a.imag() == 0.0 && is_nonpositive_integer(a.real()); }

}  // namespace

cplx hyp2f1(cplx a, cplx b, double c, double z, Precision prec) {
  if (is_nonpositive_integer(c)) throw DomainError("hyp2f1: c is a nonpositive integer");
  if (!(z < 1.0)) throw DomainError("hyp2f1: requires z < 1");
  if (z == 0.0) return 1.0;
  if (z < 0.0) {
    // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1))
    return std::pow(1.0 - z, -a) * hyp2f1(a, c - b, c, z / (z - 1.0), prec);
  }
  if (z <= 0.6 || is_nonpositive_int(a) || is_nonpositive_int(b)) return hyp2f1_series(a, b, c, z, prec);

  const cplx s = c - a - b;
  const double w = 1.0 - z;
  if (std::abs(s) < 1e-12) {
    // logarithmic case c = a + b
    const cplx pref = std::exp(log_gamma(cplx(c))) * rgamma(a) * rgamma(b);
    cplx pa = digamma(a), pb = digamma(b);
    double p1 = -euler_gamma;  // psi(n+1)
    const double lw = std::log(w);
    cplx coef = 1.0, sum = 0.0;
    double wn = 1.0;
    for (int n = 0; n < prec.max_terms; ++n) {
      const cplx term = coef * (2.0 * p1 - pa - pb - lw) * wn;
      sum += term;
      if (n > 2 && std::abs(term) < 0.1 * prec.rel_tol * std::abs(sum)) return pref * sum;
      coef *= (a + double(n)) * (b + double(n)) / (double(n + 1) * double(n + 1));
      pa += 1.0 / (a + double(n));
      pb += 1.0 / (b + double(n));
      p1 += 1.0 / double(n + 1);
      wn *= w;
    }
    throw ConvergenceError("hyp2f1: logarithmic series exceeded max_terms");
  }
  if (s.imag() == 0.0 && std::abs(s.real() - std::round(s.real())) < 1e-12)
    return hyp2f1_series(a, b, c, z, prec);

  const cplx lgc = log_gamma(cplx(c));
  const cplx t1 = std::exp(lgc + log_gamma(s)) * rgamma(c - a) * rgamma(c - b) *
                  hyp2f1_series(a, b, a + b - c + 1.0, w, prec);
  const cplx t2 = std::pow(cplx(w), s) * std::exp(lgc + log_gamma(-s)) * rgamma(a) * rgamma(b) *
                  hyp2f1_series(c - a, c - b, s + 1.0, w, prec);
  return t1 + t2;
}

cplx hyp2f1_dz(cplx a, cplx b, double c, double z, Precision prec) {
  if (!(z < 1.0)) throw DomainError("hyp2f1_dz: requires z < 1");
  const cplx s = c - a - b;
  if (z > 0.6 && std::abs(s) < 1e-12 && !is_nonpositive_int(a) && !is_nonpositive_int(b)) {
    const cplx pref = std::exp(log_gamma(cplx(c))) * rgamma(a) * rgamma(b);
    cplx pa = digamma(a), pb = digamma(b);
    double p1 = -euler_gamma;
    const double w = 1.0 - z, lw = std::log(w);
    cplx coef = 1.0, sum = 0.0;
    double wn1 = 1.0 / w;  // w^{n-1}
    for (int n = 0; n < prec.max_terms; ++n) {
      const cplx h = 2.0 * p1 - pa - pb - lw;
      const cplx term = coef * (double(n) * h - 1.0) * wn1;
      sum += term;
      if (n > 2 && std::abs(term) < 0.1 * prec.rel_tol * std::abs(sum)) return -pref * sum;
      coef *= (a + double(n)) * (b + double(n)) / (double(n + 1) * double(n + 1));
      pa += 1.0 / (a + double(n));
      pb += 1.0 / (b + double(n));
      p1 += 1.0 / double(n + 1);
      wn1 *= w;
    }
    throw ConvergenceError("hyp2f1_dz: logarithmic series exceeded max_terms");
  }
  return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z, prec);
}

// ---------------------------------------------------------------- E1

double exp_integral_e1(double u) {
  if (!(u > 0.0)) throw DomainError("exp_integral_e1: u must be positive");
  if (u <= 1.0) {
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      term *= -u / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return -euler_gamma - std::log(u) - sum;
  }
  const double tiny = 1e-300;
  double b = u + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -double(i) * double(i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-u);
  }
  throw ConvergenceError("exp_integral_e1: continued fraction did not converge");
}

}  // namespace zqft::specfun
