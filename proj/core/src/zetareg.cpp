#include "zqft/zetareg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "zqft/errors.hpp"
#include "zqft/quadrature.hpp"
#include "zqft/specfun.hpp"

namespace zqft::zeta {

using specfun::cplx;
using specfun::euler_gamma;
using specfun::pi;

namespace {

constexpr double kLog2 = 0.69314718055994530942;
constexpr double kBesselCut = 46.0;  // K_nu(x) < 1e-20 beyond

void require_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("zetareg: mass must be positive");
}

// Split point of the Mellin integrals: the scale where image and mode sums
// trade places.
double split_time(const Geometry& g) {
  switch (g.kind) {
    case Kind::Interval: return g.a * g.a / pi;
    case Kind::Circle: return g.a * g.a / (4.0 * pi);
    case Kind::Torus: return std::min(g.a, g.b) * std::min(g.a, g.b) / (4.0 * pi);
    case Kind::Cylinder: return std::min(g.a * g.a / (4.0 * pi), g.b * g.b / pi);
    default: return std::min(1.0, g.a * g.a);
  }
}

double mellin(const std::function<double(double)>& f, double tstar, bool singular_at_zero) {
  const auto head = singular_at_zero ? quad::tanh_sinh(f, 0.0, tstar, 1e-12) : quad::adaptive(f, 0.0, tstar, 1e-12, 10);
  const auto tail = quad::semi_infinite(f, tstar, 1e-12);
  const double err = head.error + tail.error;
  const double val = head.value + tail.value;
  if (!(err <= 1e-8 * std::max(1.0, std::abs(val))))
    throw ConvergenceError("zetareg: Mellin quadrature did not converge", err);
  return val;
}

// sum over (k, l) != (0, 0) of f(|(k a, l b)|) for a rapidly decaying f,
// cut at m r > kBesselCut.
template <class F>
double lattice_sum(double a, double b, double m, F f) {
  const double cut = kBesselCut / m;
  const int K = int(std::ceil(cut / a)), J = int(std::ceil(cut / b));
  double s = 0.0;
  for (int k = -K; k <= K; ++k)
    for (int j = -J; j <= J; ++j) {
      if (k == 0 && j == 0) continue;
      const double r = std::hypot(k * a, j * b);
      if (r > cut) continue;
      s += f(r);
    }
  return s;
}

double k0(double x) { return specfun::bessel_k(0.0, x); }
double k1(double x) { return specfun::bessel_k(1.0, x); }

// Regular part (1/2 pi) sum of image K0 terms at the diagonal of the cylinder.
double cylinder_image_part(double L, double H, double m, double y) {
  const double cut = kBesselCut / m;
  const int K = int(std::ceil(cut / L)), J = int(std::ceil(cut / (2.0 * H))) + 1;
  double s = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double X = k * L;
    if (std::abs(X) > cut) continue;
    for (int j = -J; j <= J; ++j) {
      if (k != 0 || j != 0) {
        const double r = std::hypot(X, 2.0 * j * H);
        if (r <= cut) s += k0(m * r);
      }
      const double r2 = std::hypot(X, 2.0 * y - 2.0 * j * H);
      if (r2 <= cut) s -= k0(m * r2);
    }
  }
  return s / (2.0 * pi);
}

double sphere_tau(double m, double R) {
  const double q = 0.25 - m * m * R * R;
  cplx a1, a2;
  if (q >= 0.0) {
    a1 = 0.5 + std::sqrt(q);
    a2 = 0.5 - std::sqrt(q);
  } else {
    a1 = cplx(0.5, std::sqrt(-q));
    a2 = cplx(0.5, -std::sqrt(-q));
  }
  const cplx s = specfun::digamma(a1) + specfun::digamma(a2);
  if (std::abs(s.imag()) > 1e-9) throw ConvergenceError("sphere tadpole: digamma pair is not real");
  return (std::log(R * R) - s.real()) / (4.0 * pi);
}

// log det on the round sphere through the Barnes G function.
double sphere_log_det(double m, double R) {
  const double z = m * m * R * R;
  const double q = 0.25 - z;
  cplx a1, a2;
  double logcos;
  if (q >= 0.0) {
    const double b = std::sqrt(q);
    a1 = 0.5 + b;
    a2 = 0.5 - b;
    logcos = std::log(std::cos(pi * b) / pi);
  } else {
    const double b = std::sqrt(-q);
    a1 = cplx(0.5, b);
    a2 = cplx(0.5, -b);
    logcos = std::log(std::cosh(pi * b) / pi);
  }
  const double C = 0.5 - 4.0 * specfun::zeta_prime_m1;
  const cplx lg = specfun::log_barnes_g(a1) + specfun::log_barnes_g(a2);
  if (std::abs(lg.imag()) > 1e-9) throw ConvergenceError("sphere log det: Barnes G pair is not real");
  const double logF = C - 2.0 * z - logcos + 2.0 * lg.real();
  return -2.0 * (1.0 / 3.0 - z) * std::log(R) + logF;
}

double torus_zeta_prime(double L1, double L2, double m) {
  const double m2 = m * m;
  const double s = lattice_sum(L1, L2, m, [&](double b) { return k1(m * b) / b; });
  return L1 * L2 / (4.0 * pi) * m2 * (std::log(m2) - 1.0) + L1 * L2 * m / pi * s;
}

double cylinder_zeta_prime(double L, double H, double m) {
  const double m2 = m * m;
  const double cut = kBesselCut / m;
  double sj = 0.0;
  for (int j = 1; 2.0 * m * j * H <= kBesselCut; ++j) sj += k1(2.0 * m * j * H) / j;
  double sk = 0.0;
  for (int k = 1; m * k * L <= kBesselCut; ++k) sk += k1(m * k * L) / k;
  double sd = 0.0;
  const int K = int(std::ceil(2.0 * cut / L)), J = int(std::ceil(cut / H));
  for (int k = 1; k <= K; ++k)
    for (int j = 1; j <= J; ++j) {
      const double b = std::hypot(0.5 * k * L, j * H);
      if (2.0 * m * b > 2.0 * kBesselCut) continue;
      sd += 4.0 * k1(2.0 * m * b) / b;  // four sign quadrants
    }
  return L * H / (4.0 * pi) * m2 * (std::log(m2) - 1.0) + L * m / 2.0 + L * m / pi * sj + 2.0 * H * m / pi * sk +
         std::log(-std::expm1(-m * L)) + L * H * m / (2.0 * pi) * sd;
}

}  // namespace

HeatTraceSplit heat_trace_split(const Geometry& g, Point p) {
  HeatTraceSplit s;
  s.dimension = g.dimension();
  s.leading = s.dimension == 1 ? 1.0 / std::sqrt(4.0 * pi) : 1.0 / (4.0 * pi);
  s.a1 = s.dimension == 2 ? scalar_curvature(g, p) / (24.0 * pi) : 0.0;
  s.remainder = [g, p](double t) { return heat_trace_diag_remainder(g, p, t); };
  return s;
}

double tau_reg(const Geometry& g, double m, Point p) {
  require_mass(m);
  if (!is_interior(g, p)) throw DomainError("tau_reg: point must be interior");
  const double m2 = m * m;
  auto f = [&](double t) { return m2 * t > 700.0 ? 0.0 : std::exp(-m2 * t) * heat_trace_diag_remainder(g, p, t); };
  const double I = mellin(f, split_time(g), false);
  if (g.dimension() == 1) return 1.0 / (2.0 * m) + I;
  return -std::log(m2) / (4.0 * pi) + I;
}

double tau_reg_closed(const Geometry& g, double m, Point p) {
  require_mass(m);
  if (!is_interior(g, p)) throw DomainError("tau_reg_closed: point must be interior");
  switch (g.kind) {
    case Kind::Interval:
    case Kind::Circle: return greens(g, m, p, p);
    case Kind::Torus:
      return -std::log(m * m) / (4.0 * pi) + lattice_sum(g.a, g.b, m, [&](double b) { return k0(m * b); }) / (2.0 * pi);
    case Kind::Cylinder: return -std::log(m) / (2.0 * pi) + cylinder_image_part(g.a, g.b, m, p[1]);
    case Kind::Sphere: return sphere_tau(m, g.a);
    case Kind::Hemisphere: return sphere_tau(m, g.a) - greens(Geometry::sphere(g.a), m, p, {pi - p[0], p[1]});
    default: throw UnsupportedError("tau_reg_closed: no closed form for " + g.to_string());
  }
}

double tau_split(const Geometry& g, double m, Point p) {
  if (g.dimension() != 2) throw UnsupportedError("tau_split: point splitting is defined on surfaces");
  return tau_reg(g, m, p) - tau_reg_minus_split();
}

double tau_split_limit(const Geometry& g, double m, Point p) {
  require_mass(m);
  if (!is_interior(g, p)) throw DomainError("tau_split_limit: point must be interior");
  const double local = (kLog2 - euler_gamma - std::log(m)) / (2.0 * pi);
  switch (g.kind) {
    case Kind::Torus:
      return local + lattice_sum(g.a, g.b, m, [&](double b) { return k0(m * b); }) / (2.0 * pi);
    case Kind::Cylinder: return local + cylinder_image_part(g.a, g.b, m, p[1]);
    case Kind::Sphere:
    case Kind::Hemisphere: {
      // F(a, b; 1; z) = (cos pi beta / pi) [-2 gamma - psi(a) - psi(b) - log(1 - z)] + O((1-z) log(1-z)),
      // with 1 - z = sin^2(d / 2R).
      const double R = g.a;
      const double q = 0.25 - m * m * R * R;
      cplx a1, a2;
      if (q >= 0.0) {
        a1 = 0.5 + std::sqrt(q);
        a2 = 0.5 - std::sqrt(q);
      } else {
        a1 = cplx(0.5, std::sqrt(-q));
        a2 = cplx(0.5, -std::sqrt(-q));
      }
      const double psi = (specfun::digamma(a1) + specfun::digamma(a2)).real();
      double v = (2.0 * kLog2 - 2.0 * euler_gamma - psi + std::log(R * R)) / (4.0 * pi);
      if (g.kind == Kind::Hemisphere) v -= greens(Geometry::sphere(R), m, p, {pi - p[0], p[1]});
      return v;
    }
    default: throw UnsupportedError("tau_split_limit: no point-splitting limit for " + g.to_string());
  }
}

double tau_split_extrapolated(const Geometry& g, double m, Point p) {
  if (g.dimension() != 2) throw UnsupportedError("tau_split_extrapolated: surfaces only");
  // step along the first chart coordinate; the correction to the limit is O(d^2 log d)
  const double scale = g.kind == Kind::Torus || g.kind == Kind::Cylinder ? std::min(g.a, g.kind == Kind::Torus ? g.b : g.a) : g.a;
  auto sample = [&](double d) {
    Point q = p;
    if (g.kind == Kind::Torus || g.kind == Kind::Cylinder)
      q[0] += d;
    else
      q[0] += d / g.a;
    const double dist = distance(g, p, q);
    return greens(g, m, p, q) + std::log(dist) / (2.0 * pi);
  };
  // Richardson on d = scale * 10^{-k}, k = 2..5, assuming an error series in d^2
  // (the d^2 log d piece is killed to the accuracy we need by the small steps).
  double a[4];
  for (int k = 0; k < 4; ++k) a[k] = sample(scale * std::pow(10.0, -2.0 - k));
  for (int lvl = 1; lvl < 4; ++lvl)
    for (int k = 3; k >= lvl; --k) {
      const double r = std::pow(100.0, lvl);
      a[k] = (r * a[k] - a[k - 1]) / (r - 1.0);
    }
  return a[3];
}

double log_det_closed(const Geometry& g, double m) {
  require_mass(m);
  switch (g.kind) {
    case Kind::Interval: {
      const double ml = m * g.a;
      return ml + std::log(-std::expm1(-2.0 * ml)) - std::log(m);
    }
    case Kind::Circle: {
      const double x = 0.5 * m * g.a;
      return 2.0 * (x + std::log(-std::expm1(-2.0 * x)));
    }
    case Kind::Torus: return -torus_zeta_prime(g.a, g.b, m);
    case Kind::Cylinder: return -cylinder_zeta_prime(g.a, g.b, m);
    case Kind::Sphere: return sphere_log_det(m, g.a);
    default: throw UnsupportedError("log_det_closed: no closed form for " + g.to_string());
  }
}

double log_det_mellin(const Geometry& g, double m, BoundaryCondition bc) {
  require_mass(m);
  const auto c = trace_coefficients(g, bc);
  const double m2 = m * m;
  auto f = [&](double t) {
    return m2 * t > 700.0 ? 0.0 : std::exp(-m2 * t) * heat_trace_total_remainder(g, t, bc) / t;
  };
  const bool sqrt_singular = g.kind == Kind::Hemisphere;
  const double I = mellin(f, split_time(g), sqrt_singular);
  const double zp = c.c_m1 * m2 * (std::log(m2) - 1.0) - 2.0 * std::sqrt(pi) * m * c.c_mhalf - c.c_0 * std::log(m2) + I;
  return -zp;
}

double log_det_zeta(const Geometry& g, double m) {
  switch (g.kind) {
    case Kind::Interval:
    case Kind::Circle:
    case Kind::Torus:
    case Kind::Cylinder:
    case Kind::Sphere: return log_det_closed(g, m);
    default: return log_det_mellin(g, m);
  }
}

double integrated_tadpole(const Geometry& g, double m) {
  require_mass(m);
  switch (g.kind) {
    case Kind::Interval: {
      const auto r = quad::adaptive([&](double x) { return greens(g, m, {x, 0.0}, {x, 0.0}); }, 0.0, g.a, 1e-14);
      return r.value;
    }
    case Kind::Circle:
    case Kind::Torus:
    case Kind::Sphere: return g.volume() * tau_reg_closed(g, m, {0.3, 0.2});
    case Kind::Cylinder: {
      // log singularity at the boundary circles; reflect about y = H/2
      const auto r = quad::tanh_sinh([&](double y) { return tau_reg_closed(g, m, {0.0, y}); }, 0.0, 0.5 * g.b, 1e-13);
      return 2.0 * g.a * r.value;
    }
    default: throw UnsupportedError("integrated_tadpole: unsupported geometry " + g.to_string());
  }
}

double dlogdet_dm2(const Geometry& g, double m) {
  require_mass(m);
  const double m2 = m * m, h = 1e-4 * m2;
  auto f = [&](double s) { return log_det_closed(g, std::sqrt(s)); };
  return (f(m2 - 2 * h) - 8.0 * f(m2 - h) + 8.0 * f(m2 + h) - f(m2 + 2 * h)) / (12.0 * h);
}

double weak_compatibility_residual(const Geometry& g, double m) {
  return std::abs(integrated_tadpole(g, m) - dlogdet_dm2(g, m));
}

double local_zeta_at_zero(const Geometry& g, double m, Point p) {
  require_mass(m);
  if (g.dimension() != 2) throw UnsupportedError("local_zeta_at_zero: surfaces only");
  // the remainder is analytic in t near 0 up to exponentially small terms;
  // extrapolate it to t = 0 with a quadratic through three small times
  const double R2 = g.kind == Kind::Sphere || g.kind == Kind::Hemisphere ? g.a * g.a : 1.0;
  const double t1 = 1e-3 * R2, t2 = 2e-3 * R2, t3 = 3e-3 * R2;
  const double f1 = heat_trace_diag_remainder(g, p, t1), f2 = heat_trace_diag_remainder(g, p, t2),
               f3 = heat_trace_diag_remainder(g, p, t3);
  const double r0 = 3.0 * f1 - 3.0 * f2 + f3;
  return r0 - m * m / (4.0 * pi);
}

}  // namespace zqft::zeta
