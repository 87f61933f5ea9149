#include "zqft/rgpetal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zqft/errors.hpp"
#include "zqft/quadrature.hpp"
#include "zqft/specfun.hpp"
#include "zqft/zetareg.hpp"

namespace zqft::rg {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = std::numbers::egamma;

double max_coefficient_gap(const pert::Potential& a, const pert::Potential& b) {
  double r = 0.0;
  const int deg = std::max(a.degree(), b.degree());
  for (int n = 0; n <= deg; ++n) r = std::max(r, (a.coeff(n) - b.coeff(n)).max_abs());
  return r;
}

Rational abs(Rational x) { return x < Rational(0) ? -x : x; }

}  // namespace

pert::Potential petal_transform(const pert::Potential& p, double tau) {
  pert::Potential out = pert::Potential::zero(p.twice_kmax);
  out.low_valence = p.low_valence;
  const int deg = p.degree();
  for (int n = 0; n <= deg; ++n) {
    HbarSeries c(p.twice_kmax);
    double w = 1.0;  // (tau / 2)^k / k!
    for (int k = 0; n + 2 * k <= deg && 2 * k <= p.twice_kmax; ++k) {
      c += p.coeff(n + 2 * k).shifted(2 * k) * w;
      w *= 0.5 * tau / (k + 1);
    }
    if (n <= 2 && !c.is_zero()) out.low_valence = true;
    out.set(n, c);
  }
  return out;
}

ExactPotential ExactPotential::monomial(int n, Rational coeff, int kmax) {
  ExactPotential p;
  p.kmax = kmax;
  p.c.assign(n + 1, std::vector<Rational>(kmax + 1, Rational(0)));
  p.c[n][0] = coeff;
  return p;
}

Rational ExactPotential::at(int n, int j) const {
  if (n < 0 || n >= int(c.size()) || j < 0 || j > kmax) return Rational(0);
  return c[n][j];
}

bool ExactPotential::operator==(const ExactPotential& o) const {
  const int deg = int(std::max(c.size(), o.c.size()));
  for (int n = 0; n < deg; ++n) {
    for (int j = 0; j <= std::max(kmax, o.kmax); ++j) {
      if (at(n, j) != o.at(n, j)) return false;
    }
  }
  return true;
}

ExactPotential petal_transform(const ExactPotential& p, Rational tau) {
  ExactPotential out;
  out.kmax = p.kmax;
  const int deg = int(p.c.size()) - 1;
  out.c.assign(p.c.size(), std::vector<Rational>(p.kmax + 1, Rational(0)));
  for (int n = 0; n <= deg; ++n) {
    Rational w(1);
    for (int k = 0; n + 2 * k <= deg && k <= p.kmax; ++k) {
      for (int j = 0; j + k <= p.kmax; ++j) out.c[n][j + k] += w * p.at(n + 2 * k, j);
      w *= tau / Rational(2 * (k + 1));
    }
  }
  return out;
}

double group_law_residual(const pert::Potential& p, double tau1, double tau2) {
  return max_coefficient_gap(petal_transform(p, tau1 + tau2), petal_transform(petal_transform(p, tau2), tau1));
}

Rational group_law_residual_exact(const ExactPotential& p, Rational tau1, Rational tau2) {
  const ExactPotential a = petal_transform(p, tau1 + tau2);
  const ExactPotential b = petal_transform(petal_transform(p, tau2), tau1);
  Rational r(0);
  for (int n = 0; n < int(p.c.size()); ++n) {
    for (int j = 0; j <= p.kmax; ++j) r = std::max(r, abs(a.at(n, j) - b.at(n, j)));
  }
  return r;
}

double rg_flow_residual(const pert::Potential& p, double tau, double dtau) {
  if (!(dtau > 0.0)) throw DomainError("dtau must be positive");
  const pert::Potential plus = petal_transform(p, tau + dtau);
  const pert::Potential minus = petal_transform(p, tau - dtau);
  const pert::Potential mid = petal_transform(p, tau);
  double r = 0.0;
  for (int n = 0; n <= p.degree(); ++n) {
    const HbarSeries fd = (plus.coeff(n) - minus.coeff(n)) * (0.5 / dtau);
    const HbarSeries rhs = mid.coeff(n + 2).shifted(2) * 0.5;
    r = std::max(r, (fd - rhs).max_abs());
  }
  return r;
}

pert::OrderResiduals partition_consistency_residual(const Geometry& g, double m, const pert::Potential& p,
                                                    double tau1, double tau2, int twice_kmax,
                                                    const std::vector<double>& eta_grid) {
  if (twice_kmax > 2) throw UnsupportedError("partition consistency is checked up to order hbar^1");
  const pert::BoundaryState z1 =
      pert::partition_function(g, m, p, pert::TadpoleField::constant(tau1), twice_kmax);
  // low-valence couplings of R p are needed beyond the truncation
  pert::Potential deep = p;
  deep.twice_kmax = 3 * twice_kmax + 2;
  const pert::BoundaryState z2 = pert::partition_function(g, m, petal_transform(deep, tau1 - tau2),
                                                          pert::TadpoleField::constant(tau2), twice_kmax);
  pert::OrderResiduals out;
  out.residual.assign(twice_kmax + 1, 0.0);
  auto accumulate = [&](const std::vector<double>& eta) {
    const HbarSeries d = z1.evaluate(eta) - z2.evaluate(eta);
    for (int j = 0; j <= twice_kmax; ++j) out.residual[j] = std::max(out.residual[j], std::abs(d[j]));
  };
  if (z1.points.empty()) {
    accumulate({});
  } else {
    for (double a : eta_grid) {
      for (double b : eta_grid) accumulate({a, b});
    }
  }
  return out;
}

Reduction reduce_low_valence(const std::vector<double>& p, double m) {
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  const int deg = int(p.size()) - 1;
  // k-th derivative of p at phi
  auto deriv = [&](int k, double phi) {
    double s = 0.0, w = 1.0;
    for (int j = k; j <= deg; ++j) {
      s += p[j] * w;
      w *= phi / (j - k + 1);
    }
    return s;
  };
  Reduction r;
  const double m2 = m * m;
  double phi = 0.0;
  bool converged = false;
  for (int it = 1; it <= 10000; ++it) {
    const double xi = -deriv(1, phi) / m2;
    const double step = std::abs(xi - phi);
    phi = xi;
    r.iterations = it;
    if (!std::isfinite(phi) || std::abs(phi) > 1e8) break;
    if (step <= 1e-13 * std::max(1.0, std::abs(phi))) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError("critical point iteration does not contract", std::abs(phi));
  r.phi_cr = phi;
  const double m2t = m2 + deriv(2, phi);
  if (!(m2t > 0.0)) throw DomainError("shifted mass squared is not positive");
  r.mass = std::sqrt(m2t);
  r.constant = 0.5 * m2 * phi * phi + deriv(0, phi);
  r.p.assign(std::max(deg + 1, 3), 0.0);
  for (int n = 3; n <= deg; ++n) r.p[n] = deriv(n, phi);
  return r;
}

double neumann_residual(double L, double m, double p2, double separation, int K) {
  if (!(L > 0.0) || !(m > 0.0)) throw DomainError("circle length and mass must be positive");
  if (std::abs(p2) >= m * m) throw ConvergenceError("Neumann series diverges: |p_2| >= m^2");
  if (m * m + p2 <= 0.0) throw DomainError("shifted mass squared is not positive");
  const double mt = std::sqrt(m * m + p2);
  auto G = [&](double mass) {
    return std::cosh(mass * (0.5 * L - separation)) / (2.0 * mass * std::sinh(0.5 * mass * L));
  };
  // the k = 0 term is G_m itself; the rest of the series converges per mode
  double corr = 0.0;
  const int N = 4000;
  for (int n = N; n >= -N; --n) {
    const double lam = std::pow(2.0 * pi * n / L, 2) + m * m;
    double term = 1.0 / lam, s = 0.0;
    for (int k = 1; k <= K; ++k) {
      term *= -p2 / lam;
      s += term;
    }
    corr += std::cos(2.0 * pi * n * separation / L) * s / L;
  }
  return std::abs(G(m) + corr - G(mt));
}

AnomalyCheck trace_anomaly_sphere(double R, double m, double h) {
  if (!(R > 0.0) || !(m > 0.0)) throw DomainError("radius and mass must be positive");
  if (std::abs(m * R - 0.5) < 1e-3) throw DomainError("too close to the branch point mR = 1/2");
  auto f = [](double s, double t) {
    return zeta::log_det_closed(Geometry::sphere(std::exp(0.5 * s)), std::exp(0.5 * t));
  };
  const double s0 = std::log(R * R), t0 = std::log(m * m);
  auto d = [&](double ds, double dt) {
    return (-f(s0 + 2 * ds, t0 + 2 * dt) + 8 * f(s0 + ds, t0 + dt) - 8 * f(s0 - ds, t0 - dt) +
            f(s0 - 2 * ds, t0 - 2 * dt)) /
           (12.0 * h);
  };
  AnomalyCheck a;
  a.lhs = d(h, 0.0) - d(0.0, h);
  a.rhs = -1.0 / 3.0 + m * m * R * R;
  a.residual = std::abs(a.lhs - a.rhs);
  const Geometry sphere = Geometry::sphere(R);
  const Point x{1.0, 0.5};
  a.density = zeta::local_zeta_at_zero(sphere, m, x);
  a.density_expected = (scalar_curvature(sphere, x) / 6.0 - m * m) / (4.0 * pi);
  return a;
}

double integrated_classical_trace(double R, double m) {
  return m * m * zeta::integrated_tadpole(Geometry::sphere(R), m);
}

double flat_anomaly_residual(double L1, double L2, double m) {
  const double z = zeta::local_zeta_at_zero(Geometry::torus(L1, L2), m, {0.3 * L1, 0.4 * L2});
  return std::abs(z + m * m / (4.0 * pi));
}

SmallMassLaw sphere_small_mass_law(double m_lo, double m_hi, std::vector<double> radii) {
  if (!(m_lo > 0.0) || !(m_hi > m_lo)) throw DomainError("need 0 < m_lo < m_hi");
  if (radii.size() < 2) throw DomainError("need at least two radii");
  SmallMassLaw out;
  const int nm = 5;
  std::vector<double> logr, logratio;
  for (double R : radii) {
    double first = 0.0;
    for (int i = 0; i < nm; ++i) {
      const double m = m_lo * std::pow(m_hi / m_lo, double(i) / (nm - 1));
      const double ratio =
          std::exp(zeta::log_det_closed(Geometry::sphere(R), m)) / (m * m * R * R);
      if (i == 0) {
        first = ratio;
        logr.push_back(std::log(R));
        logratio.push_back(std::log(ratio));
      }
      out.spread = std::max(out.spread, std::abs(ratio / first - 1.0));
    }
  }
  // least-squares slope of log ratio against log R
  const double n = double(logr.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < logr.size(); ++i) {
    sx += logr[i];
    sy += logratio[i];
    sxx += logr[i] * logr[i];
    sxy += logr[i] * logratio[i];
  }
  out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.exponent_error = std::abs(out.exponent + 2.0 / 3.0);
  return out;
}

CutoffTadpole cutoff_tadpole(double L1, double L2, double m, std::vector<double> lambdas) {
  if (lambdas.size() < 2) throw DomainError("need at least two cutoffs");
  const Geometry torus = Geometry::torus(L1, L2);
  const Point x{0.25 * L1, 0.5 * L2};
  const auto split = zeta::heat_trace_split(torus, x);
  const double m2 = m * m;
  CutoffTadpole out;
  for (double lam : lambdas) {
    const double eps = 1.0 / (lam * lam);
    const double tail =
        quad::semi_infinite([&](double t) { return std::exp(-m2 * t) * split.remainder(t); }, eps).value;
    const double g = specfun::exp_integral_e1(m2 * eps) / (4.0 * pi) + tail;
    out.lambda.push_back(lam);
    out.shifted.push_back(g - std::log(lam) / (2.0 * pi));
  }
  // the error is O(1 / Lambda^2): Richardson on the two largest cutoffs
  const std::size_t k = out.lambda.size() - 1;
  const double a = out.lambda[k - 1] * out.lambda[k - 1], b = out.lambda[k] * out.lambda[k];
  out.extrapolated = (b * out.shifted[k] - a * out.shifted[k - 1]) / (b - a);
  out.target = zeta::tau_reg_closed(torus, m, x) - euler_gamma / (4.0 * pi);
  out.residual = std::abs(out.extrapolated - out.target);
  return out;
}

}  // namespace zqft::rg
