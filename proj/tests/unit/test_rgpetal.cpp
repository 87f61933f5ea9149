#include <doctest.h>

#include <cmath>

#include "zqft/rgpetal.hpp"

using namespace zqft;

namespace {

double bisect(const std::function<double(double)>& f, double a, double b) {
  for (int i = 0; i < 200; ++i) {
    const double c = 0.5 * (a + b);
    (f(a) * f(c) <= 0 ? b : a) = c;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("petal transform shifts by hbar tau / 2") {
  const auto p = pert::Potential::parse("p4=1.5", 4);
  const double tau = 0.4;
  const auto r = rg::petal_transform(p, tau);
  CHECK(r.coeff(4)[0] == 1.5);
  CHECK(r.coeff(2)[2] == doctest::Approx(0.2 * 1.5));
  CHECK(r.coeff(0)[4] == doctest::Approx(0.2 * 0.2 / 2 * 1.5));
  CHECK(r.coeff(2)[0] == 0.0);
}

TEST_CASE("group law and flow") {
  const auto p = pert::Potential::parse("p3=0.5,p4=1,p6=-0.25,p8=0.1", 6);
  CHECK(rg::group_law_residual(p, 0.3, -0.7) < 1e-14);
  CHECK(rg::rg_flow_residual(p, 0.3, 1e-3) < 1e-8);
  const auto e = rg::ExactPotential::monomial(8, rg::Rational(3, 7), 4);
  CHECK(rg::group_law_residual_exact(e, rg::Rational(1, 3), rg::Rational(-5, 2)).numerator() == 0);
  CHECK(rg::petal_transform(rg::petal_transform(e, rg::Rational(1, 2)), rg::Rational(-1, 2)) == e);
}

TEST_CASE("changing a constant tadpole is absorbed by the petal transform") {
  const auto p = pert::Potential::parse("p3=0.6,p4=-0.4", 8);
  CHECK(rg::partition_consistency_residual(Geometry::circle(1.5), 0.9, p, 0.3, 0.1, 2).max() < 1e-10);
  CHECK(rg::partition_consistency_residual(Geometry::interval(1.2), 0.9, p, 0.3, -0.2, 2).max() < 1e-10);
}

TEST_CASE("critical point reduction") {
  const double m = 1.0, p1 = 0.1, p3 = 0.2;
  const auto r = rg::reduce_low_valence({0.0, p1, 0.0, p3}, m);
  const double ref = bisect([&](double x) { return m * m * x + p1 + p3 * x * x / 2; }, -0.5, 0.0);
  CHECK(r.phi_cr == doctest::Approx(ref).epsilon(1e-12));
  CHECK(r.phi_cr == doctest::Approx(-0.1010205144).epsilon(1e-9));
  CHECK(r.mass == doctest::Approx(std::sqrt(m * m + p3 * ref)).epsilon(1e-12));
  CHECK(r.constant == doctest::Approx(m * m * ref * ref / 2 + p1 * ref + p3 * std::pow(ref, 3) / 6).epsilon(1e-12));
  CHECK(r.p.at(3) == doctest::Approx(p3));

  const auto lin = rg::reduce_low_valence({0.0, 0.3}, 2.0);
  CHECK(lin.phi_cr == doctest::Approx(-0.3 / 4));
  CHECK(lin.mass == doctest::Approx(2.0));
  CHECK(lin.constant == doctest::Approx(-0.09 / 8));
}

TEST_CASE("mass insertions resum") {
  CHECK(rg::neumann_residual(2.0, 1.0, 0.3, 0.4) < 1e-13);
  CHECK(rg::neumann_residual(2.0, 1.0, -0.3, 0.9) < 1e-13);
}

TEST_CASE("trace anomaly") {
  const auto a = rg::trace_anomaly_sphere(1.0, 0.8);
  CHECK(a.residual < 1e-8);
  CHECK(a.rhs == doctest::Approx(-1.0 / 3 + 0.64));
  CHECK(a.density == doctest::Approx(a.density_expected).epsilon(1e-9));
  CHECK(rg::flat_anomaly_residual(1.0, 1.3, 0.7) < 1e-10);
  CHECK(rg::integrated_classical_trace(1.0, 1e-3) == doctest::Approx(1.0).epsilon(1e-4));
  const auto law = rg::sphere_small_mass_law();
  CHECK(law.exponent_error < 1e-3);
  CHECK(rg::cutoff_tadpole(1.0, 1.2, 0.8).residual < 1e-8);
}
