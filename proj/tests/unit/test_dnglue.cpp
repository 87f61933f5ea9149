#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "zqft/dnglue.hpp"
#include "zqft/errors.hpp"
#include "zqft/zetareg.hpp"

using namespace zqft;
using std::numbers::pi;

TEST_CASE("interval DN matrix from the harmonic extension") {
  // u(x) = a sinh(m(l-x))/sinh(ml) + b sinh(mx)/sinh(ml); D maps (a, b) to outward derivatives.
  const double l = 0.9, m = 1.3;
  const auto D = dn::interval_dn_matrix(l, m);
  auto u = [&](double a, double b, double x) { return (a * std::sinh(m * (l - x)) + b * std::sinh(m * x)) / std::sinh(m * l); };
  const double h = 1e-5;
  for (auto [a, b] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
    const double left = -(u(a, b, h) - u(a, b, -h)) / (2 * h);
    const double right = (u(a, b, l + h) - u(a, b, l - h)) / (2 * h);
    CHECK(D[0][0] * a + D[0][1] * b == doctest::Approx(left).epsilon(1e-8));
    CHECK(D[1][0] * a + D[1][1] * b == doctest::Approx(right).epsilon(1e-8));
  }
}

TEST_CASE("disk and cylinder DN eigenvalues") {
  const double R = 1.2, m = 0.7;
  const Geometry disk = Geometry::disk(R);
  for (int n : {0, 1, 4, 30}) {
    const double x = m * R;
    const double ref = m * boost::math::cyl_bessel_i_prime(n, x) / boost::math::cyl_bessel_i(n, x);
    CHECK(dn::dn_eigenvalue(disk, BoundaryId::Rim, m, n) == doctest::Approx(ref).epsilon(1e-12));
  }
  const double L = 2 * pi, H = 0.8;
  const Geometry cyl = Geometry::cylinder(L, H);
  for (int n : {0, 2, 9}) {
    const double w = std::sqrt(m * m + std::pow(2 * pi * n / L, 2));
    CHECK(dn::dn_eigenvalue(cyl, BoundaryId::Bottom, m, n) == doctest::Approx(w / std::tanh(H * w)).epsilon(1e-13));
    CHECK(dn::cylinder_dn_offdiag(cyl, m, n) == doctest::Approx(-w / std::sinh(H * w)).epsilon(1e-13));
  }
}

TEST_CASE("DN spectrum of a hemisphere approaches omega_n") {
  const auto fit = dn::delta_order_fit(Geometry::hemisphere(1), 0.8, 32, 256);
  CHECK_FALSE(fit.superpolynomial);
  CHECK(fit.slope == doctest::Approx(-4.0).epsilon(0.03));
  const auto cyl = dn::delta_order_fit(Geometry::cylinder(2 * pi, 1), 0.8, 32, 256);
  CHECK(cyl.superpolynomial);
  CHECK(dn::sector_dn_ratio_asymptotic(1, 1.2, 0.5, 4000) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("1D BFK by hand") {
  // 2 sinh(m(l1+l2))/m = (2 sinh(m l1)/m)(2 sinh(m l2)/m) * 1/2 * m (coth(m l1) + coth(m l2))
  const double l1 = 0.7, l2 = 1.6, m = 0.9;
  const auto gl = dn::Gluing::make(Geometry::interval(l1), Geometry::interval(l2));
  CHECK(gl.glued() == Geometry::interval(l1 + l2));
  CHECK(gl.log_bfk_constant() == doctest::Approx(std::log(0.5)));
  const double lhs = std::log(2 * std::sinh(m * (l1 + l2)) / m);
  const double rhs = std::log(2 * std::sinh(m * l1) / m) + std::log(2 * std::sinh(m * l2) / m) +
                     std::log(0.5 * m * (1 / std::tanh(m * l1) + 1 / std::tanh(m * l2)));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  CHECK(dn::bfk_residual(gl, m).residual < 1e-12);
  const auto circ = dn::Gluing::make(Geometry::interval(l1), Geometry::interval(l2), true);
  CHECK(circ.glued() == Geometry::circle(l1 + l2));
  CHECK(dn::bfk_residual(circ, m).residual < 1e-12);
}

TEST_CASE("2D BFK and Green's function gluing") {
  const auto cyl = dn::Gluing::make(Geometry::cylinder(2 * pi, 0.6), Geometry::cylinder(2 * pi, 0.9));
  CHECK(dn::bfk_residual(cyl, 0.8, 64).residual < 1e-6);
  CHECK(dn::greens_glue_residual(cyl, 0.8, {0.3, 0.2}, {2.0, 1.1}).residual < 1e-8);
  const auto sph = dn::Gluing::make(Geometry::hemisphere(1), Geometry::hemisphere(1));
  CHECK(sph.glued() == Geometry::sphere(1));
  CHECK(dn::bfk_residual(sph, 0.8, 128).residual < 1e-5);
  CHECK(dn::tadpole_glue_residual(sph, 0.8, {0.9, 0.4}).residual < 1e-5);
}

TEST_CASE("interface correction equals the tadpole difference in 1D") {
  const double l1 = 0.8, l2 = 1.1, m = 1.0, x = 0.5;
  const auto gl = dn::Gluing::make(Geometry::interval(l1), Geometry::interval(l2));
  const double glued = zeta::tau_reg_closed(Geometry::interval(l1 + l2), m, {x, 0});
  const double piece = zeta::tau_reg_closed(Geometry::interval(l1), m, {x, 0});
  CHECK(dn::interface_correction(gl, m, {x, 0}, {x, 0}) == doctest::Approx(glued - piece).epsilon(1e-12));
  CHECK(dn::tadpole_glue(gl, m, {x, 0}) == doctest::Approx(glued).epsilon(1e-12));
}

TEST_CASE("kappa") {
  CHECK(dn::kappa_eigenvalue(0, 0.7, 0) == 0.7);
  CHECK(dn::kappa_eigenvalue(2 * pi, 0.7, 3) == doctest::Approx(std::sqrt(9 + 0.49)));
  CHECK(dn::log_det_reg_kappa(2.0, 0.7) == doctest::Approx(std::log(2 * std::sinh(0.7))));
}
