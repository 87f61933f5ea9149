#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "zqft/zetareg.hpp"

using namespace zqft;
using std::numbers::pi;

TEST_CASE("1D determinants") {
  // interval: det = 2 sinh(m l) / m; circle: det = 4 sinh^2(m L / 2)
  CHECK(zeta::log_det_zeta(Geometry::interval(1), 1) == doctest::Approx(0.854586542131141).epsilon(1e-12));
  for (double m : {0.3, 1.0, 2.5}) {
    const double l = 1.3;
    CHECK(zeta::log_det_closed(Geometry::interval(l), m) == doctest::Approx(std::log(2 * std::sinh(m * l) / m)).epsilon(1e-13));
    CHECK(zeta::log_det_mellin(Geometry::interval(l), m) == doctest::Approx(std::log(2 * std::sinh(m * l) / m)).epsilon(1e-9));
    CHECK(zeta::log_det_closed(Geometry::circle(l), m) == doctest::Approx(2 * std::log(2 * std::sinh(m * l / 2))).epsilon(1e-13));
    CHECK(zeta::log_det_mellin(Geometry::circle(l), m) == doctest::Approx(2 * std::log(2 * std::sinh(m * l / 2))).epsilon(1e-9));
  }
}

TEST_CASE("mellin and closed determinants agree in 2D") {
  for (const char* s : {"torus:L1=1,L2=1.5", "sphere:R=1", "cylinder:L=6.2831853,H=1"}) {
    const Geometry g = Geometry::parse(s);
    CAPTURE(s);
    CHECK(std::abs(zeta::log_det_mellin(g, 0.9) - zeta::log_det_closed(g, 0.9)) < 1e-8);
  }
}

TEST_CASE("1D tadpole is the Green's function diagonal") {
  const double l = 1.1, m = 0.7;
  for (double x : {0.05, 0.4, 0.9}) {
    const double ref = std::sinh(m * x) * std::sinh(m * (l - x)) / (m * std::sinh(m * l));
    CHECK(zeta::tau_reg(Geometry::interval(l), m, {x, 0}) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(zeta::tau_reg_closed(Geometry::interval(l), m, {x, 0}) == doctest::Approx(ref).epsilon(1e-13));
  }
  const double L = 2.0;
  CHECK(zeta::tau_reg(Geometry::circle(L), m, {0.3, 0}) ==
        doctest::Approx(std::cosh(m * L / 2) / (2 * m * std::sinh(m * L / 2))).epsilon(1e-9));
}

TEST_CASE("torus tadpole from Bessel image sums") {
  // -log(m^2) / (4 pi) + (1 / 2 pi) sum_{n != 0} K_0(m |n . L|)
  const double L1 = 1.0, L2 = 1.4, m = 0.9;
  double ref = -std::log(m * m) / (4 * pi);
  for (int a = -30; a <= 30; ++a) {
    for (int b = -30; b <= 30; ++b) {
      if (a == 0 && b == 0) continue;
      ref += boost::math::cyl_bessel_k(0, m * std::hypot(a * L1, b * L2)) / (2 * pi);
    }
  }
  const Geometry g = Geometry::torus(L1, L2);
  CHECK(zeta::tau_reg(g, m, {0.2, 0.3}) == doctest::Approx(ref).epsilon(1e-9));
  CHECK(zeta::tau_reg_closed(g, m, {0.2, 0.3}) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("regularized and point-split tadpoles differ by a constant") {
  const double shift = (0.57721566490153286061 - std::log(2.0)) / (2 * pi);
  CHECK(zeta::tau_reg_minus_split() == doctest::Approx(shift).epsilon(1e-15));
  CHECK(shift == doctest::Approx(-0.0184509).epsilon(1e-5));
  for (const char* s : {"torus:L1=1,L2=1", "sphere:R=1", "hemisphere:R=1"}) {
    const Geometry g = Geometry::parse(s);
    CAPTURE(s);
    const Point p{0.7, 0.3};
    CHECK(std::abs(zeta::tau_reg_closed(g, 0.8, p) - zeta::tau_split_limit(g, 0.8, p) - shift) < 1e-9);
  }
}

TEST_CASE("weak compatibility and local zeta at zero") {
  for (const char* s : {"interval:l=1", "circle:L=2", "torus:L1=1,L2=2", "sphere:R=1"}) {
    CAPTURE(s);
    CHECK(zeta::weak_compatibility_residual(Geometry::parse(s), 0.7) < 1e-7);
  }
  const double R = 1.5, m = 0.6;
  CHECK(zeta::local_zeta_at_zero(Geometry::sphere(R), m, {1, 1}) ==
        doctest::Approx((2 / (R * R) / 6 - m * m) / (4 * pi)).epsilon(1e-9));
}
