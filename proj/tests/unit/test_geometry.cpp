#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zqft/errors.hpp"
#include "zqft/geometry.hpp"

using namespace zqft;
using std::numbers::pi;

namespace {

// Eigenfunction sums, no resummation.
double interval_theta(double l, double x, double t) {
  double s = 0.0;
  for (int n = 1; n < 4000; ++n) {
    const double k = n * pi / l;
    s += 2.0 / l * std::pow(std::sin(k * x), 2) * std::exp(-k * k * t);
  }
  return s;
}

double circle_theta(double L, double t) {
  double s = 1.0 / L;
  for (int n = 1; n < 4000; ++n) s += 2.0 / L * std::exp(-std::pow(2 * pi * n / L, 2) * t);
  return s;
}

}  // namespace

TEST_CASE("parse and print round trip") {
  for (const char* s : {"interval:l=1.5", "circle:L=2", "torus:L1=1,L2=2", "cylinder:L=6.2831853,H=0.5", "disk:R=1",
                        "sphere:R=2", "hemisphere:R=1", "sector:R=1,phi=1.2"}) {
    const Geometry g = Geometry::parse(s);
    CHECK(Geometry::parse(g.to_string()) == g);
  }
  CHECK_THROWS_AS(Geometry::parse("interval:l=-1"), DomainError);
  CHECK_THROWS_AS(Geometry::parse("klein:L=1"), DomainError);
  CHECK_THROWS_AS(Geometry::parse("cylinder:L=1"), DomainError);
  CHECK_THROWS_AS(Geometry::parse("sector:R=1,phi=4"), DomainError);
}

TEST_CASE("volumes and boundaries") {
  CHECK(Geometry::sphere(2).volume() == doctest::Approx(16 * pi));
  CHECK(Geometry::hemisphere(1).volume() == doctest::Approx(2 * pi));
  CHECK(Geometry::cylinder(3, 2).volume() == doctest::Approx(6));
  CHECK(boundary_components(Geometry::interval(1)).size() == 2);
  CHECK(boundary_components(Geometry::cylinder(1, 1)).size() == 2);
  CHECK(boundary_components(Geometry::disk(1)).size() == 1);
  CHECK(boundary_components(Geometry::torus(1, 1)).empty());
  CHECK(Geometry::torus(1, 2).dimension() == 2);
  CHECK_FALSE(Geometry::sphere(1).has_boundary());
}

TEST_CASE("heat kernel diagonals against eigenfunction sums") {
  const Geometry iv = Geometry::interval(1.3);
  for (double t : {0.005, 0.05, 0.5, 2.0}) {
    for (double x : {0.1, 0.65, 1.2}) {
      const double ref = interval_theta(1.3, x, t);
      CHECK(std::abs(heat_trace_diag(iv, {x, 0}, t, ThetaForm::Images) - ref) < 1e-11 * std::max(1.0, ref));
      CHECK(std::abs(heat_trace_diag(iv, {x, 0}, t, ThetaForm::Modes) - ref) < 1e-11 * std::max(1.0, ref));
    }
  }
  const Geometry c = Geometry::circle(2.0);
  const Geometry t2 = Geometry::torus(2.0, 0.7);
  for (double t : {0.01, 0.3, 3.0}) {
    CHECK(std::abs(heat_trace_diag(c, {0.4, 0}, t) - circle_theta(2.0, t)) < 1e-11 * circle_theta(2.0, t));
    const double ref = circle_theta(2.0, t) * circle_theta(0.7, t);
    CHECK(std::abs(heat_trace_diag(t2, {0.4, 0.2}, t) - ref) < 1e-11 * ref);
    // remainder is the kernel minus the Euclidean term
    CHECK(std::abs(heat_trace_diag_remainder(t2, {0.4, 0.2}, t) - (ref - 1 / (4 * pi * t))) < 1e-10 * ref);
  }
}

TEST_CASE("total heat trace structure on an interval") {
  const double l = 1.7;
  const auto c = trace_coefficients(Geometry::interval(l));
  CHECK(c.c_m1 == 0.0);
  CHECK(c.c_mhalf == doctest::Approx(l / std::sqrt(4 * pi)).epsilon(1e-14));
  CHECK(c.c_0 == doctest::Approx(-0.5).epsilon(1e-14));
  for (double t : {0.01, 0.2, 1.0}) {
    double ref = 0.0;
    for (int n = 1; n < 4000; ++n) ref += std::exp(-std::pow(n * pi / l, 2) * t);
    CHECK(heat_trace_total(Geometry::interval(l), t) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("sphere heat trace against the spectrum") {
  const double R = 1.4;
  for (double t : {0.05, 0.4, 2.0}) {
    double ref = 0.0;
    for (int l = 0; l < 3000; ++l) ref += (2 * l + 1) * std::exp(-l * (l + 1) * t / (R * R));
    CHECK(heat_trace_total(Geometry::sphere(R), t) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("Green's functions") {
  // interval: sinh(m x<) sinh(m (l - x>)) / (m sinh(m l))
  const double l = 1.2, m = 0.8;
  for (auto [x, y] : {std::pair{0.2, 0.9}, std::pair{0.7, 0.3}, std::pair{0.5, 0.5}}) {
    const double a = std::min(x, y), b = std::max(x, y);
    const double ref = std::sinh(m * a) * std::sinh(m * (l - b)) / (m * std::sinh(m * l));
    CHECK(greens(Geometry::interval(l), m, {x, 0}, {y, 0}) == doctest::Approx(ref).epsilon(1e-14));
  }
  // circle against the mode sum
  const double L = 2.0, d = 0.6;
  double ref = 1 / (L * m * m);
  for (int n = 1; n < 200000; ++n) {
    const double k = 2 * pi * n / L;
    ref += 2 / L * std::cos(k * d) / (k * k + m * m);
  }
  CHECK(greens(Geometry::circle(L), m, {0.1, 0}, {0.1 + d, 0}) == doctest::Approx(ref).epsilon(1e-8));
  // outward normal derivative at the right end: d/dy G(x, y) at y = l
  const double x = 0.4;
  const double dn = -std::sinh(m * x) / std::sinh(m * l);
  CHECK(greens_normal_derivative(Geometry::interval(l), m, {x, 0}, {l, 0}) == doctest::Approx(dn).epsilon(1e-13));
  CHECK_THROWS_AS(greens(Geometry::torus(1, 1), m, {0.3, 0.3}, {0.3, 0.3}), SingularityError);
  // symmetry on the sphere
  const Geometry s = Geometry::sphere(1.1);
  CHECK(greens(s, m, {0.4, 0.1}, {1.9, 2.2}) == doctest::Approx(greens(s, m, {1.9, 2.2}, {0.4, 0.1})).epsilon(1e-13));
}

TEST_CASE("distances and curvature") {
  CHECK(distance(Geometry::circle(2), {0.1, 0}, {1.9, 0}) == doctest::Approx(0.2));
  CHECK(distance(Geometry::sphere(2), {0, 0}, {pi / 2, 0}) == doctest::Approx(pi));
  CHECK(scalar_curvature(Geometry::sphere(2), {1, 1}) == doctest::Approx(0.5));
  CHECK(scalar_curvature(Geometry::torus(1, 1), {0.1, 0.1}) == 0.0);
}
