#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "zqft/errors.hpp"
#include "zqft/pertpart.hpp"

using namespace zqft;
using std::numbers::pi;

namespace {

// Gauss-Hermite nodes (weight e^{-u^2}) by Golub-Welsch.
struct Hermite {
  Eigen::VectorXd x, w;
};
Hermite gauss_hermite(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Hermite h{es.eigenvalues(), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) h.w(i) = std::sqrt(pi) * std::pow(es.eigenvectors()(0, i), 2);
  return h;
}

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

}  // namespace

TEST_CASE("potential parsing") {
  const auto p = pert::Potential::parse("p3=1,p4=-0.5,p3=0.25", 2);
  CHECK(p.degree() == 4);
  CHECK(p.coeff(3)[0] == 1.25);
  CHECK(p.coeff(4)[0] == -0.5);
  CHECK(p.coeff(4)[2] == 0.0);
  CHECK(pert::Potential::parse("0", 2).degree() == -1);
  CHECK_THROWS_AS(pert::Potential::parse("q3=1", 2), DomainError);
  CHECK_THROWS_AS(pert::Potential::parse("p3=x", 2), DomainError);
  CHECK_THROWS(pert::Potential::parse("p1=1", 2).validate());
}

TEST_CASE("gaussian integration over one point matches Gauss-Hermite") {
  auto s = pert::BoundaryState::unit({"X", "Y"}, 2);
  s.scale = 1.3;
  s.q(0, 0) = 1.1;
  s.q(0, 1) = s.q(1, 0) = 0.3;
  s.q(1, 1) = 0.7;
  s.poly.clear();
  s.add({0, 0}, HbarSeries::constant(1.0, 2));
  s.add({1, 2}, HbarSeries::constant(0.5, 2));
  s.add({0, 4}, HbarSeries::constant(-0.2, 2));
  s.add({2, 1}, HbarSeries::constant(0.3, 2));
  const double extra = 0.9, c = 0.5;
  const auto r = pert::integrate_point(s, "Y", extra, c);
  REQUIRE(r.points.size() == 1);

  const auto gh = gauss_hermite(200);
  const double A = 0.7 + extra;
  for (double x : {-1.2, 0.0, 0.4, 2.0}) {
    double sum = 0.0;
    for (int i = 0; i < gh.x.size(); ++i) {
      const double y = gh.x(i) * std::sqrt(2 / A);
      const double poly = 1.0 + 0.5 * x * y * y - 0.2 * std::pow(y, 4) + 0.3 * x * x * y;
      sum += gh.w(i) * std::sqrt(2 / A) * std::exp(-0.3 * x * y) * poly;
    }
    const double ref = 1.3 * std::exp(-0.55 * x * x) * sum / std::sqrt(2 * pi * c);
    CHECK(r.evaluate({x})[0] == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("free partition function on an interval") {
  const double l = 1.0, m = 0.8;
  const auto z = pert::partition_function(Geometry::interval(l), m, pert::Potential::zero(4), pert::TadpoleField::zero(), 2);
  const double a = 0.3, b = -0.5;
  const double S = 0.5 * (m / std::tanh(m * l) * (a * a + b * b) - 2 * m / std::sinh(m * l) * a * b);
  const double ref = std::pow(2 * std::sinh(m * l) / m, -0.5) * std::exp(-S);
  const auto v = z.evaluate({a, b});
  CHECK(v[0] == doctest::Approx(ref).epsilon(1e-14));
  CHECK(v[1] == 0.0);
  CHECK(v[2] == 0.0);
}

TEST_CASE("edge weights between boundary points") {
  const double l = 1.3, m = 0.9;
  const auto pot = pert::Potential::zero(2);
  const auto lr = pert::feynman_weight(graph::FeynmanGraph::parse("V_b=[];V_L=1;V_R=1;pairs=[(0,1)]"),
                                       Geometry::interval(l), m, pot, pert::TadpoleField::zero());
  CHECK(lr.integral == doctest::Approx(m / std::sinh(m * l)).epsilon(1e-14));
  CHECK(lr.exponents == std::vector<int>{1, 1});
  const auto ll = pert::feynman_weight(graph::FeynmanGraph::parse("V_b=[];V_L=2;V_R=0;pairs=[(0,1)]"),
                                       Geometry::interval(l), m, pot, pert::TadpoleField::zero());
  CHECK(ll.integral == doctest::Approx(-m / std::tanh(m * l)).epsilon(1e-14));
}

TEST_CASE("single loop on an interval against a trapezoid sum") {
  const double l = 1.2, m = 0.7;
  const Geometry g = Geometry::interval(l);
  const auto tau = pert::TadpoleField::local(g, m);
  const auto w = pert::feynman_weight(graph::FeynmanGraph::parse("V_b=[3];V_L=1;V_R=0;pairs=[(0,1),(2,3)]"), g, m,
                                      pert::Potential::monomial(3, 2.0, 2), tau);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 1; i < n; ++i) {
    const double x = l * i / n;
    const double gxx = std::sinh(m * x) * std::sinh(m * (l - x)) / (m * std::sinh(m * l));
    sum += std::sinh(m * (l - x)) / std::sinh(m * l) * gxx;
  }
  sum *= l / n;
  CHECK(w.integral == doctest::Approx(sum).epsilon(1e-7));
  CHECK(w.value[0] == doctest::Approx(-2.0 * sum).epsilon(1e-7));
}

TEST_CASE("theta graph on an interval against nested Gauss-Kronrod") {
  const double l = 1.0, m = 1.1;
  auto G = [&](double x, double y) {
    const double a = std::min(x, y), b = std::max(x, y);
    return std::sinh(m * a) * std::sinh(m * (l - b)) / (m * std::sinh(m * l));
  };
  const double ref = gk([&](double x) {
    auto f = [&](double y) { return std::pow(G(x, y), 3); };
    return gk(f, 0, x) + gk(f, x, l);
  }, 0, l);
  const auto w = pert::feynman_weight(graph::FeynmanGraph::parse("V_b=[3,3];V_L=0;V_R=0;pairs=[(0,3),(1,4),(2,5)]"),
                                      Geometry::interval(l), m, pert::Potential::monomial(3, 1.0, 2),
                                      pert::TadpoleField::zero(), {.panels = 4});
  CHECK(w.integral == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("closed circle at first order") {
  // hbar^1 / hbar^0 = -g4 L c^2 / 8 + g3^2 (L int G^3 / 12 + c^2 L / (8 m^2))
  const double L = 2.0, m = 0.9, g3 = 0.7, g4 = 0.4, c = 0.35;
  auto G = [&](double d) { return std::cosh(m * (L / 2 - d)) / (2 * m * std::sinh(m * L / 2)); };
  const double cube = gk([&](double d) { return std::pow(G(d), 3); }, 0, L);
  const double ratio = -g4 * L * c * c / 8 + g3 * g3 * (L * cube / 12 + c * c * L / (8 * m * m));
  const double z0 = 1 / (2 * std::sinh(m * L / 2));
  auto pot = pert::Potential::zero(8);
  pot.set(3, g3);
  pot.set(4, g4);
  const auto z = pert::partition_function(Geometry::circle(L), m, pot, pert::TadpoleField::constant(c), 2);
  const auto v = z.evaluate(std::vector<double>{});
  CHECK(v[0] == doctest::Approx(z0).epsilon(1e-14));
  CHECK(v[1] == 0.0);
  CHECK(v[2] == doctest::Approx(z0 * ratio).epsilon(1e-10));
  CHECK(v[2] > 0.0);
}

TEST_CASE("injected Green's function") {
  // A constant kernel reduces the theta integral to L^2 k^3.
  const double L = 1.5, k = 0.25;
  pert::FeynmanOptions opt;
  opt.greens = [&](double, double) { return k; };
  const auto w = pert::feynman_weight(graph::FeynmanGraph::parse("V_b=[3,3];V_L=0;V_R=0;pairs=[(0,3),(1,4),(2,5)]"),
                                      Geometry::circle(L), 1.0, pert::Potential::monomial(3, 1.0, 2),
                                      pert::TadpoleField::zero(), opt);
  CHECK(w.integral == doctest::Approx(L * L * k * k * k).epsilon(1e-13));
}

TEST_CASE("graph bookkeeping") {
  const auto pot = pert::Potential::parse("p3=1", 2);
  const auto gs = pert::contributing_graphs(Geometry::interval(1), pot, true, 2);
  CHECK(gs.size() == 41);
  for (const auto& t : gs) {
    CHECK(t.twice_order <= 2);
    CHECK(t.aut == graph::aut_order(t.graph));
  }
  CHECK(pert::contributing_graphs(Geometry::circle(1), pot, true, 2).size() == 2);
}

TEST_CASE("gluing theorem on intervals") {
  const auto pot = pert::Potential::parse("p3=0.8,p4=-0.3", 2);
  const std::vector<double> grid = {-1, 0, 1};
  CHECK(pert::gluing_theorem_residual(0.7, 1.1, 0.9, pot, pert::TadpoleMode::Local, 2, grid).max() < 1e-10);
  CHECK(pert::gluing_theorem_residual(0.7, 1.1, 0.9, pot, pert::TadpoleMode::ZeroWithCorrection, 2, grid).max() < 1e-10);
  // without the interface term the tadpole no longer glues
  const auto bad = pert::gluing_theorem_residual(0.7, 1.1, 0.9, pot, pert::TadpoleMode::ZeroUncorrected, 2, grid);
  CHECK(bad.residual[0] < 1e-12);
  CHECK(bad.residual[2] > 1e-4);
}

TEST_CASE("two-kappa pairing") {
  const double m = 1.0, thr = pert::two_kappa_threshold(m);
  CHECK(thr == doctest::Approx(std::atanh(0.5)));
  const auto r = pert::pairing_2kappa_residual(m, 2 * thr, 3 * thr);
  CHECK(r.kernel_residual < 1e-12);
  CHECK(r.log_residual < 1e-12);
  // close to the threshold the series converges slowly but still converges
  const auto slow = pert::pairing_2kappa_residual(m, 1.05 * thr, 1.3 * thr, 2000);
  CHECK(slow.delta_tot < 1.0);
  CHECK(slow.kernel_residual < 1e-12);
  CHECK_THROWS_AS(pert::pairing_2kappa_residual(m, 0.95 * thr, 2.0), AssumptionViolation);
  const auto pot = pert::Potential::parse("p3=0.5", 2);
  CHECK(pert::composition_residual(0.6, 0.8, 0.7, 1.0, pot, 2, {-1, 0.5}).max() < 1e-10);
}
