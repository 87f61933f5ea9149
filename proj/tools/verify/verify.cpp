#include "verify.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/bessel.hpp>

#include "zqft/dnglue.hpp"
#include "zqft/errors.hpp"
#include "zqft/feyngraph.hpp"
#include "zqft/geometry.hpp"
#include "zqft/pertpart.hpp"
#include "zqft/rgpetal.hpp"
#include "zqft/zetareg.hpp"

namespace zqft::verify {

namespace {

constexpr double pi = std::numbers::pi;

// Collects sub-checks; the criterion's measure is the worst residual / tolerance.
struct Acc {
  bool ok = true;
  double worst = 0.0;
  std::ostringstream detail;

  void check(const std::string& what, double residual, double tol) {
    const bool good = std::isfinite(residual) && residual < tol;
    ok = ok && good;
    worst = std::max(worst, std::isfinite(residual) ? residual / tol : INFINITY);
    note(what, residual, good);
  }
  void require(const std::string& what, double value, bool good) {
    ok = ok && good;
    note(what, value, good);
  }
  void note(const std::string& what, double value, bool good) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", value);
    if (detail.tellp() > 0) detail << "; ";
    detail << what << " " << buf << (good ? "" : " FAIL");
  }
};

double rel(double a, double b) { return std::abs(a / b - 1.0); }

void c1_closed_forms(Acc& a, bool quick) {
  const std::vector<double> masses = quick ? std::vector<double>{1.0} : std::vector<double>{0.5, 1.0, 1.7};
  double det_i = 0, det_c = 0, tad_i = 0, tad_c = 0, disk = 0, hemi = 0;
  for (double m : masses) {
    const double l = 1.3, L = 2.1, x = 0.4;
    det_i = std::max(det_i, rel(std::exp(zeta::log_det_mellin(Geometry::interval(l), m)), 2.0 * std::sinh(m * l) / m));
    det_c = std::max(det_c, rel(std::exp(zeta::log_det_mellin(Geometry::circle(L), m)),
                                4.0 * std::pow(std::sinh(0.5 * m * L), 2)));
    tad_i = std::max(tad_i, rel(zeta::tau_reg(Geometry::interval(l), m, {x, 0}),
                                std::sinh(m * x) * std::sinh(m * (l - x)) / (m * std::sinh(m * l))));
    tad_c = std::max(tad_c, rel(zeta::tau_reg(Geometry::circle(L), m, {x, 0}), 1.0 / (2.0 * m * std::tanh(0.5 * m * L))));
    const double R = 1.1;
    disk = std::max(disk, rel(dn::dn_eigenvalue(Geometry::disk(R), BoundaryId::Rim, m, 0),
                              m * boost::math::cyl_bessel_i(1, m * R) / boost::math::cyl_bessel_i(0, m * R)));
  }
  // hemisphere pair: det(D_L + D_R) = 2 cos(pi sqrt(1/4 - (mR)^2)), continued past mR = 1/2
  for (double mr : quick ? std::vector<double>{0.3} : std::vector<double>{0.2, 0.3, 0.8}) {
    const auto gl = dn::Gluing::make(Geometry::hemisphere(1.0), Geometry::hemisphere(1.0));
    const double q = 0.25 - mr * mr;
    const double want = q >= 0 ? 2.0 * std::cos(pi * std::sqrt(q)) : 2.0 * std::cosh(pi * std::sqrt(-q));
    hemi = std::max(hemi, rel(std::exp(dn::log_det_dn(gl, mr, 128).log_det), want));
  }
  a.check("interval det", det_i, 1e-10);
  a.check("circle det", det_c, 1e-10);
  a.check("interval tadpole", tad_i, 1e-10);
  a.check("circle tadpole", tad_c, 1e-10);
  a.check("disk DN n=0", disk, 1e-10);
  a.check("hemisphere DN det", hemi, 1e-10);
}

void c2_bfk_1d(Acc& a, bool) {
  double w = 0;
  for (double m : {0.5, 1.0, 1.7}) {
    w = std::max(w, dn::bfk_residual(dn::Gluing::make(Geometry::interval(1.0), Geometry::interval(1.0)), m).residual);
    w = std::max(w, dn::bfk_residual(dn::Gluing::make(Geometry::interval(0.4), Geometry::interval(2.3)), m).residual);
  }
  a.check("interval+interval", w, 1e-12);
  w = 0;
  for (double m : {0.5, 1.0, 1.7}) {
    w = std::max(w, dn::bfk_residual(dn::Gluing::make(Geometry::interval(0.7), Geometry::interval(1.3), true), m).residual);
  }
  a.check("arc+arc -> circle", w, 1e-12);
}

void c3_bfk_2d(Acc& a, bool quick) {
  const double tp = 2.0 * pi;
  a.check("cylinder stack", dn::bfk_residual(dn::Gluing::make(Geometry::cylinder(tp, 1.0), Geometry::cylinder(tp, 1.5)), 1.0, 64).residual,
          1e-6);
  double w = 0;
  for (double m : quick ? std::vector<double>{0.4} : std::vector<double>{0.4, 0.8}) {
    w = std::max(w, dn::bfk_residual(dn::Gluing::make(Geometry::hemisphere(1.0), Geometry::hemisphere(1.0)), m, 128).residual);
  }
  a.check("hemispheres -> sphere", w, 1e-6);
}

void c4_tadpole_gluing(Acc& a, bool) {
  double w = 0;
  for (double x : {0.3, 0.85, 1.6}) {
    w = std::max(w, dn::tadpole_glue_residual(dn::Gluing::make(Geometry::interval(1.0), Geometry::interval(1.0)), 1.0, {x, 0}).residual);
    w = std::max(w, dn::tadpole_glue_residual(dn::Gluing::make(Geometry::interval(0.7), Geometry::interval(1.3), true), 1.0, {x, 0}).residual);
  }
  a.check("1D exact", w, 1e-12);
  a.check("cylinder",
          dn::tadpole_glue_residual(dn::Gluing::make(Geometry::cylinder(2 * pi, 1.0), Geometry::cylinder(2 * pi, 1.5)), 1.0, {0.3, 0.5}).residual,
          1e-5);
  w = 0;
  const Geometry s = Geometry::sphere(1.0);
  for (double m : {0.3, 0.5, 1.0}) w = std::max(w, std::abs(zeta::tau_reg(s, m, {0.4, 0.3}) - zeta::tau_reg_closed(s, m, {0.4, 0.3})));
  a.check("sphere digamma vs Mellin", w, 1e-8);
}

void c5_weak_compatibility(Acc& a, bool) {
  const std::pair<const char*, Geometry> gs[] = {{"interval", Geometry::interval(1.3)},
                                                 {"circle", Geometry::circle(2.1)},
                                                 {"torus", Geometry::torus(1.0, 2.0)},
                                                 {"cylinder", Geometry::cylinder(2 * pi, 1.0)},
                                                 {"sphere", Geometry::sphere(1.0)}};
  for (const auto& [name, g] : gs) a.check(name, zeta::weak_compatibility_residual(g, 1.0), 1e-6);
}

void c6_split_vs_reg(Acc& a, bool) {
  const double want = (std::numbers::egamma - std::numbers::ln2) / (2.0 * pi);
  const std::pair<const char*, Geometry> gs[] = {{"torus", Geometry::torus(1.0, 2.0)},
                                                 {"cylinder", Geometry::cylinder(2 * pi, 1.0)},
                                                 {"sphere", Geometry::sphere(1.0)}};
  for (const auto& [name, g] : gs) {
    double w = 0;
    for (Point p : {Point{0.4, 0.3}, Point{1.1, 0.7}}) {
      w = std::max(w, std::abs(zeta::tau_reg_closed(g, 1.0, p) - zeta::tau_split_limit(g, 1.0, p) - want));
    }
    a.check(name, w, 1e-10);
  }
}

void c7_graph_algebra(Acc& a, bool quick) {
  using namespace graph;
  const int max_dec = quick ? 10 : 12, max_pair = quick ? 8 : 10;
  long graphs = 0, bad = 0;
  for (int nl = 0; nl <= max_dec; ++nl) {
    for (int nr = 0; nl + nr <= max_dec; ++nr) {
      for (const auto& g : enumerate_graphs(max_dec, {3, 4, 5, 6}, nl, nr)) {
        ++graphs;
        const auto c = check_decorations(g);
        if (c.identity_residual.numerator() != 0 || c.orbit_stabilizer_residual != 0) ++bad;
      }
    }
  }
  a.require("decoration identity failures (" + std::to_string(graphs) + " graphs)", double(bad), bad == 0 && graphs > 0);

  std::vector<FeynmanGraph> lefts, rights;
  for (int nl = 0; nl <= max_pair; ++nl) {
    for (int nr = 0; nl + nr <= max_pair; ++nr) {
      for (const auto& g : enumerate_graphs(max_pair, {2, 3, 4}, nl, nr)) {
        bool rr = false, ll = false;
        for (auto [x, y] : g.edge_vertices()) {
          rr |= g.is_right(x) && g.is_right(y);
          ll |= g.is_left(x) && g.is_left(y);
        }
        if (!rr && nr > 0) lefts.push_back(g);
        if (!ll && nl > 0) rights.push_back(g);
      }
    }
  }
  long pairs = 0, worst = 0, trips = 0;
  for (const auto& gl : lefts) {
    for (const auto& gr : rights) {
      if (gl.num_half_edges() + gr.num_half_edges() > max_pair || (gl.n_right + gr.n_left) % 2) continue;
      ++pairs;
      worst = std::max<long>(worst, auto_gluing_residual(gl, gr));
      if (!gluing_roundtrip(gl, gr)) ++trips;
    }
  }
  a.require("auto-gluing max residual (" + std::to_string(pairs) + " pairs)", double(worst), worst == 0 && pairs > 0);
  a.require("round-trip failures", double(trips), trips == 0);
}

void c8_gluing_theorem(Acc& a, bool) {
  using namespace pert;
  const std::vector<double> grid{-1.0, 0.0, 1.0};
  a.check("free", gluing_theorem_residual(1, 1, 1, Potential::zero(2), TadpoleMode::Local, 2, grid).max(), 1e-12);
  const Potential p3 = Potential::monomial(3, 1.0, 2);
  const auto loc = gluing_theorem_residual(1, 1, 1, p3, TadpoleMode::Local, 2, grid);
  a.check("phi^3 hbar^1/2", loc.residual[1], 1e-6);
  a.check("phi^3 hbar^1", loc.residual[2], 1e-6);
  a.check("phi^3 zero tadpoles + interface term", gluing_theorem_residual(1, 1, 1, p3, TadpoleMode::ZeroWithCorrection, 2, grid).max(), 1e-6);
  const double obstruction = gluing_theorem_residual(1, 1, 1, p3, TadpoleMode::ZeroUncorrected, 2, grid).residual[2];
  a.require("zero tadpoles uncorrected, hbar^1 (must exceed 1e-5)", obstruction, obstruction > 1e-5);
}

void c9_petal(Acc& a, bool) {
  const Geometry c = Geometry::circle(2.0);
  const double tau = zeta::tau_reg_closed(c, 1.0, {0.0, 0.0});
  const auto p4 = pert::Potential::monomial(4, 1.0, 2);
  a.check("Z(tau,p) = Z(0,R p)", rg::partition_consistency_residual(c, 1.0, p4, tau, 0.0, 2).max(), 1e-7);
  a.check("Z(tau,p) = Z(tau/2,R_{tau/2} p)", rg::partition_consistency_residual(c, 1.0, p4, tau, 0.5 * tau, 2).max(), 1e-7);
  const auto e6 = rg::ExactPotential::monomial(6, rg::Rational(1, 720), 3);
  const auto g = rg::group_law_residual_exact(e6, rg::Rational(1, 5), rg::Rational(1, 2));
  a.require("group law, exact", boost::rational_cast<double>(g), g.numerator() == 0);
  a.check("RG flow phi^4, dtau=1e-4", rg::rg_flow_residual(p4, 0.3, 1e-4), 1e-10);
  const auto p8 = pert::Potential::monomial(8, 1.0, 8);
  const double ratio = rg::rg_flow_residual(p8, 0.3, 1e-2) / rg::rg_flow_residual(p8, 0.3, 5e-3);
  a.require("RG flow phi^8 halving ratio", ratio, std::abs(ratio - 4.0) < 0.2);
}

void c10_dn_regularity(Acc& a, bool) {
  const auto disk = dn::delta_order_fit(Geometry::disk(1.0), 1.0, 32, 256);
  a.check("disk order + 3", std::abs(disk.slope + 3.0), 0.1);
  const auto hemi = dn::delta_order_fit(Geometry::hemisphere(1.0), 1.0, 32, 256);
  a.check("hemisphere order + 4", std::abs(hemi.slope + 4.0), 0.1);
  const Geometry cyl = Geometry::cylinder(2 * pi, 2.0);
  const auto rows = dn::dn_spectrum(cyl, 1.0, 20);
  a.check("cylinder |ratio - 1| at n=20", std::abs(rows.back().ratio - 1.0), 1e-12);
  a.require("cylinder superpolynomial", 0.0, dn::delta_order_fit(cyl, 1.0, 32, 256).superpolynomial);
  const int n = 10000;
  const double phi = 1.0;
  const double d1 = dn::sector_dn_ratio_asymptotic(1.0, phi, 1.0, n) - 1.0;
  const double d2 = dn::sector_dn_ratio_asymptotic(1.0, pi - phi, 1.0, n) - 1.0;
  a.check("complementary sectors, n^-3 cancellation", std::abs(d1 + d2) / std::abs(d1), 1e-3);
}

void c11_two_kappa(Acc& a, bool) {
  double w = 0;
  for (auto [l1, l2] : {std::pair{1.0, 1.0}, std::pair{0.7, 1.5}, std::pair{0.6, 3.0}}) {
    const auto r = pert::pairing_2kappa_residual(1.0, l1, l2);
    w = std::max({w, r.kernel_residual, r.log_residual});
  }
  a.check("series vs 1/(D_L + D_R) and log", w, 1e-10);
  a.check("delta at l=1", std::abs(pert::pairing_2kappa_residual(1.0, 1.0, 1.0).delta_tot - 0.3130352855), 1e-9);
  const double thr = pert::two_kappa_threshold(1.0);
  auto refuses = [](double l) {
    try {
      pert::pairing_2kappa_residual(1.0, l, 1.0);
      return false;
    } catch (const AssumptionViolation&) {
      return true;
    }
  };
  a.check("threshold vs arccoth(2)", std::abs(thr - 0.5 * std::log(3.0)), 1e-12);
  a.require("refused just below threshold", thr - 1e-3, refuses(thr - 1e-3));
  a.require("accepted just above threshold", thr + 1e-3, !refuses(thr + 1e-3));
}

void c12_anomaly(Acc& a, bool) {
  a.check("(R^2 d_R^2 - m^2 d_m^2) log det", rg::trace_anomaly_sphere(1.0, 0.8).residual, 1e-5);
  a.check("m^2 int tau at m=1e-3", std::abs(rg::integrated_classical_trace(1.0, 1e-3) - 1.0), 1e-2);
}

struct Entry {
  const char* name;
  double time_limit;
  void (*run)(Acc&, bool);
};

const Entry entries[criterion_count] = {
    {"closed-form golden values", 1.0, c1_closed_forms},
    {"1D BFK gluing", 1.0, c2_bfk_1d},
    {"2D BFK gluing", 30.0, c3_bfk_2d},
    {"tadpole gluing", 0.0, c4_tadpole_gluing},
    {"weak compatibility", 0.0, c5_weak_compatibility},
    {"zeta vs point-splitting tadpole", 0.0, c6_split_vs_reg},
    {"graph algebra, exhaustive", 60.0, c7_graph_algebra},
    {"1D gluing of partition functions", 0.0, c8_gluing_theorem},
    {"petal identities", 0.0, c9_petal},
    {"DN regularity", 0.0, c10_dn_regularity},
    {"2-kappa pairing", 0.0, c11_two_kappa},
    {"sphere trace anomaly", 0.0, c12_anomaly},
};

}  // namespace

Criterion run_criterion(int id, bool quick) {
  if (id < 1 || id > criterion_count) throw DomainError("no acceptance criterion " + std::to_string(id));
  const Entry& s = entries[id - 1];
  Criterion c;
  c.id = id;
  c.name = s.name;
  c.time_limit = s.time_limit;
  c.tolerance = 1.0;
  Acc acc;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    s.run(acc, quick);
  } catch (const std::exception& e) {
    acc.require(std::string("exception: ") + e.what(), 0.0, false);
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.measure = acc.worst;
  c.pass = acc.ok;
  if (c.time_limit > 0.0 && c.seconds >= c.time_limit) {
    c.pass = false;
    acc.require("runtime over limit", c.seconds, false);
  }
  c.detail = acc.detail.str();
  return c;
}

std::vector<Criterion> run_all(bool quick, int threads) {
  std::vector<Criterion> out(criterion_count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < criterion_count; i = next++) out[i] = run_criterion(i + 1, quick);
  };
  threads = std::max(1, std::min(threads, criterion_count));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace zqft::verify
