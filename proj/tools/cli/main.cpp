#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svg.hpp"
#include "verify.hpp"
#include "zqft/dnglue.hpp"
#include "zqft/errors.hpp"
#include "zqft/feyngraph.hpp"
#include "zqft/geometry.hpp"
#include "zqft/pertpart.hpp"
#include "zqft/rgpetal.hpp"
#include "zqft/zetareg.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace zqft;

// Numbers are printed with 15 significant digits in every format.
double r15(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

struct Result {
  json scalars = json::object();
  std::string table;  // key for rows in JSON output
  std::vector<json> rows;
  int exit_code = 0;
  bool repeat_scalars = true;  // csv/table: copy scalars into every row
};

std::string csv_cell(const json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v.get<double>());
    return buf;
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_null()) return "";
  return v.dump();
}

void print(const Result& r, const std::string& format) {
  if (format == "json") {
    json doc = r.scalars;
    if (!r.table.empty()) doc[r.table] = r.rows;
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::vector<json> rows = r.rows;
  if (rows.empty()) rows.push_back(json::object());
  for (auto& row : rows) {
    if (!r.repeat_scalars && !r.rows.empty()) break;
    json merged = r.scalars;
    for (auto& [k, v] : row.items()) merged[k] = v;
    row = merged;
  }
  std::vector<std::string> cols;
  for (auto& [k, v] : rows.front().items()) cols.push_back(k);
  if (format == "csv") {
    for (std::size_t i = 0; i < cols.size(); ++i) std::cout << (i ? "," : "") << cols[i];
    std::cout << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < cols.size(); ++i) std::cout << (i ? "," : "") << csv_cell(row.value(cols[i], json()));
      std::cout << "\n";
    }
    return;
  }
  // table
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) width[i] = cols[i].size();
  for (const auto& row : rows) {
    auto& line = cells.emplace_back();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const json v = row.value(cols[i], json());
      line.push_back(v.is_string() ? v.get<std::string>() : csv_cell(v));
      if (i + 1 < cols.size()) width[i] = std::max(width[i], line.back().size());
    }
  }
  for (std::size_t i = 0; i < cols.size(); ++i) {
    std::cout << cols[i] << (i + 1 < cols.size() ? std::string(width[i] - cols[i].size() + 2, ' ') : "\n");
  }
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      std::cout << line[i] << (i + 1 < line.size() ? std::string(width[i] - line[i].size() + 2, ' ') : "\n");
    }
  }
  if (!r.repeat_scalars) {
    for (auto& [k, v] : r.scalars.items()) std::cout << k << ": " << csv_cell(v) << "\n";
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw DomainError("not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw DomainError("empty number list");
  return out;
}

Point parse_point(const std::string& s) {
  const auto v = parse_list(s);
  if (v.size() > 2) throw DomainError("a point has one or two coordinates");
  return {v[0], v.size() > 1 ? v[1] : 0.0};
}

int twice_order(double order) {
  const double t = 2.0 * order;
  if (t < 0 || std::abs(t - std::round(t)) > 1e-12) throw DomainError("--order must be a non-negative multiple of 1/2");
  return int(std::lround(t));
}

std::string order_label(int twice) {
  if (twice % 2 == 0) return "hbar^" + std::to_string(twice / 2);
  return "hbar^" + std::to_string(twice) + "/2";
}

// shared option values
struct Opts {
  std::string format = "json";
  std::string geometry = "interval:l=1";
  std::string left, right;
  double mass = 1.0;
  int modes = 64;
  std::string point = "0.3";
  std::string point2;
  std::string plot;
  std::string potential = "p3=1";
  double order = 1.0;
  std::string eta = "-1,0,1";
  std::string tadpole = "local";
  bool circle = false;
  int n_lo = 32, n_hi = 256;
  int max_half_edges = 8;
  std::string valences = "3";
  int n_left = 0, n_right = 0;
  bool no_short_loops = false;
  bool decorations = false;
  double tau = 0.3;
  double radius = 1.0;
  double circle_length = 2.0;
  bool quick = false;
  bool timing = false;
  bool small_mass = false;
  bool cutoff = false;
  std::string method = "auto";
};

// ---------------------------------------------------------------- commands

Result cmd_det(const Opts& o) {
  const Geometry g = Geometry::parse(o.geometry);
  double v;
  if (o.method == "closed") v = zeta::log_det_closed(g, o.mass);
  else if (o.method == "mellin") v = zeta::log_det_mellin(g, o.mass);
  else v = zeta::log_det_zeta(g, o.mass);
  Result r;
  r.scalars = {{"geometry", g.to_string()}, {"mass", r15(o.mass)}, {"method", o.method},
               {"log_det", r15(v)}, {"det", r15(std::exp(v))}};
  return r;
}

Result cmd_tadpole(const Opts& o) {
  const Geometry g = Geometry::parse(o.geometry);
  const Point p = parse_point(o.point);
  Result r;
  r.scalars = {{"geometry", g.to_string()}, {"mass", r15(o.mass)}, {"x", r15(p[0])}, {"y", r15(p[1])},
               {"tau_reg", r15(zeta::tau_reg(g, o.mass, p))}};
  if (g.dimension() == 2) r.scalars["tau_split"] = r15(zeta::tau_split(g, o.mass, p));
  return r;
}

void plot_spectrum(const Opts& o, const Geometry& g, const std::vector<dn::SpectrumRow>& rows) {
  if (o.plot.empty()) return;
  cli::Series s{"|lambda_n / omega_n - 1|", {}, true};
  for (const auto& row : rows) {
    if (row.n > 0) s.points.emplace_back(row.n, std::abs(row.ratio - 1.0));
  }
  cli::write_svg_plot(o.plot, "DN spectrum, " + g.to_string(), "n", "|ratio - 1|", {s}, true, true);
}

Result cmd_dn(const Opts& o) {
  const Geometry g = Geometry::parse(o.geometry);
  Result r;
  r.scalars = {{"geometry", g.to_string()}, {"mass", r15(o.mass)}};
  if (g.kind == Kind::Interval) {
    const auto D = dn::interval_dn_matrix(g.a, o.mass);
    r.table = "matrix";
    for (int i = 0; i < 2; ++i) r.rows.push_back({{"row", i}, {"col0", r15(D[i][0])}, {"col1", r15(D[i][1])}});
    return r;
  }
  const auto rows = dn::dn_spectrum(g, o.mass, o.modes);
  r.table = "spectrum";
  for (const auto& row : rows) {
    r.rows.push_back({{"n", row.n}, {"lambda", r15(row.lambda)}, {"omega", r15(row.omega)}, {"ratio", r15(row.ratio)}});
  }
  plot_spectrum(o, g, rows);
  return r;
}

Result cmd_delta_order(const Opts& o) {
  const Geometry g = Geometry::parse(o.geometry);
  const auto fit = dn::delta_order_fit(g, o.mass, o.n_lo, o.n_hi);
  Result r;
  r.scalars = {{"geometry", g.to_string()},  {"mass", r15(o.mass)},           {"n_lo", o.n_lo},
               {"n_hi", o.n_hi},             {"slope", r15(fit.slope)},       {"superpolynomial", fit.superpolynomial},
               {"points", fit.points},       {"asymptotic_only", fit.asymptotic_only}};
  if (g.kind != Kind::SphericalSector) r.scalars["delta_norm"] = r15(dn::delta_norm(g, o.mass));
  if (!o.plot.empty()) plot_spectrum(o, g, dn::dn_spectrum(g, o.mass, o.n_hi));
  return r;
}

dn::Gluing make_gluing(const Opts& o) {
  if (o.left.empty() || o.right.empty()) throw DomainError("glue needs --left and --right");
  return dn::Gluing::make(Geometry::parse(o.left), Geometry::parse(o.right), o.circle);
}

Result residual_result(const dn::Gluing& gl, const Opts& o, const dn::Residual& res, double tol) {
  Result r;
  r.scalars = {{"gluing", gl.describe()}, {"mass", r15(o.mass)},         {"lhs", r15(res.lhs)},
               {"rhs", r15(res.rhs)},     {"residual", r15(res.residual)}, {"tolerance", tol},
               {"pass", res.residual < tol}};
  if (res.tail != 0.0) r.scalars["tail"] = r15(res.tail);
  r.exit_code = res.residual < tol ? 0 : 1;
  return r;
}

Result cmd_glue_det(const Opts& o) {
  const auto gl = make_gluing(o);
  return residual_result(gl, o, dn::bfk_residual(gl, o.mass, o.modes), gl.glued().dimension() == 1 ? 1e-12 : 1e-6);
}

Result cmd_glue_greens(const Opts& o) {
  const auto gl = make_gluing(o);
  const Point p = parse_point(o.point), q = parse_point(o.point2.empty() ? o.point : o.point2);
  return residual_result(gl, o, dn::greens_glue_residual(gl, o.mass, p, q, o.modes),
                         gl.glued().dimension() == 1 ? 1e-12 : 1e-6);
}

Result cmd_glue_tadpole(const Opts& o) {
  const auto gl = make_gluing(o);
  return residual_result(gl, o, dn::tadpole_glue_residual(gl, o.mass, parse_point(o.point), o.modes),
                         gl.glued().dimension() == 1 ? 1e-12 : 1e-5);
}

pert::TadpoleMode tadpole_mode(const std::string& s) {
  if (s == "local") return pert::TadpoleMode::Local;
  if (s == "zero-corrected") return pert::TadpoleMode::ZeroWithCorrection;
  if (s == "zero") return pert::TadpoleMode::ZeroUncorrected;
  throw DomainError("--tadpole must be local, zero-corrected or zero for glue partition");
}

Result cmd_glue_partition(const Opts& o) {
  const Geometry l = Geometry::parse(o.left.empty() ? "interval:l=1" : o.left);
  const Geometry rr = Geometry::parse(o.right.empty() ? "interval:l=1" : o.right);
  if (l.kind != Kind::Interval || rr.kind != Kind::Interval) throw UnsupportedError("glue partition: intervals only");
  const int k = twice_order(o.order);
  const auto pot = pert::Potential::parse(o.potential, k);
  const auto res = pert::gluing_theorem_residual(l.a, rr.a, o.mass, pot, tadpole_mode(o.tadpole), k, parse_list(o.eta));
  const double tol = pot.degree() < 0 ? 1e-12 : 1e-6;
  Result r;
  r.scalars = {{"left", l.to_string()}, {"right", rr.to_string()}, {"mass", r15(o.mass)},
               {"potential", o.potential}, {"tadpole", o.tadpole}, {"tolerance", tol}};
  r.table = "orders";
  for (int j = 0; j <= k; ++j) {
    r.rows.push_back({{"order", order_label(j)}, {"residual", r15(res.residual[j])}, {"pass", res.residual[j] < tol}});
  }
  r.scalars["pass"] = res.max() < tol;
  r.exit_code = res.max() < tol ? 0 : 1;
  return r;
}

Result cmd_graphs(const Opts& o) {
  std::vector<int> vals;
  for (double v : parse_list(o.valences)) {
    if (v < 1 || v != std::floor(v)) throw DomainError("valences must be positive integers");
    vals.push_back(int(v));
  }
  if (o.max_half_edges < 0 || o.max_half_edges > 16) throw DomainError("--max-half-edges must be in [0, 16]");
  const auto gs = graph::enumerate_graphs(o.max_half_edges, vals, o.n_left, o.n_right, !o.no_short_loops);
  Result r;
  r.scalars = {{"max_half_edges", o.max_half_edges}, {"valences", o.valences}, {"n_left", o.n_left},
               {"n_right", o.n_right}, {"count", gs.size()}};
  r.table = "graphs";
  for (const auto& g : gs) {
    const auto lo = graph::loop_order(g);
    json row = {{"graph", g.to_string()},
                {"half_edges", g.num_half_edges()},
                {"aut", g.num_half_edges() <= 16 ? graph::aut_order(g) : 0},
                {"loop_order", r15(boost::rational_cast<double>(lo))}};
    if (o.decorations) {
      const auto census = graph::enumerate_decorations(g);
      const auto check = graph::check_decorations(g);
      row["decoration_orbits"] = census.orbits.size();
      row["decorations"] = census.total;
      row["identity_exact"] = check.identity_residual.numerator() == 0 && check.orbit_stabilizer_residual == 0;
    }
    r.rows.push_back(row);
  }
  return r;
}

pert::TadpoleField tadpole_field(const std::string& s, const Geometry& g, double m) {
  if (s == "local") return pert::TadpoleField::local(g, m);
  if (s == "zero") return pert::TadpoleField::zero();
  return pert::TadpoleField::constant(parse_list(s).at(0));
}

Result cmd_partition(const Opts& o) {
  const Geometry g = Geometry::parse(o.geometry);
  const int k = twice_order(o.order);
  auto pot = pert::Potential::parse(o.potential, 3 * k + 2);
  pot.low_valence = true;
  const auto z = pert::partition_function(g, o.mass, pot, tadpole_field(o.tadpole, g, o.mass), k);
  Result r;
  r.scalars = {{"geometry", g.to_string()}, {"mass", r15(o.mass)}, {"potential", o.potential},
               {"tadpole", o.tadpole},      {"normalization", r15(z.scale)},
               {"graphs", pert::contributing_graphs(g, pot, o.tadpole != "zero", k).size()}};
  r.table = "values";
  auto add = [&](const std::vector<double>& eta) {
    json row = json::object();
    for (std::size_t i = 0; i < eta.size(); ++i) row["eta_" + z.points[i]] = r15(eta[i]);
    const auto v = z.evaluate(eta);
    for (int j = 0; j <= k; ++j) row[order_label(j)] = r15(v[j]);
    r.rows.push_back(row);
  };
  if (z.points.empty()) {
    add({});
  } else {
    const auto grid = parse_list(o.eta);
    for (double a : grid) {
      for (double b : grid) add({a, b});
    }
  }
  return r;
}

Result cmd_petal(const Opts& o) {
  const int k = twice_order(o.order);
  const auto pot = pert::Potential::parse(o.potential, k);
  const auto out = rg::petal_transform(pot, o.tau);
  Result r;
  r.scalars = {{"potential", o.potential}, {"tau", r15(o.tau)}, {"transformed", out.to_string()},
               {"rg_flow_residual", r15(rg::rg_flow_residual(pot, o.tau, 1e-4))},
               {"group_law_residual", r15(rg::group_law_residual(pot, o.tau, -0.5 * o.tau))}};
  r.table = "coefficients";
  for (int n = 0; n <= out.degree(); ++n) {
    json row = {{"n", n}};
    for (int j = 0; j <= k; ++j) row[order_label(j)] = r15(out.coeff(n)[j]);
    r.rows.push_back(row);
  }
  return r;
}

Result cmd_reduce(const Opts& o) {
  const auto pot = pert::Potential::parse(o.potential, 0);
  std::vector<double> p(std::max(pot.degree() + 1, 1), 0.0);
  for (int n = 0; n <= pot.degree(); ++n) p[n] = pot.coeff(n)[0];
  const auto red = rg::reduce_low_valence(p, o.mass);
  Result r;
  r.scalars = {{"potential", o.potential},       {"mass", r15(o.mass)},         {"phi_cr", r15(red.phi_cr)},
               {"mass_tilde", r15(red.mass)},    {"constant", r15(red.constant)}, {"iterations", red.iterations}};
  const double p2 = red.mass * red.mass - o.mass * o.mass;
  if (std::abs(p2) < o.mass * o.mass) {
    r.scalars["neumann_residual"] = r15(rg::neumann_residual(o.circle_length, o.mass, p2, 0.5 * o.circle_length * 0.5));
  }
  r.table = "coefficients";
  for (int n = 3; n < int(red.p.size()); ++n) r.rows.push_back({{"n", n}, {"p_tilde", r15(red.p[n])}});
  return r;
}

Result cmd_anomaly(const Opts& o) {
  const auto a = rg::trace_anomaly_sphere(o.radius, o.mass);
  Result r;
  r.scalars = {{"radius", r15(o.radius)},   {"mass", r15(o.mass)},
               {"lhs", r15(a.lhs)},          {"rhs", r15(a.rhs)},
               {"residual", r15(a.residual)}, {"density", r15(a.density)},
               {"density_expected", r15(a.density_expected)},
               {"classical_trace", r15(rg::integrated_classical_trace(o.radius, o.mass))}};
  if (o.small_mass) {
    const auto law = rg::sphere_small_mass_law();
    r.scalars["small_mass_spread"] = r15(law.spread);
    r.scalars["small_mass_exponent"] = r15(law.exponent);
  }
  if (o.cutoff) {
    const auto c = rg::cutoff_tadpole(1.0, 1.0, o.mass);
    r.table = "cutoff";
    for (std::size_t i = 0; i < c.lambda.size(); ++i) {
      r.rows.push_back({{"lambda", r15(c.lambda[i])}, {"shifted_tadpole", r15(c.shifted[i])}});
    }
    r.scalars["cutoff_extrapolated"] = r15(c.extrapolated);
    r.scalars["cutoff_target"] = r15(c.target);
  }
  return r;
}

int env_threads() {
  const char* s = std::getenv("ZQFT_THREADS");
  if (!s || !*s) return 1;
  const int n = std::atoi(s);
  if (n < 1) throw DomainError("ZQFT_THREADS must be a positive integer");
  return n;
}

Result cmd_verify_all(const Opts& o) {
  const auto results = verify::run_all(o.quick, env_threads());
  Result r;
  r.table = "criteria";
  int failed = 0;
  for (const auto& c : results) {
    json row = {{"id", c.id}, {"criterion", c.name}, {"pass", c.pass}, {"worst_over_tolerance", r15(c.measure)}};
    if (o.timing) row["seconds"] = r15(c.seconds);
    row["detail"] = c.detail;
    r.rows.push_back(row);
    failed += !c.pass;
  }
  r.scalars = {{"quick", o.quick}, {"passed", int(results.size()) - failed}, {"failed", failed}};
  if (!o.plot.empty()) {
    cli::Series s{"worst residual / tolerance", {}, true};
    for (const auto& c : results) s.points.emplace_back(c.id, std::max(c.measure, 1e-18));
    cli::write_svg_plot(o.plot, "acceptance criteria", "criterion", "worst residual / tolerance", {s}, false, true);
  }
  r.exit_code = failed ? 1 : 0;
  r.repeat_scalars = false;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zqft: zeta-regularized determinants, gluing and perturbative partition functions"};
  app.require_subcommand(1);
  Opts o;
  Result (*handler)(const Opts&) = nullptr;
  std::string default_format = "json";

  auto common = [&](CLI::App* c, Result (*h)(const Opts&)) {
    c->add_option("--format", o.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
    c->callback([&handler, h] { handler = h; });
    return c;
  };
  auto geom = [&](CLI::App* c) {
    c->add_option("--geometry", o.geometry, "e.g. interval:l=1, circle:L=2, cylinder:L=6.2832,H=1, sphere:R=1");
    c->add_option("--mass", o.mass, "mass m > 0");
  };

  auto* det = common(app.add_subcommand("det", "log det(Delta + m^2)"), cmd_det);
  geom(det);
  det->add_option("--method", o.method, "auto, closed or mellin")->check(CLI::IsMember({"auto", "closed", "mellin"}));

  auto* tad = common(app.add_subcommand("tadpole", "regularized diagonal of the Green's function"), cmd_tadpole);
  geom(tad);
  tad->add_option("--point", o.point, "x or x,y in the geometry's chart");

  auto* dnc = common(app.add_subcommand("dn", "Dirichlet-to-Neumann spectrum"), cmd_dn);
  geom(dnc);
  dnc->add_option("--modes", o.modes, "highest mode");
  dnc->add_option("--plot", o.plot, "SVG output path");

  auto* delta = common(app.add_subcommand("delta-order", "fitted decay order of lambda_n / omega_n - 1"), cmd_delta_order);
  geom(delta);
  delta->add_option("--n-lo", o.n_lo);
  delta->add_option("--n-hi", o.n_hi);
  delta->add_option("--plot", o.plot, "SVG output path");

  auto* glue = app.add_subcommand("glue", "gluing checks");
  glue->require_subcommand(1);
  auto glue_common = [&](CLI::App* c) {
    c->add_option("--left", o.left, "left piece");
    c->add_option("--right", o.right, "right piece");
    c->add_option("--mass", o.mass);
    c->add_option("--modes", o.modes, "interface mode cutoff");
    c->add_flag("--circle", o.circle, "close two arcs into a circle");
  };
  auto* gdet = common(glue->add_subcommand("det", "determinant gluing"), cmd_glue_det);
  glue_common(gdet);
  auto* ggr = common(glue->add_subcommand("greens", "Green's function gluing"), cmd_glue_greens);
  glue_common(ggr);
  ggr->add_option("--point", o.point);
  ggr->add_option("--point2", o.point2);
  auto* gtad = common(glue->add_subcommand("tadpole", "tadpole gluing"), cmd_glue_tadpole);
  glue_common(gtad);
  gtad->add_option("--point", o.point);
  auto* gpart = common(glue->add_subcommand("partition", "perturbative partition function gluing (1D)"), cmd_glue_partition);
  glue_common(gpart);
  gpart->add_option("--potential", o.potential, "e.g. p3=1,p4=-0.5");
  gpart->add_option("--order", o.order, "hbar order (multiple of 1/2)");
  gpart->add_option("--eta", o.eta, "grid of boundary values");
  gpart->add_option("--tadpole", o.tadpole, "local, zero-corrected or zero");

  auto* gr = common(app.add_subcommand("graphs", "enumerate Feynman graphs"), cmd_graphs);
  gr->add_option("--max-half-edges", o.max_half_edges);
  gr->add_option("--valences", o.valences, "comma-separated bulk valences");
  gr->add_option("--left", o.n_left, "number of left boundary vertices");
  gr->add_option("--right", o.n_right, "number of right boundary vertices");
  gr->add_flag("--no-short-loops", o.no_short_loops);
  gr->add_flag("--decorations", o.decorations, "count decorations and check the orbit identity");

  auto* part = common(app.add_subcommand("partition", "perturbative partition function"), cmd_partition);
  geom(part);
  part->add_option("--potential", o.potential);
  part->add_option("--order", o.order);
  part->add_option("--eta", o.eta);
  part->add_option("--tadpole", o.tadpole, "local, zero or a constant");

  auto* petal = common(app.add_subcommand("petal", "petal resummation of a potential"), cmd_petal);
  petal->add_option("--potential", o.potential);
  petal->add_option("--tau", o.tau);
  petal->add_option("--order", o.order);

  auto* red = common(app.add_subcommand("reduce", "remove p_0, p_1, p_2 by the critical point"), cmd_reduce);
  red->add_option("--potential", o.potential);
  red->add_option("--mass", o.mass);
  red->add_option("--circle-length", o.circle_length, "circle used for the Neumann series check");

  auto* an = common(app.add_subcommand("anomaly", "sphere trace anomaly"), cmd_anomaly);
  an->add_option("--radius", o.radius);
  an->add_option("--mass", o.mass);
  an->add_flag("--small-mass", o.small_mass, "also fit det ~ m^2 R^2 R^{-2/3}");
  an->add_flag("--cutoff", o.cutoff, "also run the proper-time cutoff tadpole on a torus");

  auto* ver = common(app.add_subcommand("verify-all", "run the acceptance matrix"), cmd_verify_all);
  ver->add_flag("--quick", o.quick, "reduced cutoffs");
  ver->add_flag("--timing", o.timing, "include run times (output is then not reproducible)");
  ver->add_option("--plot", o.plot, "SVG output path");
  ver->preparse_callback([&](std::size_t) { o.format = "table"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Result r = handler(o);
    print(r, o.format);
    return r.exit_code;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const AssumptionViolation& e) {
    std::cerr << "assumption violated: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  }
}
