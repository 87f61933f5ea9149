#include "zqft/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "zqft/errors.hpp"
#include "zqft/specfun.hpp"

namespace zqft {

using specfun::pi;

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("geometry: ") + what + " must be positive");
}

// sum_k exp(-(x - kP)^2 / (4t)), either by images or by the Poisson-dual
// Fourier sum (sqrt(4 pi t)/P) sum_n exp(-4 pi^2 n^2 t / P^2) cos(2 pi n x / P).
// The two converge equally fast at t = P^2 / (4 pi).
double periodic_gaussian(double x, double P, double t, ThetaForm form, bool drop_identity = false) {
  const bool images = form == ThetaForm::Images || (form == ThetaForm::Auto && t <= P * P / (4.0 * pi));
  if (images) {
    const double xr = x - P * std::round(x / P);
    double s = drop_identity ? 0.0 : std::exp(-xr * xr / (4.0 * t));
    for (int k = 1; k < 100000; ++k) {
      const double a = std::exp(-(xr - k * P) * (xr - k * P) / (4.0 * t));
      const double b = std::exp(-(xr + k * P) * (xr + k * P) / (4.0 * t));
      s += a + b;
      if (a + b <= 1e-18 * std::max(s, 1e-300) || (a + b) == 0.0) break;
    }
    return s;
  }
  const double q = 4.0 * pi * pi * t / (P * P);
  double s = 0.0;
  for (int n = 1; n < 100000; ++n) {
    const double e = std::exp(-q * n * n);
    s += 2.0 * e * std::cos(2.0 * pi * n * x / P);
    if (e < 1e-18) break;
  }
  const double full = std::sqrt(4.0 * pi * t) / P * (1.0 + s);
  if (!drop_identity) return full;
  const double xr = x - P * std::round(x / P);
  return full - std::exp(-xr * xr / (4.0 * t));
}

// Euler-Maclaurin at half-integers: sum_{nu = 1/2, 3/2, ...} 2 nu exp(-nu^2 s) = 1/s + sum_j a_j s^j.
// Returns the power series part; accurate for s < 0.1.
double sphere_s1_series(double s) {
  static const double b2k[] = {1.0 / 6.0,       -1.0 / 30.0,     1.0 / 42.0,     -1.0 / 30.0,
                               5.0 / 66.0,      -691.0 / 2730.0, 7.0 / 6.0,      -3617.0 / 510.0,
                               43867.0 / 798.0, -174611.0 / 330.0};
  double acc = 0.0, sp = 1.0, fact = 1.0;
  for (int j = 0; j < 10; ++j) {
    if (j > 0) fact *= j;
    const double aj = 2.0 * (1.0 - std::pow(2.0, -2.0 * j - 1.0)) * b2k[j] / ((2.0 * j + 2.0) * fact);
    acc += ((j % 2) ? -aj : aj) * sp;
    sp *= s;
  }
  return acc;
}

// sum_l (a l + b) exp(-l (l + 1) s), for s not small
double sphere_mode_sum(double s, double a, double b) {
  double sum = 0.0;
  for (int l = 0; l < 100000; ++l) {
    const double e = (a * l + b) * std::exp(-l * (l + 1.0) * s);
    sum += e;
    if (l > 0 && e < 1e-18 * sum) break;
  }
  return sum;
}

// Trace of the sphere heat kernel in units s = t/R^2, minus 1/s + 1/3.
double sphere_trace_remainder(double s) {
  if (s < 0.1) return std::expm1(0.25 * s) / s + std::exp(0.25 * s) * sphere_s1_series(s) - 1.0 / 3.0;
  return sphere_mode_sum(s, 2.0, 1.0) - 1.0 / s - 1.0 / 3.0;
}

// exp(s/4) S0(s) - (1/2) sqrt(pi/s)
double sphere_s0_remainder(double s) {
  const double th = specfun::jacobi_theta3(0.5, pi / s);
  return 0.5 * std::sqrt(pi / s) * (std::expm1(0.25 * s) + std::exp(0.25 * s) * (th - 1.0));
}

// Off-diagonal sphere heat kernel at geodesic angle gamma, Laplacian on S^2(R).
double sphere_heat_kernel(double R, double gamma, double t) {
  const double s = t / (R * R);
  if (gamma * gamma / (4.0 * s) > 60.0) return 0.0;
  const double c = std::cos(gamma);
  const int lmax = int(std::ceil(std::sqrt(60.0 / s))) + 20;
  double p0 = 1.0, p1 = c, sum = 1.0;
  for (int l = 1; l <= lmax; ++l) {
    sum += (2.0 * l + 1.0) * p1 * std::exp(-l * (l + 1.0) * s);
    const double p2 = ((2.0 * l + 1.0) * c * p1 - l * p0) / (l + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return sum / (4.0 * pi * R * R);
}

double sphere_angle(Point p, Point q) {
  const double c = std::cos(p[0]) * std::cos(q[0]) + std::sin(p[0]) * std::sin(q[0]) * std::cos(p[1] - q[1]);
  // haversine form keeps precision for nearby points
  const double dlat = 0.5 * (p[0] - q[0]);
  const double h = std::sin(dlat) * std::sin(dlat) +
                   std::sin(p[0]) * std::sin(q[0]) * std::sin(0.5 * (p[1] - q[1])) * std::sin(0.5 * (p[1] - q[1]));
  if (c > 0.9) return 2.0 * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

struct SphereParams {
  specfun::cplx a1, a2;
  double cos_pi_beta;
};

SphereParams sphere_params(double m, double R) {
  const double q = 0.25 - m * m * R * R;
  SphereParams sp;
  if (q >= 0.0) {
    const double beta = std::sqrt(q);
    sp.a1 = 0.5 + beta;
    sp.a2 = 0.5 - beta;
    sp.cos_pi_beta = std::cos(pi * beta);
  } else {
    const double beta = std::sqrt(-q);
    sp.a1 = specfun::cplx(0.5, beta);
    sp.a2 = specfun::cplx(0.5, -beta);
    sp.cos_pi_beta = std::cosh(pi * beta);
  }
  return sp;
}

double sphere_greens_angle(double m, double R, double gamma) {
  if (gamma <= 0.0) throw SingularityError("greens: coincident points on a surface; use the tadpole module");
  const auto sp = sphere_params(m, R);
  const double c = std::cos(0.5 * gamma);
  const auto f = specfun::hyp2f1(sp.a1, sp.a2, 1.0, c * c);
  return f.real() / (4.0 * sp.cos_pi_beta);
}

// log I_n(x) from the ascending series, safe where I_n underflows.
double log_bessel_i(int n, double x) {
  if (x == 0.0) return n == 0 ? 0.0 : -INFINITY;
  const double q = 0.25 * x * x;
  double r = 1.0, s = 1.0;
  for (int k = 1; k < 100000; ++k) {
    r *= q / (double(k) * double(n + k));
    s += r;
    if (r < 1e-17 * s) break;
  }
  return n * std::log(0.5 * x) - std::lgamma(n + 1.0) + std::log(s);
}

// log K_n(x), n = 0..nmax, by upward recurrence (stable for K).
std::vector<double> log_bessel_k_sequence(int nmax, double x) {
  std::vector<double> out(nmax + 1);
  const double k0 = specfun::bessel_k(0.0, x), k1 = specfun::bessel_k(1.0, x);
  out[0] = std::log(k0);
  if (nmax >= 1) out[1] = std::log(k1);
  double ratio = k1 / k0;  // K_{n}/K_{n-1} for n = 1
  for (int n = 1; n < nmax; ++n) {
    ratio = 1.0 / ratio + 2.0 * n / x;  // K_{n+1}/K_n
    out[n + 1] = out[n] + std::log(ratio);
  }
  return out;
}

double disk_greens(double m, double R, Point p, Point q) {
  double r1 = p[1], r2 = q[1];
  const double dth = p[0] - q[0];
  if (r1 == r2 && std::cos(dth) == 1.0)
    throw SingularityError("greens: coincident points on a surface; use the tadpole module");
  const double a = m * std::min(r1, r2), b = m * std::max(r1, r2), c = m * R;
  const int nmax = 4000;
  std::vector<double> lkb, lkc;
  int built = 0;
  double sum = 0.0;
  int small = 0;
  for (int n = 0; n <= nmax; ++n) {
    if (n >= built) {
      built = std::min(nmax + 1, std::max(64, 2 * built));
      lkb = log_bessel_k_sequence(built - 1, b);
      lkc = log_bessel_k_sequence(built - 1, c);
    }
    const double lia = log_bessel_i(n, a);
    if (!std::isfinite(lia)) break;
    const double lib = log_bessel_i(n, b), lic = log_bessel_i(n, c);
    const double base = std::exp(lia + lkb[n]);
    const double corr = std::exp(lkc[n] - lkb[n] + lib - lic);
    const double g = base * (1.0 - corr);
    const double term = (n == 0 ? 1.0 : 2.0 * std::cos(n * dth)) * g;
    sum += term;
    if (std::abs(g) < 1e-17 * std::abs(sum)) {
      if (++small > 3) break;
    } else {
      small = 0;
    }
  }
  return sum / (2.0 * pi);
}

// Poisson factor sinh(w y)/sinh(w H) without overflow.
double sinh_ratio(double w, double y, double H) {
  if (w * H < 1e-8) return y / H;
  return std::exp(-w * (H - y)) * (-std::expm1(-2.0 * w * y)) / (-std::expm1(-2.0 * w * H));
}

}  // namespace

// ---------------------------------------------------------------- Geometry

Geometry Geometry::interval(double l) {
  require_positive(l, "interval length");
  return {Kind::Interval, l, 0.0};
}
Geometry Geometry::circle(double L) {
  require_positive(L, "circumference");
  return {Kind::Circle, L, 0.0};
}
Geometry Geometry::torus(double L1, double L2) {
  require_positive(L1, "L1");
  require_positive(L2, "L2");
  return {Kind::Torus, L1, L2};
}
Geometry Geometry::cylinder(double L, double H) {
  require_positive(L, "circumference");
  require_positive(H, "height");
  return {Kind::Cylinder, L, H};
}
Geometry Geometry::disk(double R) {
  require_positive(R, "radius");
  return {Kind::Disk, R, 0.0};
}
Geometry Geometry::sphere(double R) {
  require_positive(R, "radius");
  return {Kind::Sphere, R, 0.0};
}
Geometry Geometry::hemisphere(double R) {
  require_positive(R, "radius");
  return {Kind::Hemisphere, R, 0.0};
}
Geometry Geometry::spherical_sector(double R, double phi) {
  require_positive(R, "radius");
  if (!(phi > 0.0 && phi < pi)) throw DomainError("geometry: sector angle must lie in (0, pi)");
  return {Kind::SphericalSector, R, phi};
}

Geometry Geometry::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  std::string name(spec.substr(0, colon));
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  std::map<std::string, double> kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw DomainError("geometry: expected key=value in '" + std::string(item) + "'");
      const std::string key(item.substr(0, eq));
      const std::string val(item.substr(eq + 1));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(val, &used);
      } catch (const std::exception&) {
        throw DomainError("geometry: bad number '" + val + "'");
      }
      if (used != val.size()) throw DomainError("geometry: bad number '" + val + "'");
      kv[key] = v;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  auto get = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      auto it = kv.find(k);
      if (it != kv.end()) return it->second;
    }
    throw DomainError("geometry: missing parameter " + std::string(*keys.begin()) + " for " + name);
  };
  if (name == "interval") return interval(get({"l", "L"}));
  if (name == "circle") return circle(get({"L", "l"}));
  if (name == "torus") return torus(get({"L1"}), get({"L2"}));
  if (name == "cylinder") return cylinder(get({"L"}), get({"H"}));
  if (name == "disk") return disk(get({"R"}));
  if (name == "sphere") return sphere(get({"R"}));
  if (name == "hemisphere") return hemisphere(get({"R"}));
  if (name == "sector" || name == "spherical_sector" || name == "sphericalsector")
    return spherical_sector(get({"R"}), get({"phi"}));
  throw DomainError("geometry: unknown kind '" + name + "'");
}

std::string Geometry::to_string() const {
  std::ostringstream os;
  os.precision(15);
  switch (kind) {
    case Kind::Interval: os << "interval:l=" << a; break;
    case Kind::Circle: os << "circle:L=" << a; break;
    case Kind::Torus: os << "torus:L1=" << a << ",L2=" << b; break;
    case Kind::Cylinder: os << "cylinder:L=" << a << ",H=" << b; break;
    case Kind::Disk: os << "disk:R=" << a; break;
    case Kind::Sphere: os << "sphere:R=" << a; break;
    case Kind::Hemisphere: os << "hemisphere:R=" << a; break;
    case Kind::SphericalSector: os << "sector:R=" << a << ",phi=" << b; break;
  }
  return os.str();
}

int Geometry::dimension() const { return (kind == Kind::Interval || kind == Kind::Circle) ? 1 : 2; }

bool Geometry::has_boundary() const {
  return !(kind == Kind::Circle || kind == Kind::Torus || kind == Kind::Sphere);
}

double Geometry::volume() const {
  switch (kind) {
    case Kind::Interval:
    case Kind::Circle: return a;
    case Kind::Torus:
    case Kind::Cylinder: return a * b;
    case Kind::Disk: return pi * a * a;
    case Kind::Sphere: return 4.0 * pi * a * a;
    case Kind::Hemisphere: return 2.0 * pi * a * a;
    case Kind::SphericalSector: return 2.0 * pi * a * a * (1.0 - std::cos(b));
  }
  return 0.0;
}

std::vector<BoundaryComponent> boundary_components(const Geometry& g) {
  switch (g.kind) {
    case Kind::Interval: return {{BoundaryId::Left, 0.0, 1}, {BoundaryId::Right, 0.0, 1}};
    case Kind::Cylinder: return {{BoundaryId::Bottom, g.a, 0}, {BoundaryId::Top, g.a, 0}};
    case Kind::Disk:
    case Kind::Hemisphere: return {{BoundaryId::Rim, 2.0 * pi * g.a, 0}};
    case Kind::SphericalSector: return {{BoundaryId::Rim, 2.0 * pi * g.a * std::sin(g.b), 0}};
    default: return {};
  }
}

std::string to_string(BoundaryId id) {
  switch (id) {
    case BoundaryId::Left: return "left";
    case BoundaryId::Right: return "right";
    case BoundaryId::Bottom: return "bottom";
    case BoundaryId::Top: return "top";
    case BoundaryId::Rim: return "rim";
  }
  return "?";
}

bool is_interior(const Geometry& g, Point p) {
  switch (g.kind) {
    case Kind::Interval: return p[0] > 0.0 && p[0] < g.a;
    case Kind::Circle:
    case Kind::Torus:
    case Kind::Sphere: return true;
    case Kind::Cylinder: return p[1] > 0.0 && p[1] < g.b;
    case Kind::Disk: return p[1] >= 0.0 && p[1] < g.a;
    case Kind::Hemisphere: return p[0] >= 0.0 && p[0] < 0.5 * pi;
    case Kind::SphericalSector: return p[0] >= 0.0 && p[0] < g.b;
  }
  return false;
}

double distance(const Geometry& g, Point p, Point q) {
  auto wrap = [](double d, double P) {
    d = std::fmod(std::abs(d), P);
    return std::min(d, P - d);
  };
  switch (g.kind) {
    case Kind::Interval: return std::abs(p[0] - q[0]);
    case Kind::Circle: return wrap(p[0] - q[0], g.a);
    case Kind::Torus: return std::hypot(wrap(p[0] - q[0], g.a), wrap(p[1] - q[1], g.b));
    case Kind::Cylinder: return std::hypot(wrap(p[0] - q[0], g.a), p[1] - q[1]);
    case Kind::Disk: {
      const double x1 = p[1] * std::cos(p[0]), y1 = p[1] * std::sin(p[0]);
      const double x2 = q[1] * std::cos(q[0]), y2 = q[1] * std::sin(q[0]);
      return std::hypot(x1 - x2, y1 - y2);
    }
    case Kind::Sphere:
    case Kind::Hemisphere:
    case Kind::SphericalSector: return g.a * sphere_angle(p, q);
  }
  return 0.0;
}

// ---------------------------------------------------------------- heat kernels

double heat_trace_diag(const Geometry& g, Point p, double t, ThetaForm form) {
  if (!(t > 0.0)) throw DomainError("heat_trace_diag: t must be positive");
  const double s4 = std::sqrt(4.0 * pi * t);
  switch (g.kind) {
    case Kind::Circle: return periodic_gaussian(0.0, g.a, t, form) / s4;
    case Kind::Interval:
      return (periodic_gaussian(0.0, 2.0 * g.a, t, form) - periodic_gaussian(2.0 * p[0], 2.0 * g.a, t, form)) / s4;
    case Kind::Torus: return periodic_gaussian(0.0, g.a, t, form) * periodic_gaussian(0.0, g.b, t, form) / (s4 * s4);
    case Kind::Cylinder: {
      const double circ = periodic_gaussian(0.0, g.a, t, form) / s4;
      const double seg =
          (periodic_gaussian(0.0, 2.0 * g.b, t, form) - periodic_gaussian(2.0 * p[1], 2.0 * g.b, t, form)) / s4;
      return circ * seg;
    }
    case Kind::Sphere: {
      const double s = t / (g.a * g.a);
      return (1.0 / s + 1.0 / 3.0 + sphere_trace_remainder(s)) / (4.0 * pi * g.a * g.a);
    }
    case Kind::Hemisphere: {
      const double s = t / (g.a * g.a);
      const double full = (1.0 / s + 1.0 / 3.0 + sphere_trace_remainder(s)) / (4.0 * pi * g.a * g.a);
      return full - sphere_heat_kernel(g.a, std::abs(pi - 2.0 * p[0]), t);
    }
    default: throw UnsupportedError("heat_trace_diag: no heat kernel for " + g.to_string());
  }
}

double heat_trace_diag_remainder(const Geometry& g, Point p, double t) {
  if (!(t > 0.0)) throw DomainError("heat_trace_diag_remainder: t must be positive");
  const double s4 = std::sqrt(4.0 * pi * t);
  const auto A = ThetaForm::Auto;
  switch (g.kind) {
    case Kind::Circle: return periodic_gaussian(0.0, g.a, t, A, true) / s4;
    case Kind::Interval:
      return (periodic_gaussian(0.0, 2.0 * g.a, t, A, true) - periodic_gaussian(2.0 * p[0], 2.0 * g.a, t, A)) / s4;
    case Kind::Torus: {
      const double e1 = periodic_gaussian(0.0, g.a, t, A, true), e2 = periodic_gaussian(0.0, g.b, t, A, true);
      return (e1 + e2 + e1 * e2) / (s4 * s4);
    }
    case Kind::Cylinder: {
      const double ec = periodic_gaussian(0.0, g.a, t, A, true);
      const double ei =
          periodic_gaussian(0.0, 2.0 * g.b, t, A, true) - periodic_gaussian(2.0 * p[1], 2.0 * g.b, t, A);
      return (ec + ei + ec * ei) / (s4 * s4);
    }
    case Kind::Sphere: {
      const double R2 = g.a * g.a, s = t / R2;
      return (sphere_trace_remainder(s) + 1.0 / 3.0) / (4.0 * pi * R2);
    }
    case Kind::Hemisphere: {
      const double R2 = g.a * g.a, s = t / R2;
      return (sphere_trace_remainder(s) + 1.0 / 3.0) / (4.0 * pi * R2) -
             sphere_heat_kernel(g.a, std::abs(pi - 2.0 * p[0]), t);
    }
    default: throw UnsupportedError("heat_trace_diag_remainder: no heat kernel for " + g.to_string());
  }
}

TraceCoefficients trace_coefficients(const Geometry& g, BoundaryCondition bc) {
  const double sp = std::sqrt(pi);
  if (bc == BoundaryCondition::Neumann && g.kind != Kind::Hemisphere)
    throw UnsupportedError("trace_coefficients: Neumann condition only for the hemisphere");
  switch (g.kind) {
    case Kind::Interval: return {0.0, g.a / (2.0 * sp), -0.5};
    case Kind::Circle: return {0.0, g.a / (2.0 * sp), 0.0};
    case Kind::Torus: return {g.a * g.b / (4.0 * pi), 0.0, 0.0};
    case Kind::Cylinder: return {g.a * g.b / (4.0 * pi), -g.a / (4.0 * sp), 0.0};
    case Kind::Sphere: return {g.a * g.a, 0.0, 1.0 / 3.0};
    case Kind::Hemisphere: {
      const double sign = bc == BoundaryCondition::Dirichlet ? -1.0 : 1.0;
      return {0.5 * g.a * g.a, sign * sp * g.a / 4.0, 1.0 / 6.0};
    }
    default: throw UnsupportedError("trace_coefficients: no heat trace for " + g.to_string());
  }
}

double heat_trace_total(const Geometry& g, double t, BoundaryCondition bc) {
  const auto c = trace_coefficients(g, bc);
  return c.c_m1 / t + c.c_mhalf / std::sqrt(t) + c.c_0 + heat_trace_total_remainder(g, t, bc);
}

double heat_trace_total_remainder(const Geometry& g, double t, BoundaryCondition bc) {
  if (!(t > 0.0)) throw DomainError("heat_trace_total_remainder: t must be positive");
  if (bc == BoundaryCondition::Neumann && g.kind != Kind::Hemisphere)
    throw UnsupportedError("heat_trace_total_remainder: Neumann condition only for the hemisphere");
  const double s4 = std::sqrt(4.0 * pi * t);
  const auto A = ThetaForm::Auto;
  switch (g.kind) {
    case Kind::Interval: return g.a * periodic_gaussian(0.0, 2.0 * g.a, t, A, true) / s4;
    case Kind::Circle: return g.a * periodic_gaussian(0.0, g.a, t, A, true) / s4;
    case Kind::Torus: {
      const double e1 = periodic_gaussian(0.0, g.a, t, A, true), e2 = periodic_gaussian(0.0, g.b, t, A, true);
      return g.a * g.b * (e1 + e2 + e1 * e2) / (s4 * s4);
    }
    case Kind::Cylinder: {
      const double ec = periodic_gaussian(0.0, g.a, t, A, true);
      const double eh = periodic_gaussian(0.0, 2.0 * g.b, t, A, true);
      return g.a * g.b * (ec + eh + ec * eh) / (s4 * s4) - g.a * ec / (2.0 * s4);
    }
    case Kind::Sphere: return sphere_trace_remainder(t / (g.a * g.a));
    case Kind::Hemisphere: {
      const double s = t / (g.a * g.a);
      const double sign = bc == BoundaryCondition::Dirichlet ? -1.0 : 1.0;
      if (s >= 0.1) {
        // Dirichlet modes l + m odd (l per degree), Neumann l + m even (l + 1)
        const double tr = sign < 0 ? sphere_mode_sum(s, 1.0, 0.0) : sphere_mode_sum(s, 1.0, 1.0);
        return tr - 0.5 / s - sign * 0.25 * std::sqrt(pi / s) - 1.0 / 6.0;
      }
      return 0.5 * sphere_trace_remainder(s) + sign * 0.5 * sphere_s0_remainder(s);
    }
    default: throw UnsupportedError("heat_trace_total_remainder: no heat trace for " + g.to_string());
  }
}

// ---------------------------------------------------------------- Green's functions

double greens(const Geometry& g, double m, Point p, Point q) {
  require_positive(m, "mass");
  switch (g.kind) {
    case Kind::Interval: {
      const double l = g.a;
      const double x = std::min(p[0], q[0]), y = std::max(p[0], q[0]);
      return std::sinh(m * x) * std::sinh(m * (l - y)) / (m * std::sinh(m * l));
    }
    case Kind::Circle: {
      const double L = g.a;
      double d = std::fmod(std::abs(p[0] - q[0]), L);
      return std::cosh(m * (d - 0.5 * L)) / (2.0 * m * std::sinh(0.5 * m * L));
    }
    case Kind::Torus: {
      const double L1 = g.a, L2 = g.b;
      double dx = p[0] - q[0], dy = p[1] - q[1];
      dx -= L1 * std::round(dx / L1);
      dy -= L2 * std::round(dy / L2);
      if (dx == 0.0 && dy == 0.0) throw SingularityError("greens: coincident points on a surface; use the tadpole module");
      const double cut = 46.0 / m;
      const int K1 = int(std::ceil(cut / L1)) + 1, K2 = int(std::ceil(cut / L2)) + 1;
      double s = 0.0;
      for (int k = -K1; k <= K1; ++k)
        for (int l = -K2; l <= K2; ++l) {
          const double r = std::hypot(dx + k * L1, dy + l * L2);
          if (r > cut + L1 + L2) continue;
          s += specfun::bessel_k(0.0, m * r);
        }
      return s / (2.0 * pi);
    }
    case Kind::Cylinder: {
      const double L = g.a, H = g.b;
      double dx = p[0] - q[0];
      dx -= L * std::round(dx / L);
      if (dx == 0.0 && p[1] == q[1])
        throw SingularityError("greens: coincident points on a surface; use the tadpole module");
      const double cut = 46.0 / m;
      const int K = int(std::ceil(cut / L)) + 1, J = int(std::ceil(cut / (2.0 * H))) + 1;
      double s = 0.0;
      for (int k = -K; k <= K; ++k) {
        const double X = dx + k * L;
        if (std::abs(X) > cut + L) continue;
        for (int j = -J; j <= J; ++j) {
          const double r1 = std::hypot(X, p[1] - q[1] - 2.0 * j * H);
          const double r2 = std::hypot(X, p[1] + q[1] - 2.0 * j * H);
          if (r1 < cut + 2.0 * H) s += specfun::bessel_k(0.0, m * r1);
          if (r2 < cut + 2.0 * H) s -= specfun::bessel_k(0.0, m * r2);
        }
      }
      return s / (2.0 * pi);
    }
    case Kind::Disk: return disk_greens(m, g.a, p, q);
    case Kind::Sphere: return sphere_greens_angle(m, g.a, sphere_angle(p, q));
    case Kind::Hemisphere: {
      const Point qr{pi - q[0], q[1]};
      return sphere_greens_angle(m, g.a, sphere_angle(p, q)) - sphere_greens_angle(m, g.a, sphere_angle(p, qr));
    }
    case Kind::SphericalSector:
      throw UnsupportedError("greens: the spherical sector has only DN asymptotics in this library");
  }
  return 0.0;
}

double greens_normal_derivative(const Geometry& g, double m, Point p, Point b) {
  require_positive(m, "mass");
  if (!is_interior(g, p)) throw DomainError("greens_normal_derivative: p must be interior");
  switch (g.kind) {
    case Kind::Interval: {
      const double l = g.a, x = p[0];
      if (b[0] == 0.0) return -std::sinh(m * (l - x)) / std::sinh(m * l);
      if (b[0] == l) return -std::sinh(m * x) / std::sinh(m * l);
      throw DomainError("greens_normal_derivative: b is not an endpoint");
    }
    case Kind::Cylinder: {
      const double L = g.a, H = g.b, y = p[1];
      const bool top = b[1] == H;
      if (!top && b[1] != 0.0) throw DomainError("greens_normal_derivative: b is not on a boundary circle");
      const double dx = p[0] - b[0];
      const double depth = top ? y : H - y;  // the Poisson factor is sinh(w depth)/sinh(w H)
      double s = sinh_ratio(m, depth, H);
      for (int n = 1; n < 1000000; ++n) {
        const double w = std::hypot(m, 2.0 * pi * n / L);
        const double pn = sinh_ratio(w, depth, H);
        s += 2.0 * std::cos(2.0 * pi * n * dx / L) * pn;
        if (pn < 1e-18 * std::abs(s)) break;
      }
      return -s / L;
    }
    case Kind::Disk: {
      const double R = g.a, r = p[1], dth = p[0] - b[0];
      double s = 0.0;
      const double lic0 = log_bessel_i(0, m * R);
      s = std::exp(log_bessel_i(0, m * r) - lic0);
      for (int n = 1; n < 100000; ++n) {
        const double lr = log_bessel_i(n, m * r);
        if (!std::isfinite(lr)) break;
        const double ratio = std::exp(lr - log_bessel_i(n, m * R));
        s += 2.0 * std::cos(n * dth) * ratio;
        if (ratio < 1e-18 * std::abs(s)) break;
      }
      return -s / (2.0 * pi * R);
    }
    case Kind::Hemisphere: {
      const double R = g.a;
      const auto sp = sphere_params(m, R);
      const double gamma = sphere_angle(p, b);
      const double c = std::cos(0.5 * gamma);
      const auto fp = specfun::hyp2f1_dz(sp.a1, sp.a2, 1.0, c * c);
      return -std::cos(p[0]) * fp.real() / (4.0 * R * sp.cos_pi_beta);
    }
    default:
      throw UnsupportedError("greens_normal_derivative: no boundary Poisson kernel for " + g.to_string());
  }
}

double scalar_curvature(const Geometry& g, Point) {
  switch (g.kind) {
    case Kind::Sphere:
    case Kind::Hemisphere:
    case Kind::SphericalSector: return 2.0 / (g.a * g.a);
    default: return 0.0;
  }
}

}  // namespace zqft
