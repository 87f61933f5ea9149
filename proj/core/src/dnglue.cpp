#include "zqft/dnglue.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "zqft/errors.hpp"
#include "zqft/specfun.hpp"
#include "zqft/zetareg.hpp"

namespace zqft::dn {

using specfun::cplx;
using specfun::pi;

namespace {

void require_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("dnglue: mass must be positive");
}

double coth_minus_one(double x) { return 2.0 / std::expm1(2.0 * x); }

std::pair<cplx, cplx> sphere_alphas(double mR) {
  const double q = 0.25 - mR * mR;
  if (q >= 0.0) return {cplx(0.5 + std::sqrt(q), 0.0), cplx(0.5 - std::sqrt(q), 0.0)};
  return {cplx(0.5, std::sqrt(-q)), cplx(0.5, -std::sqrt(-q))};
}

double circle_omega(double R, double m, int n) { return std::sqrt(double(n) * n / (R * R) + m * m); }

// sinh(w y) / sinh(w H) without overflow
double sinh_ratio(double w, double y, double H) {
  return std::exp(-w * (H - y)) * (-std::expm1(-2.0 * w * y)) / (-std::expm1(-2.0 * w * H));
}

// Regular solution of the Helmholtz equation on the sphere, mode n, normalized
// to 1 on the equator: sin^n(theta) F(n+a1, n+a2; n+1; (1-cos theta)/2) / (same at pi/2).
double hemisphere_poisson_mode(double mR, int n, double theta) {
  const auto [a1, a2] = sphere_alphas(mR);
  const double z = 0.5 * (1.0 - std::cos(theta));
  const cplx f = specfun::hyp2f1(a1 + double(n), a2 + double(n), n + 1.0, z);
  const cplx f0 = specfun::hyp2f1(a1 + double(n), a2 + double(n), n + 1.0, 0.5);
  return std::pow(std::sin(theta), n) * f.real() / f0.real();
}

// Fitted tail of sum_{|n| > N} log(1 + delta_n) with delta_n ~ C n^{-p}.
struct Tail {
  double value = 0.0;
  double order = 0.0;
};
Tail fredholm_tail(double d_half, double d_full, int N) {
  if (std::abs(d_full) < 1e-15 || std::abs(d_half) < 1e-15 || N < 4) return {};
  const double p = std::log(std::abs(d_half) / std::abs(d_full)) / std::log(2.0);
  if (!(p > 1.0)) throw ConvergenceError("dnglue: Fredholm product does not converge (fitted order <= 1)");
  const double C = d_full * std::pow(double(N), p);
  return {2.0 * C * std::pow(N + 0.5, 1.0 - p) / (p - 1.0), p};
}

struct PiecePoint {
  bool left = true;
  Point p{0.0, 0.0};
};

}  // namespace

// ---------------------------------------------------------------- spectra

double log_dn_ratio(const Geometry& g, double m, int n) {
  require_mass(m);
  n = std::abs(n);
  switch (g.kind) {
    case Kind::Disk: {
      const double R = g.a;
      const double lam = specfun::bessel_i_log_derivative(n, m * R) / R;
      return std::log(lam / circle_omega(R, m, n));
    }
    case Kind::Cylinder: {
      const double w = kappa_eigenvalue(g.a, m, n);
      return std::log1p(coth_minus_one(g.b * w));
    }
    case Kind::Hemisphere: {
      const double R = g.a;
      const auto [a1, a2] = sphere_alphas(m * R);
      const cplx s = specfun::log_gamma_ratio((double(n) + a1) / 2.0, 0.5) +
                     specfun::log_gamma_ratio((double(n) + a2) / 2.0, 0.5);
      return std::log(2.0 / R) + s.real() - std::log(circle_omega(R, m, n));
    }
    case Kind::SphericalSector: return std::log(sector_dn_ratio_asymptotic(g.a, g.b, m, n));
    default: throw UnsupportedError("log_dn_ratio: no circle boundary on " + g.to_string());
  }
}

double dn_eigenvalue(const Geometry& g, BoundaryId b, double m, int n) {
  require_mass(m);
  switch (g.kind) {
    case Kind::Interval: {
      const auto D = interval_dn_matrix(g.a, m);
      if (b != BoundaryId::Left && b != BoundaryId::Right) throw DomainError("dn_eigenvalue: interval has Left/Right");
      if (n == 0) return D[0][0];
      if (n == 1) return D[0][1];
      throw DomainError("dn_eigenvalue: interval block index must be 0 (diagonal) or 1 (off-diagonal)");
    }
    case Kind::Cylinder:
      if (b != BoundaryId::Bottom && b != BoundaryId::Top) throw DomainError("dn_eigenvalue: cylinder has Bottom/Top");
      return kappa_eigenvalue(g.a, m, n) * std::exp(log_dn_ratio(g, m, n));
    case Kind::Disk:
    case Kind::Hemisphere:
      if (b != BoundaryId::Rim) throw DomainError("dn_eigenvalue: boundary is the rim");
      return circle_omega(g.a, m, n) * std::exp(log_dn_ratio(g, m, n));
    case Kind::SphericalSector:
      throw UnsupportedError("dn_eigenvalue: the spherical sector has only the asymptotic ratio "
                             "(sector_dn_ratio_asymptotic)");
    default: throw UnsupportedError("dn_eigenvalue: no boundary on " + g.to_string());
  }
}

double cylinder_dn_offdiag(const Geometry& g, double m, int n) {
  if (g.kind != Kind::Cylinder) throw UnsupportedError("cylinder_dn_offdiag: cylinder only");
  const double w = kappa_eigenvalue(g.a, m, n);
  return -w / std::sinh(g.b * w);
}

Matrix2 interval_dn_matrix(double l, double m) {
  require_mass(m);
  if (!(l > 0.0)) throw DomainError("interval_dn_matrix: length must be positive");
  const double d = m / std::tanh(m * l), o = -m / std::sinh(m * l);
  return {{{d, o}, {o, d}}};
}

double sector_dn_ratio_asymptotic(double R, double phi, double m, int n) {
  if (n == 0) throw DomainError("sector_dn_ratio_asymptotic: large-n asymptotic, n != 0");
  const double x = double(std::abs(n));
  const double z = m * m * R * R, s2 = std::sin(phi) * std::sin(phi);
  return 1.0 - z * std::cos(phi) * s2 / (2.0 * x * x * x) + z * (1.0 + 3.0 * std::cos(2.0 * phi)) * s2 / (8.0 * x * x * x * x);
}

double kappa_eigenvalue(double L, double m, int n) {
  require_mass(m);
  if (L == 0.0) return m;
  const double k = 2.0 * pi * n / L;
  return std::sqrt(m * m + k * k);
}

double log_det_reg_kappa(double L, double m) {
  const double x = 0.5 * m * L;
  return x + std::log(-std::expm1(-2.0 * x));
}

std::vector<SpectrumRow> dn_spectrum(const Geometry& g, double m, int n_max) {
  std::vector<SpectrumRow> rows;
  for (int n = 0; n <= n_max; ++n) {
    SpectrumRow r;
    r.n = n;
    if (g.kind == Kind::SphericalSector) {
      if (n == 0) continue;
      r.omega = std::sqrt(double(n) * n / std::pow(g.a * std::sin(g.b), 2) + m * m);
      r.ratio = sector_dn_ratio_asymptotic(g.a, g.b, m, n);
    } else {
      r.omega = g.kind == Kind::Cylinder ? kappa_eigenvalue(g.a, m, n) : circle_omega(g.a, m, n);
      r.ratio = std::exp(log_dn_ratio(g, m, n));
    }
    r.lambda = r.ratio * r.omega;
    rows.push_back(r);
  }
  return rows;
}

DeltaFit delta_order_fit(const Geometry& g, double m, int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi <= n_lo) throw DomainError("delta_order_fit: need 1 <= n_lo < n_hi");
  DeltaFit fit;
  fit.asymptotic_only = g.kind == Kind::SphericalSector;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double d = std::expm1(log_dn_ratio(g, m, n));
    if (std::abs(d) < 1e-15) continue;
    const double x = std::log(double(n)), y = std::log(std::abs(d));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.points;
  }
  if (fit.points < 2) {
    fit.superpolynomial = true;
    return fit;
  }
  const double k = fit.points;
  fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return fit;
}

double delta_norm(const Geometry& g, double m) {
  if (g.kind == Kind::Cylinder) return coth_minus_one(g.b * m);  // n = 0 dominates
  double best = 0.0;
  for (int n = (g.kind == Kind::SphericalSector ? 1 : 0); n <= 512; ++n)
    best = std::max(best, std::abs(std::expm1(log_dn_ratio(g, m, n))));
  return best;
}

double cylinder_delta_threshold(double L, double m, double tol) {
  double lo = 1e-6 / m, hi = 10.0 / m;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (delta_norm(Geometry::cylinder(L, mid), m) < 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- gluing

Gluing Gluing::make(const Geometry& left, const Geometry& right, bool close_into_circle) {
  Gluing gl;
  gl.left = left;
  gl.right = right;
  if (left.kind == Kind::Interval && right.kind == Kind::Interval) {
    gl.kind = close_into_circle ? GlueKind::CircleFromArcs : GlueKind::IntervalChain;
  } else if (left.kind == Kind::Cylinder && right.kind == Kind::Cylinder) {
    if (std::abs(left.a - right.a) > 1e-12 * left.a) throw DomainError("gluing: cylinder circumferences differ");
    gl.kind = GlueKind::CylinderStack;
  } else if (left.kind == Kind::Hemisphere && right.kind == Kind::Hemisphere) {
    if (std::abs(left.a - right.a) > 1e-12 * left.a) throw DomainError("gluing: hemisphere radii differ");
    gl.kind = GlueKind::SphereFromHemispheres;
  } else {
    throw UnsupportedError("gluing: unsupported pair " + left.to_string() + " + " + right.to_string());
  }
  return gl;
}

Geometry Gluing::glued() const {
  switch (kind) {
    case GlueKind::IntervalChain: return Geometry::interval(left.a + right.a);
    case GlueKind::CircleFromArcs: return Geometry::circle(left.a + right.a);
    case GlueKind::CylinderStack: return Geometry::cylinder(left.a, left.b + right.b);
    case GlueKind::SphereFromHemispheres: return Geometry::sphere(left.a);
  }
  return left;
}

int Gluing::interface_points() const {
  switch (kind) {
    case GlueKind::IntervalChain: return 1;
    case GlueKind::CircleFromArcs: return 2;
    default: return 0;
  }
}

double Gluing::log_bfk_constant() const { return -interface_points() * std::log(2.0); }

std::string Gluing::describe() const {
  static const char* names[] = {"interval+interval->interval", "arc+arc->circle", "cylinder+cylinder->cylinder",
                                "hemisphere+hemisphere->sphere"};
  return names[int(kind)];
}

FredholmResult log_det_dn(const Gluing& gl, double m, int n_max) {
  require_mass(m);
  FredholmResult r;
  r.n_max = n_max;
  switch (gl.kind) {
    case GlueKind::IntervalChain:
      r.log_det = std::log(m / std::tanh(m * gl.left.a) + m / std::tanh(m * gl.right.a));
      return r;
    case GlueKind::CircleFromArcs: {
      const auto A = interval_dn_matrix(gl.left.a, m), B = interval_dn_matrix(gl.right.a, m);
      const double a = A[0][0] + B[0][0], b = A[0][1] + B[0][1];
      r.log_det = std::log(a * a - b * b);
      return r;
    }
    case GlueKind::CylinderStack:
    case GlueKind::SphereFromHemispheres: break;
  }
  if (n_max < 1) throw DomainError("log_det_dn: n_max must be positive");
  const bool cyl = gl.kind == GlueKind::CylinderStack;
  auto log_ratio = [&](int n) {
    if (cyl) {
      const double w = kappa_eigenvalue(gl.left.a, m, n);
      return std::log1p(0.5 * (coth_minus_one(gl.left.b * w) + coth_minus_one(gl.right.b * w)));
    }
    return log_dn_ratio(gl.left, m, n);
  };
  double s = log_ratio(0);
  for (int n = 1; n <= n_max; ++n) s += 2.0 * log_ratio(n);
  const Tail t = fredholm_tail(std::expm1(log_ratio(n_max / 2)), std::expm1(log_ratio(n_max)), n_max);
  const double L = cyl ? gl.left.a : 2.0 * pi * gl.left.a;
  r.tail = t.value;
  r.fit_order = t.order;
  r.log_det = log_det_reg_kappa(L, m) + s + t.value;
  return r;
}

Residual bfk_residual(const Gluing& gl, double m, int n_max) {
  Residual r;
  const auto G = gl.glued();
  r.lhs = zeta::log_det_zeta(G, m);
  const auto dn = log_det_dn(gl, m, n_max);
  r.rhs = zeta::log_det_zeta(gl.left, m) + zeta::log_det_zeta(gl.right, m) + gl.log_bfk_constant() + dn.log_det;
  r.tail = std::abs(dn.tail);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

namespace {

PiecePoint to_piece(const Gluing& gl, Point p) {
  switch (gl.kind) {
    case GlueKind::IntervalChain:
    case GlueKind::CircleFromArcs: {
      const double l1 = gl.left.a, L = gl.left.a + gl.right.a;
      if (gl.kind == GlueKind::CircleFromArcs) p[0] -= L * std::floor(p[0] / L);
      if (p[0] > 0.0 && p[0] < l1) return {true, {p[0], 0.0}};
      if (p[0] > l1 && p[0] < L) return {false, {p[0] - l1, 0.0}};
      throw DomainError("gluing: point lies on the interface or outside");
    }
    case GlueKind::CylinderStack: {
      const double H1 = gl.left.b;
      if (p[1] > 0.0 && p[1] < H1) return {true, p};
      if (p[1] > H1 && p[1] < H1 + gl.right.b) return {false, {p[0], p[1] - H1}};
      throw DomainError("gluing: point lies on the interface or outside");
    }
    case GlueKind::SphereFromHemispheres:
      if (p[0] >= 0.0 && p[0] < 0.5 * pi) return {true, p};
      if (p[0] > 0.5 * pi && p[0] <= pi) return {false, {pi - p[0], p[1]}};
      throw DomainError("gluing: point lies on the equator");
  }
  return {};
}

}  // namespace

double interface_correction(const Gluing& gl, double m, Point p, Point q, int n_max) {
  require_mass(m);
  const auto pp = to_piece(gl, p), qq = to_piece(gl, q);
  switch (gl.kind) {
    case GlueKind::IntervalChain: {
      const double l1 = gl.left.a, l2 = gl.right.a;
      auto P = [&](const PiecePoint& x) {
        return x.left ? std::sinh(m * x.p[0]) / std::sinh(m * l1) : std::sinh(m * (l2 - x.p[0])) / std::sinh(m * l2);
      };
      const double D = m / std::tanh(m * l1) + m / std::tanh(m * l2);
      return P(pp) * P(qq) / D;
    }
    case GlueKind::CircleFromArcs: {
      const double l1 = gl.left.a, l2 = gl.right.a;
      // interface points a (x = 0) and b (x = l1)
      auto P = [&](const PiecePoint& x) -> std::array<double, 2> {
        if (x.left) return {std::sinh(m * (l1 - x.p[0])) / std::sinh(m * l1), std::sinh(m * x.p[0]) / std::sinh(m * l1)};
        return {std::sinh(m * x.p[0]) / std::sinh(m * l2), std::sinh(m * (l2 - x.p[0])) / std::sinh(m * l2)};
      };
      const auto A = interval_dn_matrix(l1, m), B = interval_dn_matrix(l2, m);
      const double a = A[0][0] + B[0][0], b = A[0][1] + B[0][1], det = a * a - b * b;
      const auto u = P(pp), v = P(qq);
      return (a * (u[0] * v[0] + u[1] * v[1]) - b * (u[0] * v[1] + u[1] * v[0])) / det;
    }
    case GlueKind::CylinderStack: {
      const double L = gl.left.a, H1 = gl.left.b, H2 = gl.right.b;
      const double dx = p[0] - q[0];
      auto P = [&](const PiecePoint& x, double w) {
        return x.left ? sinh_ratio(w, x.p[1], H1) : sinh_ratio(w, H2 - x.p[1], H2);
      };
      double s = 0.0;
      for (int n = 0; n <= n_max; ++n) {
        const double w = kappa_eigenvalue(L, m, n);
        const double lam = w * (2.0 + coth_minus_one(H1 * w) + coth_minus_one(H2 * w));
        const double term = P(pp, w) * P(qq, w) / lam;
        s += (n == 0 ? 1.0 : 2.0 * std::cos(2.0 * pi * n * dx / L)) * term;
      }
      return s / L;
    }
    case GlueKind::SphereFromHemispheres: {
      const double R = gl.left.a;
      const double dphi = p[1] - q[1];
      double s = 0.0;
      for (int n = 0; n <= n_max; ++n) {
        const double lam = circle_omega(R, m, n) * std::exp(log_dn_ratio(gl.left, m, n));
        const double term =
            hemisphere_poisson_mode(m * R, n, pp.p[0]) * hemisphere_poisson_mode(m * R, n, qq.p[0]) / (2.0 * lam);
        s += (n == 0 ? 1.0 : 2.0 * std::cos(n * dphi)) * term;
      }
      return s / (2.0 * pi * R);
    }
  }
  return 0.0;
}

Residual greens_glue_residual(const Gluing& gl, double m, Point p, Point q, int n_max) {
  Residual r;
  r.lhs = greens(gl.glued(), m, p, q);
  const auto pp = to_piece(gl, p), qq = to_piece(gl, q);
  double piece = 0.0;
  if (pp.left == qq.left) piece = greens(pp.left ? gl.left : gl.right, m, pp.p, qq.p);
  r.rhs = piece + interface_correction(gl, m, p, q, n_max);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

double tadpole_glue(const Gluing& gl, double m, Point p, PieceTadpole rule, int n_max) {
  const auto pp = to_piece(gl, p);
  double base = 0.0;
  if (rule == PieceTadpole::Local) {
    const Geometry& piece = pp.left ? gl.left : gl.right;
    base = piece.dimension() == 1 ? greens(piece, m, pp.p, pp.p) : zeta::tau_reg_closed(piece, m, pp.p);
  }
  return base + interface_correction(gl, m, p, p, n_max);
}

Residual tadpole_glue_residual(const Gluing& gl, double m, Point p, int n_max) {
  Residual r;
  const auto G = gl.glued();
  r.lhs = G.dimension() == 1 ? greens(G, m, p, p) : zeta::tau_reg_closed(G, m, p);
  r.rhs = tadpole_glue(gl, m, p, PieceTadpole::Local, n_max);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

}  // namespace zqft::dn
