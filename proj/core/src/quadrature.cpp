#include "zqft/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace zqft::quad {

Result adaptive(const Fn& f, double a, double b, double tol, unsigned max_depth) {
  Result r;
  if (a == b) return r;
  double l1 = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol, &r.error, &l1);
  return r;
}

Result tanh_sinh(const Fn& f, double a, double b, double tol) {
  Result r;
  if (a == b) return r;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double l1 = 0.0;
  r.value = integrator.integrate(f, a, b, tol, &r.error, &l1);
  return r;
}

Result semi_infinite(const Fn& f, double a, double tol) {
  Result r;
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  double l1 = 0.0;
  r.value = integrator.integrate([&](double t) { return f(a + t); }, 0.0, std::numeric_limits<double>::infinity(),
                                 tol, &r.error, &l1);
  return r;
}

const GaussLegendre32& gauss_legendre32() {
  static const GaussLegendre32 rule = [] {
    GaussLegendre32 g{};
    using G = boost::math::quadrature::gauss<double, 32>;
    const auto& xs = G::abscissa();
    const auto& ws = G::weights();
    // boost stores the 16 nonnegative abscissae
    for (std::size_t i = 0; i < 16; ++i) {
      g.x[15 - i] = -xs[i];
      g.w[15 - i] = ws[i];
      g.x[16 + i] = xs[i];
      g.w[16 + i] = ws[i];
    }
    return g;
  }();
  return rule;
}

NodeSet composite_gl(double a, double b, std::vector<double> breaks, int panels_per_piece) {
  std::vector<double> cuts{a, b};
  for (double c : breaks)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const auto& g = gauss_legendre32();
  NodeSet out;
  out.x.reserve(32 * (cuts.size() - 1) * panels_per_piece);
  out.w.reserve(out.x.capacity());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi - lo <= 0.0) continue;
    const double step = (hi - lo) / panels_per_piece;
    for (int p = 0; p < panels_per_piece; ++p) {
      const double pa = lo + p * step, half = 0.5 * step, mid = pa + half;
      for (int k = 0; k < 32; ++k) {
        out.x.push_back(mid + half * g.x[k]);
        out.w.push_back(half * g.w[k]);
      }
    }
  }
  return out;
}

}  // namespace zqft::quad
