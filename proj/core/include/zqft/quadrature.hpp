#pragma once

#include <array>
#include <functional>
#include <vector>

namespace zqft::quad {

using Fn = std::function<double(double)>;

struct Result {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod (61 point) on a finite interval.
Result adaptive(const Fn& f, double a, double b, double tol = 1e-13, unsigned max_depth = 18);
// Tanh-sinh on a finite interval; tolerates integrable endpoint singularities.
Result tanh_sinh(const Fn& f, double a, double b, double tol = 1e-13);
// exp-sinh on [a, inf).
Result semi_infinite(const Fn& f, double a, double tol = 1e-13);

// 32-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre32 {
  std::array<double, 32> x;
  std::array<double, 32> w;
};
const GaussLegendre32& gauss_legendre32();

// Nodes and weights of the composite 32-point rule on [a, b] split at the
// given break points (which need not be sorted or inside [a, b]).
struct NodeSet {
  std::vector<double> x;
  std::vector<double> w;
};
NodeSet composite_gl(double a, double b, std::vector<double> breaks, int panels_per_piece = 1);

}  // namespace zqft::quad
