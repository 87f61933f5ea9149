#pragma once

#include <stdexcept>
#include <string>

namespace zqft {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_error(achieved) {}
  double achieved_error;
};

struct UnsupportedError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when a perturbative series is asked to run outside its radius of
// convergence (||delta|| >= 1 at an interface).
struct AssumptionViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace zqft
