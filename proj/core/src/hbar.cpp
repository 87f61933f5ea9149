#include "zqft/hbar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zqft/errors.hpp"

namespace zqft {

HbarSeries::HbarSeries(int twice_kmax) {
  if (twice_kmax < 0) throw DomainError("negative truncation order");
  c_.assign(twice_kmax + 1, 0.0);
}

HbarSeries HbarSeries::constant(double c, int twice_kmax) {
  HbarSeries s(twice_kmax);
  s.c_[0] = c;
  return s;
}

HbarSeries HbarSeries::monomial(double c, int twice_order, int twice_kmax) {
  HbarSeries s(twice_kmax);
  if (twice_order < 0) throw DomainError("negative hbar power");
  if (twice_order <= twice_kmax) s.c_[twice_order] = c;
  return s;
}

double HbarSeries::operator[](int j) const { return j >= 0 && j < int(c_.size()) ? c_[j] : 0.0; }

double& HbarSeries::at(int j) {
  if (j < 0 || j >= int(c_.size())) throw DomainError("hbar order outside truncation");
  return c_[j];
}

HbarSeries& HbarSeries::operator+=(const HbarSeries& o) {
  if (o.twice_kmax() < twice_kmax()) c_.resize(o.c_.size());
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
  return *this;
}

HbarSeries& HbarSeries::operator-=(const HbarSeries& o) {
  if (o.twice_kmax() < twice_kmax()) c_.resize(o.c_.size());
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
  return *this;
}

HbarSeries& HbarSeries::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

HbarSeries operator*(const HbarSeries& a, const HbarSeries& b) {
  const int k = std::min(a.twice_kmax(), b.twice_kmax());
  HbarSeries r(k);
  for (int i = 0; i <= k; ++i) {
    if (a.c_[i] == 0.0) continue;
    for (int j = 0; i + j <= k; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return r;
}

HbarSeries HbarSeries::shifted(int s) const {
  if (s < 0) throw DomainError("negative hbar shift");
  HbarSeries r(twice_kmax());
  for (int j = 0; j + s <= twice_kmax(); ++j) r.c_[j + s] = c_[j];
  return r;
}

HbarSeries HbarSeries::truncated(int k) const {
  HbarSeries r(k);
  for (int j = 0; j <= std::min(k, twice_kmax()); ++j) r.c_[j] = c_[j];
  return r;
}

HbarSeries HbarSeries::exp() const {
  // exp(c0) * sum_n x^n / n! with x the part of positive order
  HbarSeries x = *this;
  x.c_[0] = 0.0;
  HbarSeries term = constant(1.0, twice_kmax());
  HbarSeries sum = term;
  for (int n = 1; n <= twice_kmax(); ++n) {
    term = term * x;
    term *= 1.0 / n;
    sum += term;
  }
  return sum * std::exp(c_[0]);
}

int HbarSeries::valuation() const {
  for (int j = 0; j <= twice_kmax(); ++j) {
    if (c_[j] != 0.0) return j;
  }
  return twice_kmax() + 1;
}

double HbarSeries::max_abs() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

double HbarSeries::evaluate(double hbar) const {
  const double h = std::sqrt(hbar);
  double r = 0.0;
  for (int j = twice_kmax(); j >= 0; --j) r = r * h + c_[j];
  return r;
}

std::string HbarSeries::to_string() const {
  std::ostringstream os;
  os.precision(15);
  bool first = true;
  for (int j = 0; j <= twice_kmax(); ++j) {
    if (c_[j] == 0.0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[j];
    if (j == 1) os << " h^(1/2)";
    else if (j % 2 == 1) os << " h^(" << j << "/2)";
    else if (j == 2) os << " h";
    else if (j > 2) os << " h^" << j / 2;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace zqft
