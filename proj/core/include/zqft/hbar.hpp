#pragma once

#include <string>
#include <vector>

namespace zqft {

// Truncated power series in hbar^{1/2}. Coefficients are indexed by twice
// the hbar order: c[j] multiplies hbar^{j/2}, j = 0..twice_kmax.
class HbarSeries {
 public:
  explicit HbarSeries(int twice_kmax = 2);
  static HbarSeries constant(double c, int twice_kmax);
  static HbarSeries monomial(double c, int twice_order, int twice_kmax);

  int twice_kmax() const { return int(c_.size()) - 1; }
  double kmax() const { return 0.5 * twice_kmax(); }

  double operator[](int twice_order) const;
  double& at(int twice_order);
  const std::vector<double>& coefficients() const { return c_; }

  HbarSeries& operator+=(const HbarSeries& o);
  HbarSeries& operator-=(const HbarSeries& o);
  HbarSeries& operator*=(double s);
  friend HbarSeries operator+(HbarSeries a, const HbarSeries& b) { return a += b; }
  friend HbarSeries operator-(HbarSeries a, const HbarSeries& b) { return a -= b; }
  friend HbarSeries operator*(HbarSeries a, double s) { return a *= s; }
  friend HbarSeries operator*(double s, HbarSeries a) { return a *= s; }
  // Product truncated at the smaller of the two orders.
  friend HbarSeries operator*(const HbarSeries& a, const HbarSeries& b);

  // Multiply by hbar^{twice_shift / 2}; negative shifts are rejected.
  HbarSeries shifted(int twice_shift) const;
  HbarSeries truncated(int twice_kmax) const;
  HbarSeries exp() const;

  // Lowest index with a nonzero coefficient, or twice_kmax() + 1 if zero.
  int valuation() const;
  bool is_zero() const { return valuation() > twice_kmax(); }
  double max_abs() const;
  double evaluate(double hbar) const;
  std::string to_string() const;

 private:
  std::vector<double> c_;
};

}  // namespace zqft
