#pragma once

#include <array>

namespace hypexp {

/// Truncated Taylor polynomial in up to two variables around a base point.
/// Coefficient (a, b) multiplies dy1^a dy2^b; terms with a + b > order are
/// dropped.
class Jet {
 public:
  static constexpr int kMaxOrder = 6;

  explicit Jet(int order = 0, double c = 0.0);
  /// The coordinate function y_axis expanded around `at`.
  static Jet variable(int order, int axis, double at);

  int order() const { return order_; }
  double coeff(int a, int b = 0) const { return c_[a][b]; }
  double& coeff(int a, int b = 0) { return c_[a][b]; }
  double value() const { return c_[0][0]; }
  /// Partial derivative d^(a+b) / dy1^a dy2^b at the base point.
  double partial(int a, int b = 0) const;
  /// Jet of the partial derivative along `axis`, one order lower.
  Jet derivative(int axis) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { a.c_[0][0] += s; return a; }
  friend Jet operator+(double s, Jet a) { a.c_[0][0] += s; return a; }
  friend Jet operator-(Jet a, double s) { a.c_[0][0] -= s; return a; }
  friend Jet operator-(double s, const Jet& a) { return (-1.0 * a) + s; }
  friend Jet operator-(const Jet& a) { return -1.0 * a; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet recip(const Jet& a);
  friend Jet sqrt(const Jet& a);
  friend Jet sin(const Jet& a);
  friend Jet cos(const Jet& a);
  /// f(a) given f and its derivatives at a.value(): derivs[k] = f^(k).
  friend Jet compose(const Jet& a, const std::array<double, kMaxOrder + 1>& derivs);

 private:
  int order_;
  std::array<std::array<double, kMaxOrder + 1>, kMaxOrder + 1> c_{};
};

}  // namespace hypexp
