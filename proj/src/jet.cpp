#include "hypexp/jet.hpp"

#include <algorithm>
#include <cmath>

#include "hypexp/errors.hpp"

namespace hypexp {

namespace {
double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}
}  // namespace

Jet::Jet(int order, double c) : order_(order) {
  if (order < 0 || order > kMaxOrder) throw OrderError("jet order out of range");
  c_[0][0] = c;
}

Jet Jet::variable(int order, int axis, double at) {
  Jet j(order, at);
  if (order >= 1) {
    if (axis == 0)
      j.c_[1][0] = 1;
    else
      j.c_[0][1] = 1;
  }
  return j;
}

double Jet::partial(int a, int b) const {
  if (a + b > order_) throw OrderError("jet derivative beyond truncation order");
  return c_[a][b] * factorial(a) * factorial(b);
}

Jet Jet::derivative(int axis) const {
  Jet d(std::max(order_ - 1, 0));
  for (int a = 0; a <= order_; ++a)
    for (int b = 0; a + b <= order_; ++b) {
      if (axis == 0 && a > 0) d.c_[a - 1][b] = a * c_[a][b];
      if (axis == 1 && b > 0) d.c_[a][b - 1] = b * c_[a][b];
    }
  if (order_ == 0) d.c_[0][0] = 0;
  return d;
}

Jet Jet::truncated(int order) const {
  Jet t(std::min(order, order_));
  for (int a = 0; a <= t.order_; ++a)
    for (int b = 0; a + b <= t.order_; ++b) t.c_[a][b] = c_[a][b];
  return t;
}

Jet& Jet::operator+=(const Jet& o) {
  *this = truncated(std::min(order_, o.order_));
  for (int a = 0; a <= order_; ++a)
    for (int b = 0; a + b <= order_; ++b) c_[a][b] += o.c_[a][b];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) { return *this += -1.0 * o; }

Jet& Jet::operator*=(double s) {
  for (auto& row : c_)
    for (double& v : row) v *= s;
  return *this;
}

Jet operator*(const Jet& x, const Jet& y) {
  const int N = std::min(x.order_, y.order_);
  Jet r(N);
  for (int a1 = 0; a1 <= N; ++a1)
    for (int b1 = 0; a1 + b1 <= N; ++b1) {
      const double xv = x.c_[a1][b1];
      if (xv == 0) continue;
      for (int a2 = 0; a1 + a2 + b1 <= N; ++a2)
        for (int b2 = 0; a1 + a2 + b1 + b2 <= N; ++b2) r.c_[a1 + a2][b1 + b2] += xv * y.c_[a2][b2];
    }
  return r;
}

Jet compose(const Jet& x, const std::array<double, Jet::kMaxOrder + 1>& derivs) {
  Jet dx = x;
  dx.c_[0][0] = 0;
  Jet result(x.order_, derivs[0]);
  Jet power(x.order_, 1.0);
  double fact = 1;
  for (int k = 1; k <= x.order_; ++k) {
    power = power * dx;
    fact *= k;
    result += (derivs[k] / fact) * power;
  }
  return result;
}

Jet recip(const Jet& a) {
  const double c = a.value();
  if (c == 0) throw SingularReciprocalError("jet reciprocal of zero");
  std::array<double, Jet::kMaxOrder + 1> d{};
  double p = 1 / c;
  for (int k = 0; k <= a.order_; ++k) {
    d[k] = p;
    p *= -(k + 1) / c;
  }
  return compose(a, d);
}

Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

Jet sqrt(const Jet& a) {
  const double c = a.value();
  if (!(c > 0)) throw DomainError("jet square root of non-positive value");
  std::array<double, Jet::kMaxOrder + 1> d{};
  double coef = 1;
  for (int k = 0; k <= a.order_; ++k) {
    d[k] = coef * std::pow(c, 0.5 - k);
    coef *= 0.5 - k;
  }
  return compose(a, d);
}

Jet sin(const Jet& a) {
  std::array<double, Jet::kMaxOrder + 1> d{};
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cyc[4] = {s, c, -s, -c};
  for (int k = 0; k <= a.order_; ++k) d[k] = cyc[k % 4];
  return compose(a, d);
}

Jet cos(const Jet& a) {
  std::array<double, Jet::kMaxOrder + 1> d{};
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cyc[4] = {c, -s, -c, s};
  for (int k = 0; k <= a.order_; ++k) d[k] = cyc[k % 4];
  return compose(a, d);
}

}  // namespace hypexp
