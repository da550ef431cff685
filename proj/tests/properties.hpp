#pragma once

// Randomized log-polynomial property suites shared by the unit tests and the
// acceptance runner.

#include <cmath>
#include <random>
#include <string>

#include "hypexp/log_polynomial.hpp"

namespace props {

using hypexp::Grid;
using hypexp::GridField;
using hypexp::LogPolynomial;

struct Outcome {
  int cases = 0;
  int failures = 0;
  std::string first;

  void record(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
};

class Generator {
 public:
  explicit Generator(unsigned seed) : rng_(seed), grid_(Grid::box(1, 0.2, 0.05)) {}

  const Grid& grid() const { return grid_; }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  GridField coefficient() {
    if (integer(0, 1) == 0) return GridField(real(-1, 1));
    return GridField::sample(grid_, [&](double, double) { return real(-1, 1); });
  }

  /// Up to five terms with i in [i_lo, 5] and j in [0, 2]; exact unless `truncated`.
  LogPolynomial poly(int i_lo, bool truncated) {
    LogPolynomial p;
    if (truncated && integer(0, 1) == 1) p.set_trunc_order(integer(4, 9));
    const int terms = integer(1, 5);
    for (int q = 0; q < terms; ++q) {
      const int i = integer(i_lo, 5);
      if (i <= p.trunc_order()) p.add_term(i, integer(0, 2), coefficient());
    }
    return p.normalize();
  }

 private:
  std::mt19937 rng_;
  Grid grid_;
};

inline double scale(const LogPolynomial& a) {
  double s = 1;
  for (auto& [k, c] : a.terms()) s = std::max(s, c.sup_norm());
  return s;
}

inline bool close(const LogPolynomial& a, const LogPolynomial& b, double rel = 1e-12) {
  return a.trunc_order() == b.trunc_order() && hypexp::lp_distance(a, b) <= rel * std::max(scale(a), scale(b));
}

/// Commutativity, associativity and distributivity of + and *.
inline Outcome ring_laws(int cases, unsigned seed) {
  Generator g(seed);
  Outcome out;
  for (int c = 0; c < cases; ++c) {
    auto a = g.poly(-1, true), b = g.poly(-1, true), d = g.poly(-1, true);
    bool ok = close(a + b, b + a) && close(a * b, b * a) && close((a + b) + d, a + (b + d)) &&
              close((a * b) * d, a * (b * d), 1e-11) && close(a * (b + d), a * b + a * d, 1e-11);
    out.record(ok, "a = " + to_string(a) + ", b = " + to_string(b) + ", c = " + to_string(d));
  }
  return out;
}

/// lp_diff(a b) = lp_diff(a) b + a lp_diff(b).
inline Outcome leibniz(int cases, unsigned seed) {
  Generator g(seed);
  Outcome out;
  for (int c = 0; c < cases; ++c) {
    auto a = g.poly(-1, true), b = g.poly(-1, true);
    auto lhs = hypexp::lp_diff(a * b);
    auto rhs = hypexp::lp_diff(a) * b + a * hypexp::lp_diff(b);
    out.record(close(lhs, rhs, 1e-11), "a = " + to_string(a) + ", b = " + to_string(b));
  }
  return out;
}

/// lp_diff(lp_integrate(a, from zero)) = a; the log power grows by at most
/// one and only through t^-1 terms.
inline Outcome fundamental_theorem(int cases, unsigned seed) {
  Generator g(seed);
  Outcome out;
  for (int c = 0; c < cases; ++c) {
    auto a = g.poly(-1, true);
    auto A = hypexp::lp_integrate(a, hypexp::IntegrationMode::zero());
    bool ok = close(hypexp::lp_diff(A), a);
    const int grow = A.max_log_power() - a.max_log_power();
    ok = ok && grow <= 1 && (grow <= 0 || a.max_log_power_at(-1) == a.max_log_power());
    out.record(ok, "a = " + to_string(a));
  }
  return out;
}

/// eval(a b) = eval(a) eval(b) at random (y', t) for exact a, b.
inline Outcome eval_homomorphism(int cases, unsigned seed) {
  Generator g(seed);
  Outcome out;
  auto abs_eval = [](const LogPolynomial& p, double t, std::size_t y) {
    double s = 0;
    for (auto& [k, c] : p.terms()) s += std::abs(c[y]) * std::pow(t, k.i) * std::pow(std::abs(std::log(t)), k.j);
    return s;
  };
  for (int c = 0; c < cases; ++c) {
    auto a = g.poly(-2, false), b = g.poly(-2, false);
    const double t = std::exp(g.real(std::log(0.01), std::log(2.0)));
    const std::size_t y = std::size_t(g.integer(0, int(g.grid().size()) - 1));
    const double lhs = hypexp::lp_eval(a * b, t, y);
    const double rhs = hypexp::lp_eval(a, t, y) * hypexp::lp_eval(b, t, y);
    const double s = std::max(abs_eval(a, t, y) * abs_eval(b, t, y), 1e-300);
    out.record(std::abs(lhs - rhs) <= 1e-10 * s, "a = " + to_string(a) + ", b = " + to_string(b));
  }
  return out;
}

}  // namespace props
