#pragma once

#include <climits>
#include <map>
#include <string>
#include <utility>

#include "hypexp/grid_field.hpp"

namespace hypexp {

/// Key of a monomial t^i (log t)^j.
struct TermKey {
  int i = 0;
  int j = 0;
  auto operator<=>(const TermKey&) const = default;
};

/// Finite sum of coeff(y') t^i (log t)^j, exact through t^trunc_order.
class LogPolynomial {
 public:
  /// trunc_order of a polynomial known exactly at all orders.
  static constexpr int kExact = INT_MAX / 4;
  static constexpr double kPruneTol = 1e-14;

  LogPolynomial() = default;
  explicit LogPolynomial(const GridField& c0, int trunc = kExact);
  static LogPolynomial monomial(int i, int j, const GridField& c, int trunc = kExact);
  static LogPolynomial monomial(int i, int j, double c, int trunc = kExact) {
    return monomial(i, j, GridField(c), trunc);
  }

  const std::map<TermKey, GridField>& terms() const { return terms_; }
  int trunc_order() const { return trunc_; }
  bool is_exact() const { return trunc_ >= kExact; }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of t^i (log t)^j, zero if absent.
  GridField coeff(int i, int j = 0) const;
  bool has(int i, int j = 0) const { return terms_.count({i, j}) > 0; }
  /// Adds c to the (i, j) coefficient; terms above trunc_order are ignored.
  void add_term(int i, int j, const GridField& c);
  void set_term(int i, int j, const GridField& c);
  void erase_term(int i, int j) { terms_.erase({i, j}); }
  void set_trunc_order(int K);

  /// Smallest power present, or kExact when empty.
  int min_power() const;
  /// Lowest power the truncated tail could still affect.
  int low_order() const;
  int max_log_power() const;
  /// Largest log power among terms with t-power i (-1 if none).
  int max_log_power_at(int i) const;
  /// Grid shared by all coefficients (dims 0 if all constant).
  Grid grid() const;

  /// Removes terms whose sup norm is below tol.
  LogPolynomial& normalize(double tol = kPruneTol);

  friend LogPolynomial operator+(const LogPolynomial& a, const LogPolynomial& b);
  friend LogPolynomial operator-(const LogPolynomial& a, const LogPolynomial& b);
  friend LogPolynomial operator*(const LogPolynomial& a, const LogPolynomial& b);
  friend LogPolynomial operator*(const GridField& s, const LogPolynomial& a);
  friend LogPolynomial operator*(double s, const LogPolynomial& a) { return GridField(s) * a; }
  friend LogPolynomial operator-(const LogPolynomial& a) { return -1.0 * a; }

 private:
  std::map<TermKey, GridField> terms_;
  int trunc_ = kExact;
};

enum class ArithOp { Add, Mul, Scale };

/// Generic entry point for add / mul / scale(s).
LogPolynomial lp_arith(const LogPolynomial& a, const LogPolynomial& b, ArithOp op, double s = 1.0);

/// Truncated Neumann series for 1/a through t^K.
LogPolynomial lp_recip(const LogPolynomial& a, int K);
LogPolynomial lp_diff(const LogPolynomial& a);
/// Multiplication by t^k.
LogPolynomial lp_shift(const LogPolynomial& a, int k);

struct IntegrationMode {
  bool from_zero = true;
  double r = 0.0;
  static IntegrationMode zero() { return {true, 0.0}; }
  static IntegrationMode from(double r) { return {false, r}; }
};

/// Antiderivative vanishing at t = 0 (from_zero) or at t = r.
LogPolynomial lp_integrate(const LogPolynomial& a, IntegrationMode mode);
double lp_eval(const LogPolynomial& a, double t, std::size_t y_index = 0);
/// Values at t on the coefficient grid.
GridField lp_eval_field(const LogPolynomial& a, double t);
LogPolynomial lp_truncate(const LogPolynomial& a, int K);

/// Largest sup-norm difference over terms of order <= K.
double lp_distance(const LogPolynomial& a, const LogPolynomial& b, int K = LogPolynomial::kExact);

std::string to_string(const LogPolynomial& a);

}  // namespace hypexp
