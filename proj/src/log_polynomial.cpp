#include "hypexp/log_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "hypexp/errors.hpp"
#include "hypexp/format.hpp"

namespace hypexp {

namespace {

constexpr int kExact = LogPolynomial::kExact;

int sat_add(int a, int b) {
  if (a >= kExact || b >= kExact) return kExact;
  long s = long(a) + long(b);
  if (s >= kExact) return kExact;
  return int(s);
}

}  // namespace

LogPolynomial::LogPolynomial(const GridField& c0, int trunc) : trunc_(trunc) {
  if (0 <= trunc_) terms_.emplace(TermKey{0, 0}, c0);
  normalize();
}

LogPolynomial LogPolynomial::monomial(int i, int j, const GridField& c, int trunc) {
  if (j < 0) throw ValidationError("log power must be non-negative");
  LogPolynomial p;
  p.trunc_ = trunc;
  if (i <= trunc) p.terms_.emplace(TermKey{i, j}, c);
  p.normalize();
  return p;
}

GridField LogPolynomial::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? GridField(0.0) : it->second;
}

void LogPolynomial::add_term(int i, int j, const GridField& c) {
  if (j < 0) throw ValidationError("log power must be non-negative");
  if (i > trunc_) return;
  auto it = terms_.find({i, j});
  if (it == terms_.end())
    terms_.emplace(TermKey{i, j}, c);
  else
    it->second = it->second + c;
}

void LogPolynomial::set_term(int i, int j, const GridField& c) {
  if (j < 0) throw ValidationError("log power must be non-negative");
  if (i > trunc_) return;
  terms_.insert_or_assign(TermKey{i, j}, c);
}

void LogPolynomial::set_trunc_order(int K) {
  trunc_ = K;
  for (auto it = terms_.begin(); it != terms_.end();) it = it->first.i > K ? terms_.erase(it) : std::next(it);
}

int LogPolynomial::min_power() const {
  int m = kExact;
  for (auto& [k, c] : terms_) m = std::min(m, k.i);
  return m;
}

int LogPolynomial::low_order() const { return std::min(min_power(), sat_add(trunc_, 1)); }

int LogPolynomial::max_log_power() const {
  int m = 0;
  for (auto& [k, c] : terms_) m = std::max(m, k.j);
  return m;
}

int LogPolynomial::max_log_power_at(int i) const {
  int m = -1;
  for (auto& [k, c] : terms_)
    if (k.i == i) m = std::max(m, k.j);
  return m;
}

Grid LogPolynomial::grid() const {
  Grid g;
  for (auto& [k, c] : terms_) g = common_grid(g, c.grid());
  return g;
}

LogPolynomial& LogPolynomial::normalize(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = (it->second.sup_norm() < tol || it->first.i > trunc_) ? terms_.erase(it) : std::next(it);
  return *this;
}

LogPolynomial operator+(const LogPolynomial& a, const LogPolynomial& b) {
  LogPolynomial r;
  r.trunc_ = std::min(a.trunc_, b.trunc_);
  for (auto& [k, c] : a.terms_) r.add_term(k.i, k.j, c);
  for (auto& [k, c] : b.terms_) r.add_term(k.i, k.j, c);
  common_grid(a.grid(), b.grid());
  return r.normalize();
}

LogPolynomial operator-(const LogPolynomial& a, const LogPolynomial& b) { return a + (-1.0) * b; }

LogPolynomial operator*(const LogPolynomial& a, const LogPolynomial& b) {
  common_grid(a.grid(), b.grid());
  LogPolynomial r;
  r.trunc_ = std::min(sat_add(a.trunc_, b.low_order()), sat_add(b.trunc_, a.low_order()));
  for (auto& [ka, ca] : a.terms_)
    for (auto& [kb, cb] : b.terms_) {
      const int i = ka.i + kb.i;
      if (i > r.trunc_) continue;
      r.add_term(i, ka.j + kb.j, ca * cb);
    }
  return r.normalize();
}

LogPolynomial operator*(const GridField& s, const LogPolynomial& a) {
  LogPolynomial r;
  r.trunc_ = a.trunc_;
  for (auto& [k, c] : a.terms_) r.terms_.emplace(k, s * c);
  return r.normalize();
}

LogPolynomial lp_arith(const LogPolynomial& a, const LogPolynomial& b, ArithOp op, double s) {
  switch (op) {
    case ArithOp::Add:
      return a + b;
    case ArithOp::Mul:
      return a * b;
    case ArithOp::Scale:
      return s * a;
  }
  return a;
}

LogPolynomial lp_truncate(const LogPolynomial& a, int K) {
  LogPolynomial r = a;
  r.set_trunc_order(std::min(K, a.trunc_order()));
  return r;
}

LogPolynomial lp_recip(const LogPolynomial& a, int K) {
  if (a.min_power() < 0) throw SingularReciprocalError("reciprocal of a log-polynomial with negative powers");
  for (auto& [k, c] : a.terms())
    if (k.i == 0 && k.j > 0) throw SingularReciprocalError("reciprocal of a log-polynomial with a pure log term");
  GridField a0 = a.coeff(0, 0);
  const double scale = std::max(1.0, a0.sup_norm());
  if (!a.has(0, 0) || std::min(std::abs(a0.min()), std::abs(a0.max())) < 1e-12 * scale ||
      (a0.min() < 0 && a0.max() > 0))
    throw SingularReciprocalError("constant term vanishes somewhere on the grid");
  GridField inv0 = a0.map([](double x) { return 1.0 / x; });
  LogPolynomial d = a;
  d.erase_term(0, 0);
  LogPolynomial x = lp_truncate((-1.0) * inv0 * d, K);
  LogPolynomial term(GridField(1.0));
  LogPolynomial sum = term;
  for (int k = 1; k <= K && !term.empty(); ++k) {
    term = lp_truncate(term * x, K);
    sum = sum + term;
  }
  return lp_truncate(inv0 * sum, K);
}

LogPolynomial lp_diff(const LogPolynomial& a) {
  LogPolynomial r;
  r.set_trunc_order(a.is_exact() ? kExact : a.trunc_order() - 1);
  for (auto& [k, c] : a.terms()) {
    if (k.i != 0) r.add_term(k.i - 1, k.j, double(k.i) * c);
    if (k.j > 0) r.add_term(k.i - 1, k.j - 1, double(k.j) * c);
  }
  return r.normalize();
}

LogPolynomial lp_shift(const LogPolynomial& a, int k) {
  LogPolynomial r;
  r.set_trunc_order(a.is_exact() ? kExact : a.trunc_order() + k);
  for (auto& [key, c] : a.terms()) r.add_term(key.i + k, key.j, c);
  return r.normalize();
}

namespace {

// Antiderivative of c s^i (log s)^j, added into r.
void add_antiderivative(LogPolynomial& r, int i, int j, const GridField& c) {
  if (i == -1) {
    r.add_term(0, j + 1, c / double(j + 1));
    return;
  }
  const double ip1 = i + 1;
  double coef = 1.0 / ip1;
  for (int m = 0; m <= j; ++m) {
    r.add_term(i + 1, j - m, coef * c);
    coef *= -double(j - m) / ip1;
  }
}

}  // namespace

LogPolynomial lp_integrate(const LogPolynomial& a, IntegrationMode mode) {
  LogPolynomial r;
  r.set_trunc_order(a.is_exact() ? kExact : a.trunc_order() + 1);
  if (mode.from_zero) {
    for (auto& [k, c] : a.terms()) {
      if (k.i < -1) throw DivergentIntegralError("integral from zero diverges for t^" + std::to_string(k.i));
      add_antiderivative(r, k.i, k.j, c);
    }
    return r.normalize();
  }
  if (!(mode.r > 0)) throw DomainError("integration base point must be positive");
  for (auto& [k, c] : a.terms()) add_antiderivative(r, k.i, k.j, c);
  r.normalize();
  GridField at_r = lp_eval_field(r, mode.r);
  r.add_term(0, 0, -1.0 * at_r);
  return r.normalize();
}

double lp_eval(const LogPolynomial& a, double t, std::size_t y_index) {
  if (!(t > 0)) throw DomainError("log-polynomials are evaluated at t > 0 only");
  const double L = std::log(t);
  double s = 0;
  for (auto& [k, c] : a.terms()) s += c[y_index] * std::pow(t, k.i) * std::pow(L, k.j);
  return s;
}

GridField lp_eval_field(const LogPolynomial& a, double t) {
  if (!(t > 0)) throw DomainError("log-polynomials are evaluated at t > 0 only");
  const double L = std::log(t);
  GridField s(0.0);
  for (auto& [k, c] : a.terms()) s = s + (std::pow(t, k.i) * std::pow(L, k.j)) * c;
  return s;
}

double lp_distance(const LogPolynomial& a, const LogPolynomial& b, int K) {
  double d = 0;
  for (auto& [k, c] : a.terms())
    if (k.i <= K) d = std::max(d, (c - b.coeff(k.i, k.j)).sup_norm());
  for (auto& [k, c] : b.terms())
    if (k.i <= K && !a.has(k.i, k.j)) d = std::max(d, c.sup_norm());
  return d;
}

std::string to_string(const LogPolynomial& a) {
  std::ostringstream os;
  bool first = true;
  for (auto& [k, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    if (c.is_constant())
      os << fmt17(c[0]);
    else
      os << "[field sup " << fmt17(c.sup_norm()) << "]";
    os << "*t^" << k.i;
    if (k.j) os << "*log^" << k.j;
  }
  if (first) os << "0";
  if (!a.is_exact()) os << " + O(t^" << a.trunc_order() + 1 << ")";
  return os.str();
}

}  // namespace hypexp
