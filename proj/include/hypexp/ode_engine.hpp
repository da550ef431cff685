#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "hypexp/expansion.hpp"
#include "hypexp/log_polynomial.hpp"

namespace hypexp {

/// v'' + p v'/t + q v/t^2 + F = 0 with indicial roots m_low <= 0 < 2 <= m_high.
struct SingularODE {
  int m_low = 0;
  int m_high = 3;
  double r = 1.0;

  SingularODE() = default;
  SingularODE(int m_low, int m_high, double r);

  int p() const { return 1 - (m_low + m_high); }
  int q() const { return m_low * m_high; }
  int p_level(int l) const { return 1 + 2 * l - (m_low + m_high); }
  int q_level(int l) const { return (m_low - l) * (m_high - l); }
  int delta() const { return m_high - m_low; }
};

/// Values on increasing t-nodes in (0, r], one row per tangential slice.
struct SampledFunction {
  std::vector<double> t;
  std::size_t slices = 1;
  /// Slice-major: values[s * t.size() + k].
  std::vector<double> values;

  SampledFunction() = default;
  SampledFunction(std::vector<double> t, std::size_t slices);
  double& at(std::size_t s, std::size_t k) { return values[s * t.size() + k]; }
  double at(std::size_t s, std::size_t k) const { return values[s * t.size() + k]; }
  static SampledFunction sample(const std::vector<double>& t, const LogPolynomial& f);
};

/// Arguments a functional forcing may read.
enum ForcingRead : std::uint32_t {
  kReadV = 1u << 0,
  kReadVt = 1u << 1,
  kReadVOverT = 1u << 2,
  kReadV2OverT3 = 1u << 3,
  kReadVVtOverT2 = 1u << 4,
  kReadVt2OverT = 1u << 5,
  kReadDv = 1u << 6,
  kReadDvt = 1u << 7,
  kReadDvOverT = 1u << 8,
  kReadD2v = 1u << 9,
  kReadAll = (1u << 10) - 1,
};

struct ForcingArgs {
  LogPolynomial v, vt, v_over_t, v2_over_t3, vvt_over_t2, vt2_over_t;
  std::vector<LogPolynomial> dv, dvt, dv_over_t;
  std::vector<std::vector<LogPolynomial>> d2v;
  const PhiContext* ctx = nullptr;
};

struct FunctionalForcing {
  std::function<LogPolynomial(const ForcingArgs&)> eval;
  std::uint32_t reads = kReadAll;
  /// Declared linear in v^2/t^3, v v_t/t^2 and v_t^2/t.
  bool linear = false;
  /// Tangential data; the unknown's coefficients live on ctx's grid.
  PhiContext ctx;
  CoefficientDerivatives derivs;
  std::string name = "functional";
};

using ForcingTerm = std::variant<LogPolynomial, SampledFunction, FunctionalForcing>;

/// Builds the forcing arguments of v, reading only what `reads` asks for.
ForcingArgs forcing_args(const LogPolynomial& v, std::uint32_t reads, const PhiContext& ctx, int dims,
                         const CoefficientDerivatives& derivs = {});

/// Forcing of the graph equation written for v = u - phi with roots (0, n + 1).
FunctionalForcing minimal_graph_forcing(const PhiContext& ctx, int n, const CoefficientDerivatives& derivs = {});

/// Three-term integral representation of the level-l solution with v_l(r) given.
LogPolynomial solve_integral_rep(const SingularODE& ode, int l, const LogPolynomial& F, const GridField& v_r);
SampledFunction solve_integral_rep(const SingularODE& ode, int l, const SampledFunction& F,
                                   const std::vector<double>& v_r);

/// v' - 2 v / t.
LogPolynomial reduce_level(const LogPolynomial& v);
SampledFunction reduce_level(const SampledFunction& v);

enum class LiftForm { FromBoundary, FromZero };

/// v_{l-1} = t^2 [v_{l-1}(r) / r^2 - int_t^r v_l / s^2 ds].
LogPolynomial lift_level(const LogPolynomial& v_l, const GridField& v_prev_r, double r,
                         LiftForm form = LiftForm::FromBoundary);
SampledFunction lift_level(const SampledFunction& v_l, const std::vector<double>& v_prev_r, double r);

/// Residual v'' + p_l v'/t + q_l v/t^2 + F of a log-polynomial.
LogPolynomial ode_residual(const SingularODE& ode, int l, const LogPolynomial& v, const LogPolynomial& F);
/// Residual at the interior nodes of a sampled solution; boundary nodes are zero.
SampledFunction ode_residual(const SingularODE& ode, int l, const SampledFunction& v, const SampledFunction& F);

/// Order-by-order expansion of v = O(t^2) through order k. Free resonant
/// coefficients come from `nonlocal` and default to zero.
ExpansionResult formal_ode_expansion(const SingularODE& ode, const FunctionalForcing& F, int k,
                                     const std::map<TermKey, GridField>& nonlocal = {}, double zero_tol = 1e-8);

struct LogCheckViolation {
  int i = 0;
  int j = 0;
  int allowed = 0;
  double norm = 0;
};

struct LogCheckReport {
  bool pass = true;
  std::vector<LogCheckViolation> violations;
  std::string summary;
};

/// max j at order i must not exceed floor((i - 1) / (m_high - 1)).
LogCheckReport log_bound_check(const ExpansionResult& e, const SingularODE& ode, double tol = 1e-8);
/// When c_{m_high,1} vanishes, every log coefficient must vanish.
LogCheckReport no_log_propagation_check(const ExpansionResult& e, double tol = 1e-8);

}  // namespace hypexp
