#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypexp/geometry.hpp"
#include "hypexp/log_polynomial.hpp"

namespace hypexp {

enum class Provenance { Local, NonlocalInput, Fitted };
std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// Expansion u_k - phi together with its bookkeeping.
struct ExpansionResult {
  int n = 2;
  int order = 0;
  /// Resonant order carrying the first free coefficient (n + 1 for the graph equation).
  int m_high = 3;
  LogPolynomial terms;
  std::map<TermKey, Provenance> provenance;
  PhiContext phi;
  /// Largest coefficient of Q(u_*) below the guaranteed order.
  double local_residual = 0;
  std::vector<std::string> warnings;

  /// phi + terms.
  LogPolynomial full() const;
};

/// Tangential derivatives of a log-polynomial, coefficient by coefficient.
struct TangentialDerivs {
  std::vector<LogPolynomial> d1;
  std::vector<std::vector<LogPolynomial>> d2;
};
TangentialDerivs lp_tangential_derivatives(const LogPolynomial& w, int dims);

/// Source of tangential derivatives for u - phi; finite differences when empty.
using CoefficientDerivatives = std::function<TangentialDerivs(const LogPolynomial& w, int dims)>;

/// Q(u) = Lap u - u_i u_j u_ij / (1 + |Du|^2) - n u_t / t through t^K.
/// Tangential derivatives of phi come from ctx; those of u - phi from
/// finite differences of its coefficients.
LogPolynomial apply_Q(const LogPolynomial& u, const PhiContext& ctx, int n, int K,
                      const CoefficientDerivatives& derivs = {});

/// Pointwise evaluation of Q(u) using the same derivative data as apply_Q.
class QEvaluator {
 public:
  QEvaluator(const LogPolynomial& u, const PhiContext& ctx, int n, const CoefficientDerivatives& derivs = {});
  double operator()(std::size_t y_index, double t) const;

 private:
  int n_;
  int dims_;
  LogPolynomial ut_, utt_;
  std::vector<LogPolynomial> du_, dut_;
  std::vector<std::vector<LogPolynomial>> d2u_;
};

/// Highest local order: n for n even, n + 1 (the log leader) for n odd.
int local_top_order(int n);

/// Local coefficients c_2, c_4, ... and, for odd n, c_{n+1,1}, through order k.
ExpansionResult compute_local_coeffs(const PhiContext& ctx, int n, int k);

/// Closed-form c_{4,1} = -W/8 (Lap_S H + 2H(H^2 - K)) for n = 3.
GridField willmore_c41(const GridField& phi);
GridField willmore_c41(const AnalyticField& phi, const Grid& grid);

struct NonlocalCoeff {
  int i = 0;
  int j = 0;
  GridField c;
  Provenance tag = Provenance::NonlocalInput;
};

/// Adds nonlocal coefficients to a local expansion and truncates at k.
ExpansionResult build_uk(const ExpansionResult& local, const std::vector<NonlocalCoeff>& nonlocal, int k);

struct FGraphCoeffs {
  GridField a1;
  std::optional<GridField> a31;
  int p = 0;
  int q = 0;
  int m_low = -1;
  int m_high = 0;
};

/// Boundary-distance graph coefficients a_1 = sqrt(2/H) and, for n = 3,
/// a_{3,1}. When laplace_H is absent the flat Laplacian of H on its grid is used.
FGraphCoeffs f_graph_coeffs(const GridField& H, const std::optional<GridField>& K, int n,
                            const std::optional<GridField>& laplace_H = std::nullopt);

}  // namespace hypexp
