#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hypexp/expansion.hpp"
#include "hypexp/mesh.hpp"

namespace hypexp {

/// Fitted model |value| ~ C t^gamma (log 1/t)^j.
struct FitResult {
  double gamma = 0;
  int j = 0;
  double C = 0;
  double residual = 0;
  double t_lo = 0;
  double t_hi = 0;
  std::size_t samples = 0;
};

struct Sample {
  double t;
  double value;
};

/// Least-squares fit of log|value| = log C + gamma log t + j log log(1/t)
/// for j = 0..j_max, keeping the smallest j unless a larger one lowers the
/// RMS by more than 1%.
FitResult fit_exponent(const std::vector<Sample>& samples, int j_max);

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct RemainderOptions {
  double alpha = 0.5;
  double tol = 0.15;
  int j_max = 2;
  /// Fit window; non-positive values select [4 t_min, r / 4].
  double t_lo = 0;
  double t_hi = 0;
  /// Tangential mask radius; non-positive selects r / 2.
  double mask = 0;
  /// Rounding level of u relative to max(1, sup|u|); a level is dropped when
  /// its value is below that level times the stencil weight.
  double noise = 1e-15;
};

struct RemainderRow {
  int tau = 0;
  int m = 0;
  int k = 0;
  double threshold = 0;
  bool below_noise = false;
  bool pass = false;
  FitResult fit;
  std::string note;
};

/// Fits the decay of D^tau_y' d_t^m (u - u_k) on the mesh and checks
/// gamma >= k - m + alpha - tol for each requested (tau, m).
std::vector<RemainderRow> verify_remainder_bound(const DiscreteField& u, const ExpansionResult& uk, int k,
                                                 const std::vector<std::pair<int, int>>& tau_m,
                                                 const RemainderOptions& opt = {});

/// Samples sup_{|y'| < mask} |D^tau d_t^m w| per t-level together with the
/// stencil rounding level, for w = u - u_k and absolute noise level.
struct LevelSample {
  double t;
  double value;
  double noise;
};
std::vector<LevelSample> remainder_levels(const DiscreteField& u, const ExpansionResult& uk, int tau, int m,
                                          double mask, double noise);

/// Per-node fit of (u - u_k) / t^i = c + d t over the window, giving a fitted
/// coefficient field for t^i.
GridField fit_coefficient(const DiscreteField& u, const ExpansionResult& uk, int i, double t_lo, double t_hi);

}  // namespace hypexp
