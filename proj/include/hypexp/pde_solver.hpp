#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypexp/expansion.hpp"
#include "hypexp/mesh.hpp"

namespace hypexp {

struct SolverConfig {
  /// Target for the sup norm of t^2 * Q over interior nodes.
  double newton_tol = 1e-10;
  int max_iters = 30;
  bool damping = true;
  /// Ellipticity floor: the solve fails when 1 + |Du|^2 exceeds lambda.
  double lambda = 1e4;
};

/// Dirichlet data on the lateral faces and the top row.
struct LateralBC {
  enum class Kind { Oracle, FromExpansion } kind = Kind::Oracle;
  double R = 1;
  LogPolynomial uk;

  static LateralBC oracle(double R) { return {Kind::Oracle, R, {}}; }
  /// uk is the full expansion including phi.
  static LateralBC from_expansion(LogPolynomial uk) { return {Kind::FromExpansion, 0, std::move(uk)}; }
};

struct SolveResult {
  DiscreteField u;
  std::vector<double> history;
  int iterations = 0;
};

/// R - sqrt(R^2 - |y'|^2 - t^2) on the mesh.
DiscreteField hemisphere_exact(double R, const HalfStripMesh& mesh);

/// Q(u) at interior nodes (zero elsewhere), dimension n = dims + 1.
DiscreteField assemble_residual(const DiscreteField& u);

/// Q at one node from finite-difference derivatives.
double node_residual(const NodeDerivatives& D, int dims, double t);

/// Damped Newton iteration for Q(u) = 0 with u = phi on t = 0 and the given
/// lateral data. The initial guess defaults to the local expansion u_*.
SolveResult newton_solve(const HalfStripMesh& mesh, const GridField& phi, const LateralBC& bc,
                         const SolverConfig& config, const std::optional<LogPolynomial>& initial_guess = std::nullopt);

/// Comparison function with value, gradient and Hessian in (y1, y2, t).
struct Barrier {
  std::string name;
  std::function<void(double y1, double y2, double t, double& w, std::array<double, 3>& g,
                     std::array<std::array<double, 3>, 3>& H)>
      eval;
};

/// a |y'|^2 + b t^2.
Barrier quadratic_barrier(double a, double b);
/// A ((|y'|^2 + t)^(n+1) - (|y'|^2 + t)^q).
Barrier power_barrier(double A, double q, int n);

struct BarrierReport {
  std::size_t nodes = 0;
  std::size_t negative = 0;
  double max_Lw = 0;
  /// Boundary nodes where w < |u - phi|.
  std::size_t boundary_violations = 0;
  double min_boundary_gap = 0;
  bool check_boundary = true;
  /// Quadratic barriers: direct evaluation 2(n-1)a + 2(1-n)b and the
  /// alternative printed form 2(1-n)b + (n-1)a of the upper bound on Lw.
  double bound_direct = 0;
  double bound_printed = 0;
  bool pass = false;
};

/// Evaluates L w = A_ij w_ij - n w_t / t with A_ij = delta_ij - u_i u_j / (1 + |Du|^2)
/// frozen at u, on interior nodes with |y'|^2 + t < region (all nodes when
/// region <= 0), and compares w with |u - phi| on the boundary.
BarrierReport barrier_check(const Barrier& w, const DiscreteField& u, double region = 0, bool check_boundary = true);
BarrierReport barrier_check(double a, double b, const DiscreteField& u);

struct DecayRatio {
  std::string name;
  double max_ratio = 0;
  double slope = 0;
  std::size_t levels = 0;
  bool pass = false;
};

struct DecayReport {
  std::vector<DecayRatio> ratios;
  bool pass = false;
};

/// Ratios |u - phi| / t^2, |D(u - phi)| / t and (when u_star is given)
/// |u - u_*| / t^(n+1), each as a sup over |y'| < mask per t-level. A ratio
/// passes when its log-log slope against t is at least -0.1.
DecayReport decay_check(const DiscreteField& u, const std::optional<LogPolynomial>& u_star = std::nullopt,
                        double mask = 0, double t_max = 0);

}  // namespace hypexp
