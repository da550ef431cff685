#pragma once

#include <vector>

#include "hypexp/analytic_field.hpp"
#include "hypexp/grid_field.hpp"

namespace hypexp {

/// Boundary data phi together with its first and second tangential
/// derivatives on a common grid. `analytic` records whether derivatives came
/// from closed forms or from finite differences.
struct PhiContext {
  GridField phi;
  int dims = 0;
  std::vector<GridField> grad;
  std::vector<std::vector<GridField>> hess;
  bool analytic = false;

  static PhiContext from_grid(const GridField& phi);
  static PhiContext from_analytic(const AnalyticField& phi, const Grid& grid);
  /// Grid carrying the coefficients (dims == 0 when phi is constant).
  const Grid& grid() const { return phi.grid(); }
};

/// Mean curvature with the averaged convention: div(Dphi / W) / (n - 1),
/// W = sqrt(1 + |Dphi|^2). n defaults to dims + 1.
GridField mean_curvature(const GridField& phi, int n = -1);
GridField mean_curvature(const AnalyticField& phi, const Grid& grid, int n = -1);

/// det(Hess phi) / W^4. Tangential dimension 2 only.
GridField gauss_curvature(const GridField& phi);
GridField gauss_curvature(const AnalyticField& phi, const Grid& grid);

/// Laplace-Beltrami of H plus 2H(H^2 - K). Tangential dimension 2 only.
GridField willmore_residual(const GridField& phi);
GridField willmore_residual(const AnalyticField& phi, const Grid& grid);

struct PointGeometry {
  double W = 1;
  double H = 0;
  double K = 0;
  double willmore = 0;
};

/// Exact curvature data of an analytic graph at one point.
PointGeometry analytic_geometry(const AnalyticField& phi, double y1, double y2, int dims, int n = -1);

}  // namespace hypexp
