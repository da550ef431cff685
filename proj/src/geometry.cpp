#include "hypexp/geometry.hpp"

#include <cmath>

#include "hypexp/errors.hpp"

namespace hypexp {

PhiContext PhiContext::from_grid(const GridField& phi) {
  PhiContext c;
  c.phi = phi;
  c.dims = phi.grid().dims;
  auto d = fd_derivatives(phi, 2, c.dims);
  c.grad = std::move(d.grad);
  c.hess = std::move(d.hess);
  c.analytic = false;
  return c;
}

PhiContext PhiContext::from_analytic(const AnalyticField& phi, const Grid& grid) {
  PhiContext c;
  c.dims = grid.dims;
  c.analytic = true;
  const std::size_t N = grid.size();
  std::vector<double> v(N);
  std::vector<std::vector<double>> g(c.dims, std::vector<double>(N));
  std::vector<std::vector<std::vector<double>>> hs(c.dims, std::vector<std::vector<double>>(c.dims, std::vector<double>(N)));
  for (std::size_t k = 0; k < N; ++k) {
    auto p = grid.point(k);
    Jet j = phi.jet(p[0], p[1], c.dims, 2);
    v[k] = j.value();
    for (int a = 0; a < c.dims; ++a) {
      g[a][k] = j.partial(a == 0 ? 1 : 0, a == 1 ? 1 : 0);
      for (int b = 0; b < c.dims; ++b) hs[a][b][k] = j.partial((a == 0) + (b == 0), (a == 1) + (b == 1));
    }
  }
  if (grid.dims == 0) {
    c.phi = GridField(v[0]);
    return c;
  }
  c.phi = GridField(grid, v);
  for (int a = 0; a < c.dims; ++a) {
    c.grad.emplace_back(grid, g[a]);
    c.hess.emplace_back();
    for (int b = 0; b < c.dims; ++b) c.hess[a].emplace_back(grid, hs[a][b]);
  }
  return c;
}

namespace {

int default_n(int dims, int n) { return n < 0 ? dims + 1 : n; }

// Shared formula given first and second derivatives on a grid.
GridField mean_curvature_from(const std::vector<GridField>& g, const std::vector<std::vector<GridField>>& hs,
                              int n) {
  const int d = int(g.size());
  GridField W2(1.0);
  for (int a = 0; a < d; ++a) W2 += g[a] * g[a];
  GridField lap(0.0), quad(0.0);
  for (int a = 0; a < d; ++a) {
    lap += hs[a][a];
    for (int b = 0; b < d; ++b) quad += g[a] * g[b] * hs[a][b];
  }
  GridField W = W2.map([](double x) { return std::sqrt(x); });
  return (lap - quad / W2) / W / double(n - 1);
}

GridField gauss_from(const std::vector<GridField>& g, const std::vector<std::vector<GridField>>& hs) {
  GridField W2 = 1.0 * GridField(1.0) + g[0] * g[0] + g[1] * g[1];
  return (hs[0][0] * hs[1][1] - hs[0][1] * hs[1][0]) / (W2 * W2);
}

}  // namespace

GridField mean_curvature(const GridField& phi, int n) {
  const int d = phi.grid().dims;
  n = default_n(d, n);
  if (n < 2) throw DimensionError("mean curvature needs n >= 2");
  if (phi.is_constant()) return GridField(0.0);
  auto D = fd_derivatives(phi, 2);
  return mean_curvature_from(D.grad, D.hess, n);
}

GridField mean_curvature(const AnalyticField& phi, const Grid& grid, int n) {
  auto c = PhiContext::from_analytic(phi, grid);
  n = default_n(grid.dims, n);
  if (grid.dims == 0) return GridField(0.0);
  return mean_curvature_from(c.grad, c.hess, n);
}

GridField gauss_curvature(const GridField& phi) {
  if (phi.grid().dims != 2) throw DimensionError("Gauss curvature needs tangential dimension 2");
  auto D = fd_derivatives(phi, 2);
  return gauss_from(D.grad, D.hess);
}

GridField gauss_curvature(const AnalyticField& phi, const Grid& grid) {
  if (grid.dims != 2) throw DimensionError("Gauss curvature needs tangential dimension 2");
  auto c = PhiContext::from_analytic(phi, grid);
  return gauss_from(c.grad, c.hess);
}

GridField willmore_residual(const GridField& phi) {
  if (phi.grid().dims != 2) throw DimensionError("Willmore residual needs tangential dimension 2");
  auto D = fd_derivatives(phi, 2);
  const auto& g = D.grad;
  const auto& hs = D.hess;
  GridField H = mean_curvature_from(g, hs, 3);
  GridField K = gauss_from(g, hs);
  auto DH = fd_derivatives(H, 2);
  GridField W2 = GridField(1.0) + g[0] * g[0] + g[1] * g[1];
  GridField lb(0.0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      GridField inv = (a == b ? GridField(1.0) : GridField(0.0)) - g[a] * g[b] / W2;
      GridField cov = DH.hess[a][b] - (g[0] * DH.grad[0] + g[1] * DH.grad[1]) * hs[a][b] / W2;
      lb += inv * cov;
    }
  return lb + 2.0 * H * (H * H - K);
}

PointGeometry analytic_geometry(const AnalyticField& phi, double y1, double y2, int dims, int n) {
  n = default_n(dims, n);
  PointGeometry out;
  if (dims == 0) return out;
  Jet f = phi.jet(y1, y2, dims, 4);
  std::vector<Jet> p;
  for (int a = 0; a < dims; ++a) p.push_back(f.derivative(a).truncated(2));
  std::vector<std::vector<Jet>> pp(dims, std::vector<Jet>(dims));
  for (int a = 0; a < dims; ++a)
    for (int b = 0; b < dims; ++b) pp[a][b] = f.derivative(a).derivative(b);
  Jet W2(2, 1.0);
  for (int a = 0; a < dims; ++a) W2 += p[a] * p[a];
  Jet lap(2, 0.0), quad(2, 0.0);
  for (int a = 0; a < dims; ++a) {
    lap += pp[a][a];
    for (int b = 0; b < dims; ++b) quad += p[a] * p[b] * pp[a][b];
  }
  Jet W = sqrt(W2);
  Jet H = (lap - quad / W2) / W * (1.0 / (n - 1));
  out.W = W.value();
  out.H = H.value();
  if (dims < 2) return out;
  const double w2 = W2.value();
  double g[2] = {p[0].value(), p[1].value()};
  double hs[2][2] = {{pp[0][0].value(), pp[0][1].value()}, {pp[1][0].value(), pp[1][1].value()}};
  out.K = (hs[0][0] * hs[1][1] - hs[0][1] * hs[1][0]) / (w2 * w2);
  double dH[2] = {H.partial(1, 0), H.partial(0, 1)};
  double ddH[2][2] = {{H.partial(2, 0), H.partial(1, 1)}, {H.partial(1, 1), H.partial(0, 2)}};
  double lb = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double inv = (a == b ? 1.0 : 0.0) - g[a] * g[b] / w2;
      double cov = ddH[a][b] - (g[0] * dH[0] + g[1] * dH[1]) * hs[a][b] / w2;
      lb += inv * cov;
    }
  out.willmore = lb + 2 * out.H * (out.H * out.H - out.K);
  return out;
}

GridField willmore_residual(const AnalyticField& phi, const Grid& grid) {
  if (grid.dims != 2) throw DimensionError("Willmore residual needs tangential dimension 2");
  return GridField::sample(grid, [&](double a, double b) { return analytic_geometry(phi, a, b, 2).willmore; });
}

}  // namespace hypexp
