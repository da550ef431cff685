#include "hypexp/pde_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "hypexp/errors.hpp"
#include "hypexp/remainder.hpp"

namespace hypexp {

DiscreteField hemisphere_exact(double R, const HalfStripMesh& mesh) {
  if (!(R > 0)) throw ValidationError("hemisphere radius must be positive");
  return DiscreteField::sample(mesh, [R](std::size_t, double a, double b, double t) {
    const double s = R * R - a * a - b * b - t * t;
    if (!(s > 0)) throw DomainError("mesh leaves the hemisphere |y'|^2 + t^2 < R^2");
    return R - std::sqrt(s);
  });
}

double node_residual(const NodeDerivatives& D, int dims, double t) {
  const int n = dims + 1;
  double W = 1, N = 0, lap = 0;
  for (int c = 0; c <= dims; ++c) {
    W += D.g[c] * D.g[c];
    lap += D.H[c][c];
    for (int d = 0; d <= dims; ++d) N += D.g[c] * D.g[d] * D.H[c][d];
  }
  return lap - N / W - n * D.g[dims] / t;
}

DiscreteField assemble_residual(const DiscreteField& u) {
  DiscreteField r(u.mesh);
  const auto& m = u.mesh;
  for (std::size_t k = 1; k + 1 < m.nt(); ++k)
    for (std::size_t y = 0; y < m.ny(); ++y)
      if (m.is_interior(y, k)) r.at(y, k) = node_residual(node_derivatives(u, y, k), m.dims(), m.t[k]);
  return r;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct System {
  const HalfStripMesh& m;
  std::vector<long> col;  // node -> unknown index or -1
  std::vector<std::size_t> nodes;

  explicit System(const HalfStripMesh& mesh) : m(mesh), col(mesh.size(), -1) {
    for (std::size_t k = 1; k + 1 < m.nt(); ++k)
      for (std::size_t y = 0; y < m.ny(); ++y)
        if (m.is_interior(y, k)) {
          col[m.node(y, k)] = long(nodes.size());
          nodes.push_back(m.node(y, k));
        }
  }

  // Weighted residual t^2 Q; also returns the largest 1 + |Du|^2.
  Eigen::VectorXd residual(const DiscreteField& u, double& maxW) const {
    Eigen::VectorXd r(nodes.size());
    maxW = 1;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const std::size_t y = nodes[q] % m.ny(), k = nodes[q] / m.ny();
      auto D = node_derivatives(u, y, k);
      double W = 1;
      for (int c = 0; c <= m.dims(); ++c) W += D.g[c] * D.g[c];
      maxW = std::max(maxW, W);
      r[q] = m.t[k] * m.t[k] * node_residual(D, m.dims(), m.t[k]);
    }
    return r;
  }

  SpMat jacobian(const DiscreteField& u) const {
    const int d = m.dims();
    const int n = d + 1;
    const double h = m.h();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nodes.size() * (d == 1 ? 13 : 27));
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const std::size_t y = nodes[q] % m.ny(), k = nodes[q] / m.ny();
      const double t = m.t[k], s = t * t;
      auto D = node_derivatives(u, y, k);
      double W = 1, N = 0;
      for (int c = 0; c <= d; ++c) {
        W += D.g[c] * D.g[c];
        for (int e = 0; e <= d; ++e) N += D.g[c] * D.g[e] * D.H[c][e];
      }
      std::array<double, 3> dg{};
      std::array<std::array<double, 3>, 3> dH{};
      for (int c = 0; c <= d; ++c) {
        double gh = 0;
        for (int e = 0; e <= d; ++e) gh += D.g[e] * D.H[c][e];
        dg[c] = -2 * gh / W + 2 * N * D.g[c] / (W * W);
        dH[c][c] = 1 - D.g[c] * D.g[c] / W;
        for (int e = c + 1; e <= d; ++e) dH[c][e] = -2 * D.g[c] * D.g[e] / W;
      }
      dg[d] -= n / t;
      auto add = [&](std::size_t yy, std::size_t kk, double w) {
        const long c = col[m.node(yy, kk)];
        if (c >= 0 && w != 0) trip.emplace_back(long(q), c, s * w);
      };
      auto tw = m.t_weights(k);
      for (int j = 0; j < 3; ++j) add(y, tw.rows[j], dg[d] * tw.d1[j] + dH[d][d] * tw.d2[j]);
      for (int a = 0; a < d; ++a) {
        const std::size_t yp = m.shift(y, a, 1), ym = m.shift(y, a, -1);
        add(yp, k, dg[a] / (2 * h) + dH[a][a] / (h * h));
        add(ym, k, -dg[a] / (2 * h) + dH[a][a] / (h * h));
        add(y, k, -2 * dH[a][a] / (h * h));
        for (int j = 0; j < 3; ++j) {
          add(yp, tw.rows[j], dH[a][d] * tw.d1[j] / (2 * h));
          add(ym, tw.rows[j], -dH[a][d] * tw.d1[j] / (2 * h));
        }
        for (int b = a + 1; b < d; ++b) {
          const double w = dH[a][b] / (4 * h * h);
          add(m.shift(yp, b, 1), k, w);
          add(m.shift(yp, b, -1), k, -w);
          add(m.shift(ym, b, 1), k, -w);
          add(m.shift(ym, b, -1), k, w);
        }
      }
    }
    SpMat J(long(nodes.size()), long(nodes.size()));
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
  }
};

double sup(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

SolveResult newton_solve(const HalfStripMesh& mesh, const GridField& phi, const LateralBC& bc,
                         const SolverConfig& config, const std::optional<LogPolynomial>& initial_guess) {
  const int d = mesh.dims();
  if (d < 1 || d > 2) throw ValidationError("the solver supports n = 2 and n = 3 only");
  if (!(config.newton_tol > 0)) throw ValidationError("newton_tol must be positive");
  if (!(config.lambda > 0)) throw ValidationError("ellipticity floor must be positive");
  if (config.max_iters < 0) throw ValidationError("max_iters must be non-negative");
  const int n = d + 1;
  GridField phi_grid = phi.is_constant() ? GridField::zeros(mesh.tangential) + phi : phi;
  if (!(phi_grid.grid() == mesh.tangential)) throw ShapeError("boundary data grid does not match the mesh");
  LogPolynomial guess;
  if (initial_guess) {
    guess = *initial_guess;
  } else {
    auto ctx = PhiContext::from_grid(phi_grid);
    guess = compute_local_coeffs(ctx, n, n % 2 == 0 ? n : n - 1).full();
  }
  DiscreteField u(mesh);
  for (std::size_t k = 0; k < mesh.nt(); ++k)
    for (std::size_t y = 0; y < mesh.ny(); ++y) {
      const double t = mesh.t[k];
      double v;
      if (k == 0) {
        v = phi_grid[y];
      } else if (mesh.is_interior(y, k)) {
        v = lp_eval(guess, t, guess.grid().dims == 0 ? 0 : y);
      } else if (bc.kind == LateralBC::Kind::Oracle) {
        auto p = mesh.tangential.point(y);
        const double s = bc.R * bc.R - p[0] * p[0] - p[1] * p[1] - t * t;
        if (!(s > 0)) throw DomainError("mesh leaves the hemisphere |y'|^2 + t^2 < R^2");
        v = bc.R - std::sqrt(s);
      } else {
        v = lp_eval(bc.uk, t, bc.uk.grid().dims == 0 ? 0 : y);
      }
      u.at(y, k) = v;
    }

  System sys(mesh);
  SolveResult res;
  double maxW = 1;
  Eigen::VectorXd r = sys.residual(u, maxW);
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  for (int it = 0;; ++it) {
    if (maxW > config.lambda) throw NumericalFailure("ellipticity floor violated: 1 + |Du|^2 = " + std::to_string(maxW));
    const double norm = sup(r);
    res.history.push_back(norm);
    if (!std::isfinite(norm)) throw NumericalFailure("Newton residual is not finite");
    if (norm <= config.newton_tol) {
      res.iterations = it;
      res.u = std::move(u);
      return res;
    }
    if (it >= config.max_iters)
      throw NumericalFailure("Newton did not converge in " + std::to_string(config.max_iters) +
                             " iterations (residual " + std::to_string(norm) + ")");
    SpMat J = sys.jacobian(u);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw NumericalFailure("singular Newton Jacobian");
    Eigen::VectorXd delta = lu.solve(-r);
    double step = 1;
    for (int halvings = 0;; ++halvings) {
      DiscreteField trial = u;
      for (std::size_t q = 0; q < sys.nodes.size(); ++q) trial.values[sys.nodes[q]] += step * delta[long(q)];
      double trialW = 1;
      Eigen::VectorXd rt = sys.residual(trial, trialW);
      if (!config.damping || sup(rt) < norm) {
        u = std::move(trial);
        r = std::move(rt);
        maxW = trialW;
        break;
      }
      if (halvings >= 20) throw NumericalFailure("line search failed after 20 step halvings");
      step *= 0.5;
    }
  }
}

Barrier quadratic_barrier(double a, double b) {
  Barrier w;
  w.name = "quadratic";
  w.eval = [a, b](double y1, double y2, double t, double& v, std::array<double, 3>& g,
                  std::array<std::array<double, 3>, 3>& H) {
    v = a * (y1 * y1 + y2 * y2) + b * t * t;
    g = {2 * a * y1, 2 * a * y2, 2 * b * t};
    H = {};
    H[0][0] = H[1][1] = 2 * a;
    H[2][2] = 2 * b;
  };
  return w;
}

Barrier power_barrier(double A, double q, int n) {
  Barrier w;
  w.name = "power";
  w.eval = [A, q, n](double y1, double y2, double t, double& v, std::array<double, 3>& g,
                     std::array<std::array<double, 3>, 3>& H) {
    const double s = y1 * y1 + y2 * y2 + t;
    const double p = n + 1;
    // w = A f(s) with f = s^p - s^q; ds = (2y1, 2y2, 1).
    const double f = std::pow(s, p) - std::pow(s, q);
    const double f1 = p * std::pow(s, p - 1) - q * std::pow(s, q - 1);
    const double f2 = p * (p - 1) * std::pow(s, p - 2) - q * (q - 1) * std::pow(s, q - 2);
    const std::array<double, 3> ds{2 * y1, 2 * y2, 1};
    v = A * f;
    for (int c = 0; c < 3; ++c) {
      g[c] = A * f1 * ds[c];
      for (int e = 0; e < 3; ++e) H[c][e] = A * f2 * ds[c] * ds[e];
    }
    H[0][0] += 2 * A * f1;
    H[1][1] += 2 * A * f1;
  };
  return w;
}

BarrierReport barrier_check(const Barrier& w, const DiscreteField& u, double region, bool check_boundary) {
  const auto& m = u.mesh;
  const int d = m.dims();
  const int n = d + 1;
  BarrierReport rep;
  rep.check_boundary = check_boundary;
  rep.max_Lw = -std::numeric_limits<double>::infinity();
  rep.min_boundary_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m.nt(); ++k)
    for (std::size_t y = 0; y < m.ny(); ++y) {
      auto p = m.tangential.point(y);
      const double t = m.t[k];
      const double s = p[0] * p[0] + p[1] * p[1] + t;
      if (region > 0 && s >= region) continue;
      double v;
      std::array<double, 3> g3;
      std::array<std::array<double, 3>, 3> H3;
      w.eval(p[0], d == 2 ? p[1] : 0.0, t, v, g3, H3);
      // Map (y1, y2, t) components onto the mesh's coordinate order.
      std::array<int, 3> map{0, 1, 2};
      if (d == 1) map = {0, 2, 2};
      if (m.is_interior(y, k)) {
        auto D = node_derivatives(u, y, k);
        double W = 1;
        for (int c = 0; c <= d; ++c) W += D.g[c] * D.g[c];
        double Lw = -n * g3[2] / t;
        for (int c = 0; c <= d; ++c)
          for (int e = 0; e <= d; ++e) {
            const double A = (c == e ? 1.0 : 0.0) - D.g[c] * D.g[e] / W;
            const int cc = c == d ? 2 : map[c], ee = e == d ? 2 : map[e];
            Lw += A * H3[cc][ee];
          }
        ++rep.nodes;
        if (Lw < 0) ++rep.negative;
        rep.max_Lw = std::max(rep.max_Lw, Lw);
      } else if (k > 0 && check_boundary) {
        const double gap = v - std::abs(u(y, k) - u(y, 0));
        rep.min_boundary_gap = std::min(rep.min_boundary_gap, gap);
        if (gap < 0) ++rep.boundary_violations;
      }
    }
  rep.pass = rep.nodes > 0 && rep.negative == rep.nodes && (!check_boundary || rep.boundary_violations == 0);
  return rep;
}

BarrierReport barrier_check(double a, double b, const DiscreteField& u) {
  auto rep = barrier_check(quadratic_barrier(a, b), u);
  const int n = u.mesh.dims() + 1;
  rep.bound_direct = 2.0 * (n - 1) * a + 2.0 * (1 - n) * b;
  rep.bound_printed = 2.0 * (1 - n) * b + (n - 1) * a;
  return rep;
}

DecayReport decay_check(const DiscreteField& u, const std::optional<LogPolynomial>& u_star, double mask,
                        double t_max) {
  const auto& m = u.mesh;
  const int d = m.dims();
  const int n = d + 1;
  if (mask <= 0) mask = m.r / 2;
  if (t_max <= 0) t_max = m.r / 2;
  const double noise = 1e-13 * std::max(1.0, u.sup_norm());
  std::vector<std::string> names{"|u-phi|/t^2", "|D(u-phi)|/t"};
  if (u_star) names.push_back("|u-u_*|/t^" + std::to_string(n + 1));
  std::vector<std::vector<double>> ts(names.size()), rs(names.size());
  for (std::size_t k = 1; k + 1 < m.nt(); ++k) {
    const double t = m.t[k];
    if (t > t_max) break;
    std::vector<double> num(names.size(), 0.0);
    std::vector<double> floor(names.size(), noise);
    auto tw = m.t_weights(k);
    floor[1] = noise * (std::abs(tw.d1[0]) + std::abs(tw.d1[1]) + std::abs(tw.d1[2]) + 1 / m.h());
    for (std::size_t y = 0; y < m.ny(); ++y) {
      if (m.tangential.radius(y) >= mask || m.on_lateral(y)) continue;
      const double v = u(y, k) - u(y, 0);
      num[0] = std::max(num[0], std::abs(v));
      double g2 = 0;
      for (int a = 0; a < d; ++a) {
        const std::size_t yp = m.shift(y, a, 1), ym = m.shift(y, a, -1);
        const double ga = ((u(yp, k) - u(yp, 0)) - (u(ym, k) - u(ym, 0))) / (2 * m.h());
        g2 += ga * ga;
      }
      const double gt = dt_derivative(u, y, k, 1);
      num[1] = std::max(num[1], std::sqrt(g2 + gt * gt));
      if (u_star) {
        const std::size_t yi = u_star->grid().dims == 0 ? 0 : y;
        num[2] = std::max(num[2], std::abs(u(y, k) - lp_eval(*u_star, t, yi)));
      }
    }
    const double den[3] = {t * t, t, std::pow(t, n + 1)};
    for (std::size_t q = 0; q < names.size(); ++q) {
      if (num[q] <= 10 * floor[q]) continue;
      ts[q].push_back(t);
      rs[q].push_back(num[q] / den[q]);
    }
  }
  DecayReport rep;
  rep.pass = true;
  for (std::size_t q = 0; q < names.size(); ++q) {
    DecayRatio r;
    r.name = names[q];
    r.levels = ts[q].size();
    for (double v : rs[q]) r.max_ratio = std::max(r.max_ratio, v);
    r.slope = ts[q].size() >= 3 ? log_log_slope(ts[q], rs[q]) : 0.0;
    r.pass = r.slope >= -0.1;
    rep.pass = rep.pass && r.pass;
    rep.ratios.push_back(r);
  }
  return rep;
}

}  // namespace hypexp
