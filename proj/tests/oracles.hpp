#pragma once

// Independent reference data used by the tests: the hemisphere Taylor series
// with exact tangential derivatives, and the closed-form c_2.

#include <cmath>
#include <vector>

#include "hypexp/expansion.hpp"
#include "hypexp/jet.hpp"

namespace oracle {

using namespace hypexp;

// sqrt(1 - x) = 1 - sum_m b_m x^m.
inline double sqrt_series_coeff(int m) {
  double binom = 1;
  for (int k = 1; k <= m; ++k) binom = binom * (m + k) / k;
  return binom / ((2 * m - 1) * std::pow(4.0, m));
}

// Coefficient of t^(2m) in R - sqrt(R^2 - |y'|^2 - t^2), m >= 1.
inline double hemisphere_coeff(int m, double rho) { return sqrt_series_coeff(m) * std::pow(rho, 1 - 2 * m); }

inline Jet hemisphere_coeff_jet(int m, double R, double y1, double y2, int dims) {
  Jet x = Jet::variable(2, 0, y1);
  Jet y = dims == 2 ? Jet::variable(2, 1, y2) : Jet(2, 0.0);
  Jet rho = sqrt(R * R - x * x - y * y);
  Jet inv = recip(rho);
  Jet c(2, sqrt_series_coeff(m));
  c = c * rho;
  for (int k = 0; k < 2 * m; ++k) c = c * inv;
  return c;
}

// u - phi for the hemisphere through t^K (even powers only).
inline LogPolynomial hemisphere_terms(double R, const Grid& g, int K) {
  LogPolynomial p;
  for (int m = 1; 2 * m <= K; ++m)
    p.add_term(2 * m, 0, GridField::sample(g, [&](double a, double b) {
                 return hemisphere_coeff(m, std::sqrt(R * R - a * a - b * b));
               }));
  return p;
}

// Exact tangential derivatives of hemisphere_terms, ignoring the FD route.
inline CoefficientDerivatives hemisphere_derivatives(double R, const Grid& g) {
  return [R, g](const LogPolynomial& w, int dims) {
    TangentialDerivs out;
    out.d1.assign(dims, LogPolynomial());
    out.d2.assign(dims, std::vector<LogPolynomial>(dims));
    for (auto& [key, c] : w.terms()) {
      if (key.j != 0 || key.i % 2 != 0 || key.i < 2) continue;
      const int m = key.i / 2;
      std::vector<double> d1[2], d2[2][2];
      for (int a = 0; a < dims; ++a) {
        d1[a].resize(g.size());
        for (int b = 0; b < dims; ++b) d2[a][b].resize(g.size());
      }
      for (std::size_t k = 0; k < g.size(); ++k) {
        auto p = g.point(k);
        Jet J = hemisphere_coeff_jet(m, R, p[0], p[1], dims);
        for (int a = 0; a < dims; ++a) {
          d1[a][k] = J.partial(a == 0, a == 1);
          for (int b = 0; b < dims; ++b) d2[a][b][k] = J.partial((a == 0) + (b == 0), (a == 1) + (b == 1));
        }
      }
      for (int a = 0; a < dims; ++a) {
        out.d1[a].add_term(key.i, 0, GridField(g, d1[a]));
        for (int b = 0; b < dims; ++b) out.d2[a][b].add_term(key.i, 0, GridField(g, d2[a][b]));
      }
    }
    return out;
  };
}

// c_2 = (Lap phi - phi_a phi_b phi_ab / W^2) / (2(n - 1)).
inline GridField c2_formula(const PhiContext& ctx, int n) {
  GridField W2(1.0), lap(0.0), quad(0.0);
  for (int a = 0; a < ctx.dims; ++a) {
    W2 = W2 + ctx.grad[a] * ctx.grad[a];
    lap = lap + ctx.hess[a][a];
    for (int b = 0; b < ctx.dims; ++b) quad = quad + ctx.grad[a] * ctx.grad[b] * ctx.hess[a][b];
  }
  return (lap - quad / W2) / double(2 * (n - 1));
}

}  // namespace oracle
