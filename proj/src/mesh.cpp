#include "hypexp/mesh.hpp"

#include <cmath>

#include "hypexp/errors.hpp"

namespace hypexp {

HalfStripMesh HalfStripMesh::make(int dims, double r, double h, int M, double gamma, int j_min) {
  if (!(r > 0)) throw ValidationError("mesh radius must be positive");
  if (!(gamma >= 1)) throw ValidationError("grading exponent must be at least 1");
  if (M < 3 || j_min < 1 || j_min > M - 2) throw ValidationError("need M >= 3 and 1 <= j_min <= M - 2");
  HalfStripMesh m;
  m.tangential = Grid::box(dims, r, h);
  m.r = r;
  m.gamma = gamma;
  m.M = M;
  m.j_min = j_min;
  m.t.push_back(0.0);
  for (int j = j_min; j <= M; ++j) m.t.push_back(r * std::pow(double(j) / M, gamma));
  return m;
}

bool HalfStripMesh::on_lateral(std::size_t y) const {
  auto mi = tangential.multi_index(y);
  for (int a = 0; a < dims(); ++a)
    if (mi[a] == 0 || mi[a] == tangential.n[a] - 1) return true;
  return false;
}

std::size_t HalfStripMesh::shift(std::size_t y, int axis, int s) const {
  auto mi = tangential.multi_index(y);
  mi[axis] += s;
  return tangential.index(mi[0], mi[1]);
}

HalfStripMesh::TWeights HalfStripMesh::t_weights(std::size_t k) const {
  TWeights w;
  const int last = int(nt()) - 1;
  int c = int(k);
  if (c == 0) c = 1;
  if (c == last) c = last - 1;
  w.rows = {c - 1, c, c + 1};
  const double x = t[k];
  const double x0 = t[c - 1], x1 = t[c], x2 = t[c + 1];
  // Lagrange basis derivatives evaluated at x.
  w.d1 = {((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2)), ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2)),
          ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1))};
  w.d2 = {2 / ((x0 - x1) * (x0 - x2)), 2 / ((x1 - x0) * (x1 - x2)), 2 / ((x2 - x0) * (x2 - x1))};
  return w;
}

DiscreteField DiscreteField::sample(const HalfStripMesh& m,
                                    const std::function<double(std::size_t, double, double, double)>& f) {
  DiscreteField u(m);
  for (std::size_t k = 0; k < m.nt(); ++k)
    for (std::size_t y = 0; y < m.ny(); ++y) {
      auto p = m.tangential.point(y);
      u.at(y, k) = f(y, p[0], p[1], m.t[k]);
    }
  return u;
}

GridField DiscreteField::row(std::size_t k) const {
  std::vector<double> v(mesh.ny());
  for (std::size_t y = 0; y < v.size(); ++y) v[y] = (*this)(y, k);
  return GridField(mesh.tangential, std::move(v));
}

double DiscreteField::sup_norm() const {
  double s = 0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

DiscreteField operator-(const DiscreteField& a, const DiscreteField& b) {
  if (a.values.size() != b.values.size()) throw ShapeError("discrete fields live on different meshes");
  DiscreteField d = a;
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
  return d;
}

double dt_derivative(const DiscreteField& u, std::size_t y, std::size_t k, int m) {
  if (m < 0 || m > 2) throw OrderError("normal derivatives beyond order 2 are not supported");
  if (m == 0) return u(y, k);
  auto w = u.mesh.t_weights(k);
  double s = 0;
  for (int q = 0; q < 3; ++q) s += (m == 1 ? w.d1[q] : w.d2[q]) * u(y, w.rows[q]);
  return s;
}

NodeDerivatives node_derivatives(const DiscreteField& u, std::size_t y, std::size_t k) {
  const auto& m = u.mesh;
  const int d = m.dims();
  NodeDerivatives D;
  auto w = m.t_weights(k);
  for (int q = 0; q < 3; ++q) {
    D.g[d] += w.d1[q] * u(y, w.rows[q]);
    D.H[d][d] += w.d2[q] * u(y, w.rows[q]);
  }
  const double h = m.h();
  for (int a = 0; a < d; ++a) {
    const std::size_t yp = m.shift(y, a, 1), ym = m.shift(y, a, -1);
    D.g[a] = (u(yp, k) - u(ym, k)) / (2 * h);
    D.H[a][a] = (u(yp, k) - 2 * u(y, k) + u(ym, k)) / (h * h);
    double s = 0;
    for (int q = 0; q < 3; ++q) s += w.d1[q] * (u(yp, w.rows[q]) - u(ym, w.rows[q]));
    D.H[a][d] = D.H[d][a] = s / (2 * h);
    for (int b = a + 1; b < d; ++b) {
      const double v = u(m.shift(yp, b, 1), k) - u(m.shift(yp, b, -1), k) - u(m.shift(ym, b, 1), k) +
                       u(m.shift(ym, b, -1), k);
      D.H[a][b] = D.H[b][a] = v / (4 * h * h);
    }
  }
  return D;
}

}  // namespace hypexp
