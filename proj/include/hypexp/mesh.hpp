#pragma once

#include <array>
#include <functional>
#include <vector>

#include "hypexp/grid_field.hpp"

namespace hypexp {

/// Tensor mesh on [-r, r]^dims x [0, r]: a uniform tangential grid and graded
/// normal nodes t = 0, t_{j_min}, ..., t_M with t_j = r (j / M)^gamma.
struct HalfStripMesh {
  Grid tangential;
  std::vector<double> t;
  double r = 0;
  double gamma = 2;
  int M = 0;
  int j_min = 1;

  static HalfStripMesh make(int dims, double r, double h, int M, double gamma = 2.0, int j_min = 1);

  int dims() const { return tangential.dims; }
  std::size_t ny() const { return tangential.size(); }
  std::size_t nt() const { return t.size(); }
  std::size_t size() const { return ny() * nt(); }
  std::size_t node(std::size_t y, std::size_t k) const { return k * ny() + y; }
  double t_min() const { return t[1]; }
  double h() const { return tangential.h[0]; }
  /// True on the tangential box faces.
  bool on_lateral(std::size_t y) const;
  /// Interior nodes carry the equation: rows 1..nt-2 away from lateral faces.
  bool is_interior(std::size_t y, std::size_t k) const { return k >= 1 && k + 1 < nt() && !on_lateral(y); }
  /// Three-point weights for d/dt and d2/dt2 at row k (one-sided at the ends).
  struct TWeights {
    std::array<int, 3> rows;
    std::array<double, 3> d1;
    std::array<double, 3> d2;
  };
  TWeights t_weights(std::size_t k) const;
  /// Neighbour of y shifted by s along axis.
  std::size_t shift(std::size_t y, int axis, int s) const;
};

/// Values on the nodes of a HalfStripMesh.
struct DiscreteField {
  HalfStripMesh mesh;
  std::vector<double> values;

  DiscreteField() = default;
  explicit DiscreteField(const HalfStripMesh& m, double v = 0.0) : mesh(m), values(m.size(), v) {}
  static DiscreteField sample(const HalfStripMesh& m,
                              const std::function<double(std::size_t y, double y1, double y2, double t)>& f);

  double operator()(std::size_t y, std::size_t k) const { return values[mesh.node(y, k)]; }
  double& at(std::size_t y, std::size_t k) { return values[mesh.node(y, k)]; }
  GridField row(std::size_t k) const;
  double sup_norm() const;

  friend DiscreteField operator-(const DiscreteField& a, const DiscreteField& b);
};

/// Finite-difference derivatives of a DiscreteField at a node: index d
/// (= dims) is the normal direction. Tangential differences are centered
/// and need a non-lateral node.
struct NodeDerivatives {
  std::array<double, 3> g{0, 0, 0};
  std::array<std::array<double, 3>, 3> H{};
};
NodeDerivatives node_derivatives(const DiscreteField& u, std::size_t y, std::size_t k);

/// d_t^m of u at (y, k) by three-point differences, m in {0, 1, 2}.
double dt_derivative(const DiscreteField& u, std::size_t y, std::size_t k, int m);

}  // namespace hypexp
