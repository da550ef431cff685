#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace hypexp {

/// Uniform tensor grid in the tangential variable. dims == 0 denotes a single
/// point, used by constant fields.
struct Grid {
  int dims = 0;
  std::array<int, 2> n{1, 1};
  std::array<double, 2> h{0.0, 0.0};
  std::array<double, 2> origin{0.0, 0.0};

  std::size_t size() const;
  std::size_t index(int i1, int i2 = 0) const { return dims == 2 ? std::size_t(i1) * n[1] + i2 : std::size_t(i1); }
  std::array<int, 2> multi_index(std::size_t idx) const;
  std::array<double, 2> point(std::size_t idx) const;
  double radius(std::size_t idx) const;

  /// Box [-r, r]^dims with spacing as close to h as the point count allows.
  static Grid box(int dims, double r, double h);

  bool operator==(const Grid&) const = default;
};

/// Scalar function of y' sampled on a Grid. Constant fields broadcast
/// against any grid.
class GridField {
 public:
  GridField() : values_{0.0} {}
  explicit GridField(double c) : values_{c} {}
  GridField(Grid grid, std::vector<double> values);

  static GridField sample(const Grid& grid, const std::function<double(double, double)>& f);
  static GridField zeros(const Grid& grid);

  const Grid& grid() const { return grid_; }
  bool is_constant() const { return grid_.dims == 0; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t idx) const { return is_constant() ? values_[0] : values_[idx]; }
  double& mutable_at(std::size_t idx) { return values_[idx]; }
  const std::vector<double>& values() const { return values_; }

  double sup_norm() const;
  double min() const;
  double max() const;
  /// Sup norm restricted to |y'| < rmax.
  double sup_norm_masked(double rmax) const;

  GridField map(const std::function<double(double)>& f) const;

  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  GridField& operator*=(const GridField& o);
  GridField& operator*=(double s);

  friend GridField operator+(const GridField& a, const GridField& b);
  friend GridField operator-(const GridField& a, const GridField& b);
  friend GridField operator*(const GridField& a, const GridField& b);
  friend GridField operator/(const GridField& a, const GridField& b);
  friend GridField operator*(double s, const GridField& a);
  friend GridField operator*(const GridField& a, double s) { return s * a; }
  friend GridField operator/(const GridField& a, double s) { return (1.0 / s) * a; }
  friend GridField operator-(const GridField& a) { return -1.0 * a; }

  /// Applies a binary operation with broadcasting; throws ShapeError on
  /// mismatched non-constant grids.
  static GridField zip(const GridField& a, const GridField& b, const std::function<double(double, double)>& op);

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Grid shared by a and b under broadcasting.
Grid common_grid(const Grid& a, const Grid& b);

struct FieldDerivatives {
  std::vector<GridField> grad;
  std::vector<std::vector<GridField>> hess;
};

/// First derivative along one axis.
GridField fd_partial(const GridField& f, int axis);
/// Pure second derivative along one axis.
GridField fd_second(const GridField& f, int axis);
/// Gradient (order 1) or gradient and Hessian (order 2). For constant fields
/// `dims` sets the number of (zero) components.
FieldDerivatives fd_derivatives(const GridField& f, int order, int dims = -1);
/// Flat Laplacian of f on its grid.
GridField fd_laplacian(const GridField& f);

void write_csv(std::ostream& os, const GridField& f);
GridField read_csv(std::istream& is);
GridField read_csv_file(const std::string& path);

}  // namespace hypexp
