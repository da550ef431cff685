#include "hypexp/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "hypexp/errors.hpp"
#include "hypexp/format.hpp"

namespace hypexp {

std::size_t Grid::size() const {
  if (dims == 0) return 1;
  if (dims == 1) return std::size_t(n[0]);
  return std::size_t(n[0]) * n[1];
}

std::array<int, 2> Grid::multi_index(std::size_t idx) const {
  if (dims == 2) return {int(idx / n[1]), int(idx % n[1])};
  return {int(idx), 0};
}

std::array<double, 2> Grid::point(std::size_t idx) const {
  if (dims == 0) return {0.0, 0.0};
  auto m = multi_index(idx);
  std::array<double, 2> p{origin[0] + m[0] * h[0], 0.0};
  if (dims == 2) p[1] = origin[1] + m[1] * h[1];
  return p;
}

double Grid::radius(std::size_t idx) const {
  auto p = point(idx);
  return std::hypot(p[0], p[1]);
}

Grid Grid::box(int dims, double r, double h) {
  if (dims < 1 || dims > 2) throw DimensionError("grid dimension must be 1 or 2");
  if (!(r > 0) || !(h > 0)) throw ShapeError("grid radius and spacing must be positive");
  int cells = std::max(1, int(std::lround(2 * r / h)));
  Grid g;
  g.dims = dims;
  for (int a = 0; a < dims; ++a) {
    g.n[a] = cells + 1;
    g.h[a] = 2 * r / cells;
    g.origin[a] = -r;
  }
  return g;
}

GridField::GridField(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw ShapeError("value count does not match grid");
  for (int a = 0; a < grid_.dims; ++a)
    if (!(grid_.h[a] > 0)) throw ShapeError("grid spacing must be positive");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("grid field values must be finite");
}

GridField GridField::sample(const Grid& grid, const std::function<double(double, double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    auto p = grid.point(k);
    v[k] = f(p[0], p[1]);
  }
  return GridField(grid, std::move(v));
}

GridField GridField::zeros(const Grid& grid) { return GridField(grid, std::vector<double>(grid.size(), 0.0)); }

double GridField::sup_norm() const {
  double m = 0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double GridField::sup_norm_masked(double rmax) const {
  if (is_constant()) return std::abs(values_[0]);
  double m = 0;
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (grid_.radius(k) < rmax) m = std::max(m, std::abs(values_[k]));
  return m;
}

GridField GridField::map(const std::function<double(double)>& f) const {
  GridField out = *this;
  for (double& v : out.values_) v = f(v);
  return out;
}

Grid common_grid(const Grid& a, const Grid& b) {
  if (a.dims == 0) return b;
  if (b.dims == 0) return a;
  if (!(a == b)) throw ShapeError("coefficient grids do not match");
  return a;
}

GridField GridField::zip(const GridField& a, const GridField& b, const std::function<double(double, double)>& op) {
  Grid g = common_grid(a.grid_, b.grid_);
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = op(a[k], b[k]);
  GridField out;
  out.grid_ = g;
  out.values_ = std::move(v);
  return out;
}

GridField& GridField::operator+=(const GridField& o) { return *this = *this + o; }
GridField& GridField::operator-=(const GridField& o) { return *this = *this - o; }
GridField& GridField::operator*=(const GridField& o) { return *this = *this * o; }
GridField& GridField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

GridField operator+(const GridField& a, const GridField& b) {
  return GridField::zip(a, b, [](double x, double y) { return x + y; });
}
GridField operator-(const GridField& a, const GridField& b) {
  return GridField::zip(a, b, [](double x, double y) { return x - y; });
}
GridField operator*(const GridField& a, const GridField& b) {
  return GridField::zip(a, b, [](double x, double y) { return x * y; });
}
GridField operator/(const GridField& a, const GridField& b) {
  return GridField::zip(a, b, [](double x, double y) { return x / y; });
}
GridField operator*(double s, const GridField& a) {
  GridField out = a;
  out *= s;
  return out;
}

namespace {

void check_stencil_grid(const Grid& g, int axis) {
  if (axis < 0 || axis >= g.dims) throw DimensionError("derivative axis out of range");
  if (g.n[axis] < 5) throw ShapeError("finite differences need at least 5 points per axis");
}

// Applies a 1-D operator along `axis` for every line of the grid.
template <class LineOp>
GridField along_axis(const GridField& f, int axis, LineOp op) {
  const Grid& g = f.grid();
  check_stencil_grid(g, axis);
  std::vector<double> out(g.size());
  const int len = g.n[axis];
  const int other = g.dims == 2 ? g.n[1 - axis] : 1;
  std::vector<double> line(len), res(len);
  for (int o = 0; o < other; ++o) {
    auto idx = [&](int k) {
      if (g.dims == 1) return g.index(k);
      return axis == 0 ? g.index(k, o) : g.index(o, k);
    };
    for (int k = 0; k < len; ++k) line[k] = f[idx(k)];
    op(line, res, g.h[axis]);
    for (int k = 0; k < len; ++k) out[idx(k)] = res[k];
  }
  return GridField(g, std::move(out));
}

void d1_line(const std::vector<double>& f, std::vector<double>& d, double h) {
  const int n = int(f.size());
  d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
  for (int k = 1; k < n - 1; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2 * h);
}

void d2_line(const std::vector<double>& f, std::vector<double>& d, double h) {
  const int n = int(f.size());
  const double h2 = h * h;
  d[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h2;
  d[n - 1] = (2 * f[n - 1] - 5 * f[n - 2] + 4 * f[n - 3] - f[n - 4]) / h2;
  for (int k = 1; k < n - 1; ++k) d[k] = (f[k + 1] - 2 * f[k] + f[k - 1]) / h2;
}

}  // namespace

GridField fd_partial(const GridField& f, int axis) {
  if (f.is_constant()) return GridField(0.0);
  return along_axis(f, axis, d1_line);
}

GridField fd_second(const GridField& f, int axis) {
  if (f.is_constant()) return GridField(0.0);
  return along_axis(f, axis, d2_line);
}

FieldDerivatives fd_derivatives(const GridField& f, int order, int dims) {
  if (order < 1 || order > 2) throw OrderError("fd_derivatives supports order 1 or 2");
  const int d = f.is_constant() ? std::max(dims, 0) : f.grid().dims;
  if (!f.is_constant() && dims >= 0 && dims != d) throw DimensionError("requested dimension does not match grid");
  FieldDerivatives out;
  out.grad.resize(d, GridField(0.0));
  if (order == 2) out.hess.assign(d, std::vector<GridField>(d, GridField(0.0)));
  if (f.is_constant()) return out;
  for (int a = 0; a < d; ++a) out.grad[a] = fd_partial(f, a);
  if (order == 2) {
    for (int a = 0; a < d; ++a) {
      out.hess[a][a] = fd_second(f, a);
      for (int b = a + 1; b < d; ++b) {
        out.hess[a][b] = fd_partial(out.grad[a], b);
        out.hess[b][a] = out.hess[a][b];
      }
    }
  }
  return out;
}

GridField fd_laplacian(const GridField& f) {
  if (f.is_constant()) return GridField(0.0);
  GridField lap = fd_second(f, 0);
  for (int a = 1; a < f.grid().dims; ++a) lap += fd_second(f, a);
  return lap;
}

void write_csv(std::ostream& os, const GridField& f) {
  const Grid& g = f.grid();
  if (g.dims == 2)
    os << "y1,y2,value\n";
  else
    os << "y1,value\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    auto p = g.point(k);
    os << fmt17(p[0]) << ',';
    if (g.dims == 2) os << fmt17(p[1]) << ',';
    os << fmt17(f[k]) << '\n';
  }
}

GridField read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty grid CSV");
  int dims;
  if (line.rfind("y1,y2,value", 0) == 0)
    dims = 2;
  else if (line.rfind("y1,value", 0) == 0)
    dims = 1;
  else
    throw ValidationError("grid CSV header must be y1[,y2],value");
  std::vector<std::array<double, 3>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::array<double, 3> r{0, 0, 0};
    std::string cell;
    for (int c = 0; c <= dims; ++c) {
      if (!std::getline(ss, cell, ',')) throw ValidationError("short row in grid CSV");
      try {
        r[dims == 2 ? c : (c == 0 ? 0 : 2)] = std::stod(cell);
      } catch (const std::exception&) {
        throw ValidationError("non-numeric cell in grid CSV: " + cell);
      }
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw ValidationError("grid CSV has no data rows");
  Grid g;
  g.dims = dims;
  for (int a = 0; a < dims; ++a) {
    std::map<double, int> uniq;
    for (auto& r : rows) uniq[r[a]] = 0;
    g.n[a] = int(uniq.size());
    g.origin[a] = uniq.begin()->first;
    if (g.n[a] < 2) throw ShapeError("grid CSV needs at least two points per axis");
    g.h[a] = (uniq.rbegin()->first - g.origin[a]) / (g.n[a] - 1);
  }
  if (rows.size() != g.size()) throw ShapeError("grid CSV is not a full tensor grid");
  std::vector<double> v(g.size());
  for (auto& r : rows) {
    int i1 = int(std::lround((r[0] - g.origin[0]) / g.h[0]));
    int i2 = dims == 2 ? int(std::lround((r[1] - g.origin[1]) / g.h[1])) : 0;
    v[g.index(i1, i2)] = r[2];
  }
  return GridField(g, std::move(v));
}

GridField read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open grid CSV: " + path);
  return read_csv(in);
}

}  // namespace hypexp
