#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "hypexp/errors.hpp"
#include "hypexp/geometry.hpp"
#include "test_util.hpp"

using namespace hypexp;

TEST_CASE("fd derivatives of a quadratic are exact") {
  Grid g = Grid::box(1, 1.0, 0.1);
  auto f = GridField::sample(g, [](double y, double) { return y * y; });
  auto d = fd_derivatives(f, 2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(std::abs(d.hess[0][0][k] - 2.0) < 1e-12);
    CHECK(std::abs(d.grad[0][k] - 2 * g.point(k)[0]) < 1e-12);
  }
}

TEST_CASE("fd derivatives of a 2-D quadratic, including the mixed term") {
  Grid g = Grid::box(2, 1.0, 0.125);
  auto f = GridField::sample(g, [](double a, double b) { return 1 + 2 * a - b + 0.5 * a * a + 3 * a * b - b * b; });
  auto d = fd_derivatives(f, 2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto p = g.point(k);
    CHECK(std::abs(d.grad[0][k] - (2 + p[0] + 3 * p[1])) < 1e-12);
    CHECK(std::abs(d.grad[1][k] - (-1 + 3 * p[0] - 2 * p[1])) < 1e-12);
    CHECK(std::abs(d.hess[0][0][k] - 1.0) < 1e-11);
    CHECK(std::abs(d.hess[0][1][k] - 3.0) < 1e-11);
    CHECK(std::abs(d.hess[1][1][k] + 2.0) < 1e-11);
  }
}

TEST_CASE("constant fields have zero derivatives") {
  auto d = fd_derivatives(GridField(3.0), 2, 2);
  REQUIRE(d.grad.size() == 2);
  CHECK(d.grad[0].sup_norm() == 0.0);
  CHECK(d.hess[1][0].sup_norm() == 0.0);
  Grid g = Grid::box(2, 1.0, 0.25);
  CHECK(fd_derivatives(GridField::zeros(g) + GridField(2.0), 1).grad[1].sup_norm() < 1e-14);
}

TEST_CASE("centered first derivative of sin converges at second order") {
  std::vector<double> hs, errs;
  for (double h : {0.1, 0.05, 0.025}) {
    Grid g = Grid::box(1, 1.0, h);
    auto d = fd_partial(GridField::sample(g, [](double y, double) { return std::sin(y); }), 0);
    double e = std::abs(d[g.index(int(g.n[0] / 2))] - 1.0);
    CHECK(e <= h * h / 6 * 1.01);
    hs.push_back(h);
    errs.push_back(e);
  }
  CHECK(testutil::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("small grids are rejected") {
  Grid g = Grid::box(1, 1.0, 0.7);
  CHECK_THROWS_AS(fd_partial(GridField::zeros(g), 0), ShapeError);
}

TEST_CASE("mean curvature") {
  Grid g = Grid::box(2, 0.5, 0.05);
  CHECK(mean_curvature(GridField::zeros(g)).sup_norm() == 0.0);
  Grid g1 = Grid::box(1, 0.5, 0.01);
  auto H1 = mean_curvature(AnalyticField::sphere_cap(1.0), g1, 2);
  CHECK(std::abs(H1[g1.index(50)] - 1.0) < 1e-13);
  auto H2 = mean_curvature(AnalyticField::sphere_cap(2.0), g, 3);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(H2[k] - 0.5) < 1e-12);
  auto Hfd = mean_curvature(AnalyticField::sphere_cap(2.0).sample(g), 3);
  CHECK((Hfd - H2).sup_norm_masked(0.5 - 2 * 0.05) < 1e-3);
}

TEST_CASE("mean curvature of the cap is grid-uniform to second order") {
  std::vector<double> hs, errs;
  for (double h : {0.04, 0.02, 0.01}) {
    Grid g = Grid::box(2, 0.4, h);
    auto H = mean_curvature(AnalyticField::sphere_cap(1.0).sample(g));
    double e = (H - GridField(1.0)).sup_norm();
    hs.push_back(h);
    errs.push_back(e);
  }
  CHECK(testutil::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Gauss curvature") {
  Grid g = Grid::box(2, 0.5, 0.05);
  CHECK(gauss_curvature(GridField::zeros(g)).sup_norm() == 0.0);
  auto K = gauss_curvature(AnalyticField::sphere_cap(2.0), g);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(K[k] - 0.25) < 1e-12);
  auto saddle = AnalyticField::polynomial({{2, 0, 0.5}, {0, 2, -0.5}});
  CHECK(gauss_curvature(saddle, g)[g.index(10, 10)] == doctest::Approx(-1.0));
  CHECK(gauss_curvature(saddle.sample(g))[g.index(10, 10)] == doctest::Approx(-1.0));
  CHECK_THROWS_AS(gauss_curvature(GridField::zeros(Grid::box(1, 0.5, 0.05))), DimensionError);
}

TEST_CASE("Willmore residual") {
  Grid g = Grid::box(2, 0.5, 0.05);
  CHECK(willmore_residual(GridField::zeros(g)).sup_norm() == 0.0);
  CHECK(willmore_residual(AnalyticField::sphere_cap(1.0), g).sup_norm() < 1e-12);
  CHECK_THROWS_AS(willmore_residual(GridField::zeros(Grid::box(1, 0.5, 0.05))), DimensionError);
}

TEST_CASE("Willmore residual of the cap vanishes at second order under refinement") {
  std::vector<double> hs, errs;
  for (double h : {0.04, 0.02, 0.01}) {
    Grid g = Grid::box(2, 0.4, h);
    auto w = willmore_residual(AnalyticField::sphere_cap(1.0).sample(g));
    hs.push_back(h);
    errs.push_back(w.sup_norm_masked(0.2));
  }
  CHECK(testutil::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Willmore residual is linear in a small perturbation") {
  // Linearization of the residual around the plane: W*residual ~ Delta^2(phi)/2.
  Grid g = Grid::box(2, 0.5, 0.01);
  std::vector<double> vals;
  for (double eps : {0.001, 0.002}) {
    auto w = willmore_residual(AnalyticField::trig(1.0, eps).sample(g));
    std::size_t k = g.index(80, 50);
    double y1 = g.point(k)[0];
    CHECK(w[k] == doctest::Approx(eps * std::sin(y1) / 2).epsilon(2e-3));
    vals.push_back(w[k]);
  }
  CHECK(vals[1] / vals[0] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("analytic and finite-difference geometry agree") {
  Grid g = Grid::box(2, 0.5, 0.01);
  auto phi = AnalyticField::trig(2.0, 0.3, 1.0);
  double m = 0.5 - 2 * 0.01;
  CHECK((willmore_residual(phi, g) - willmore_residual(phi.sample(g))).sup_norm_masked(m) < 2e-3);
  CHECK((mean_curvature(phi, g) - mean_curvature(phi.sample(g))).sup_norm_masked(m) < 1e-4);
}

TEST_CASE("analytic field parsing") {
  auto f = AnalyticField::parse("sphere_cap:R=2");
  CHECK(f.value(0.0) == 0.0);
  CHECK(AnalyticField::parse(f.spec()).value(1.0, 0.5) == f.value(1.0, 0.5));
  auto p = AnalyticField::parse("polynomial:a20=0.5,a11=2");
  CHECK(p.value(2.0, 3.0) == doctest::Approx(2.0 + 12.0));
  CHECK_THROWS_AS(AnalyticField::parse("ellipse:a=1"), ValidationError);
  CHECK_THROWS_AS(AnalyticField::parse("sphere_cap:R=1,S=2"), ValidationError);
  CHECK_THROWS_AS(AnalyticField::sphere_cap(1.0).value(1.0, 0.5), DomainError);
}

TEST_CASE("grid CSV round trip") {
  Grid g = Grid::box(2, 0.5, 0.125);
  auto f = AnalyticField::trig(1.0, 0.3, 2.0).sample(g);
  std::stringstream ss;
  write_csv(ss, f);
  auto back = read_csv(ss);
  CHECK(back.grid().n == g.n);
  CHECK((back - f).sup_norm() == 0.0);
}
