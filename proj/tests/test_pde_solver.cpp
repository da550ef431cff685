#include "doctest.h"

#include <cmath>
#include <vector>

#include "hypexp/analytic_field.hpp"
#include "hypexp/errors.hpp"
#include "hypexp/pde_solver.hpp"
#include "test_util.hpp"

using namespace hypexp;

namespace {

HalfStripMesh strip(double R, int M, int dims = 1) { return HalfStripMesh::make(dims, 0.3 * R, 0.6 * R / M, M, 2.0); }

double sup_interior(const DiscreteField& f) {
  double s = 0;
  for (std::size_t k = 0; k < f.mesh.nt(); ++k)
    for (std::size_t y = 0; y < f.mesh.ny(); ++y)
      if (f.mesh.is_interior(y, k)) s = std::max(s, std::abs(f(y, k)));
  return s;
}

SolveResult solve_hemisphere(double R, int M, int dims = 1) {
  auto mesh = strip(R, M, dims);
  SolverConfig cfg;
  cfg.newton_tol = 1e-12;
  return newton_solve(mesh, AnalyticField::sphere_cap(R).sample(mesh.tangential), LateralBC::oracle(R), cfg);
}

}  // namespace

TEST_CASE("hemisphere oracle values") {
  auto mesh = HalfStripMesh::make(1, 0.6, 0.3, 4, 1.0);
  auto u = hemisphere_exact(1.0, mesh);
  const std::size_t mid = mesh.ny() / 2;
  CHECK(mesh.tangential.point(mid)[0] == doctest::Approx(0.0));
  CHECK(mesh.t.back() == doctest::Approx(0.6));
  CHECK(u(mid, mesh.nt() - 1) == doctest::Approx(0.2).epsilon(1e-14));
  for (std::size_t y = 0; y < mesh.ny(); ++y) {
    const double y1 = mesh.tangential.point(y)[0];
    CHECK(u(y, 0) == doctest::Approx(1 - std::sqrt(1 - y1 * y1)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(hemisphere_exact(0.5, mesh), DomainError);
}

TEST_CASE("discrete residual of the hemisphere is second order") {
  for (int dims : {1, 2}) {
    std::vector<double> hs, res;
    for (int M : dims == 1 ? std::vector<int>{16, 32, 64, 128} : std::vector<int>{8, 16, 32}) {
      auto u = hemisphere_exact(1.0, strip(1.0, M, dims));
      hs.push_back(u.mesh.h());
      res.push_back(sup_interior(assemble_residual(u)));
    }
    const double slope = testutil::loglog_slope(hs, res);
    INFO("dims " << dims << " slope " << slope);
    CHECK(std::abs(slope - 2) <= 0.2);
  }
}

TEST_CASE("residual of simple fields") {
  auto mesh = strip(1.0, 16);
  CHECK(sup_interior(assemble_residual(DiscreteField(mesh))) == 0.0);
  auto u = DiscreteField::sample(mesh, [](std::size_t, double, double, double t) { return t * t; });
  auto res = assemble_residual(u);
  // Laplacian 2, quadratic term 8t^2/(1+4t^2), singular term 2*2t/t.
  for (std::size_t k = 1; k + 1 < mesh.nt(); ++k) {
    const double t = mesh.t[k];
    CHECK(res(mesh.ny() / 2, k) == doctest::Approx(2 - 8 * t * t / (1 + 4 * t * t) - 4).epsilon(1e-9));
  }
}

TEST_CASE("Newton converges at second order on the hemisphere family") {
  for (double R : {1.0, 2.0}) {
    std::vector<double> hs, errs;
    for (int M : {32, 64, 128}) {
      auto sol = solve_hemisphere(R, M);
      CHECK(sol.history.back() <= 1e-12);
      hs.push_back(sol.u.mesh.h());
      errs.push_back((sol.u - hemisphere_exact(R, sol.u.mesh)).sup_norm());
    }
    const double slope = testutil::loglog_slope(hs, errs);
    INFO("R " << R << " slope " << slope);
    CHECK(std::abs(slope - 2) <= 0.2);
  }
}

TEST_CASE("Newton residual drops quadratically") {
  auto sol = solve_hemisphere(1.0, 16, 2);
  const auto& h = sol.history;
  REQUIRE(h.size() >= 4);
  for (std::size_t k = h.size() - 3; k < h.size(); ++k) CHECK(h[k] <= 0.5 * h[k - 1]);
}

TEST_CASE("zero data gives the zero solution") {
  auto mesh = strip(1.0, 16);
  auto sol = newton_solve(mesh, GridField::zeros(mesh.tangential), LateralBC::from_expansion(LogPolynomial{}),
                          SolverConfig{});
  CHECK(sol.u.sup_norm() == 0.0);
  CHECK(sol.iterations == 0);
}

TEST_CASE("boundary-only initial guess reaches the same solution") {
  auto mesh = strip(1.0, 32);
  auto phi = AnalyticField::sphere_cap(1.0).sample(mesh.tangential);
  SolverConfig cfg;
  cfg.newton_tol = 1e-12;
  auto a = newton_solve(mesh, phi, LateralBC::oracle(1.0), cfg);
  LogPolynomial guess;
  guess.add_term(0, 0, phi);
  auto b = newton_solve(mesh, phi, LateralBC::oracle(1.0), cfg, guess);
  CHECK((a.u - b.u).sup_norm() <= 1e-10);
}

TEST_CASE("solver failures") {
  auto mesh = strip(1.0, 32);
  auto phi = AnalyticField::sphere_cap(1.0).sample(mesh.tangential);
  SolverConfig cfg;
  cfg.newton_tol = 1e-14;
  cfg.max_iters = 1;
  CHECK_THROWS_AS(newton_solve(mesh, phi, LateralBC::oracle(1.0), cfg), NumericalFailure);
  cfg.newton_tol = 0;
  CHECK_THROWS_AS(newton_solve(mesh, phi, LateralBC::oracle(1.0), cfg), ValidationError);
  CHECK_THROWS_AS(newton_solve(mesh, phi, LateralBC::oracle(0.3), SolverConfig{}), DomainError);
}

TEST_CASE("quadratic barrier") {
  auto sol = solve_hemisphere(1.0, 64);
  auto good = barrier_check(1, 10, sol.u);
  CHECK(good.pass);
  CHECK(good.negative == good.nodes);
  CHECK(good.boundary_violations == 0);
  CHECK(good.bound_direct == doctest::Approx(-18));
  CHECK(good.bound_printed == doctest::Approx(-19));
  CHECK(good.max_Lw <= good.bound_direct + 1e-9);

  auto bad = barrier_check(1, 0, sol.u);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_Lw > 0);
}

TEST_CASE("power barrier sign on a small subdomain") {
  auto sol = solve_hemisphere(1.0, 64);
  for (double region : {0.1, 0.01}) {
    auto rep = barrier_check(power_barrier(1.0, 3.5, 2), sol.u, region);
    CHECK(rep.nodes > 50);
    CHECK(rep.pass);
    CHECK(rep.max_Lw < 0);
  }
}

TEST_CASE("decay ratios on the solved hemisphere") {
  auto sol = solve_hemisphere(1.0, 64);
  auto rep = decay_check(sol.u);
  CHECK(rep.pass);
  REQUIRE(rep.ratios.size() == 2);
  // |u - phi| / t^2 tends to 1/(2 sqrt(1 - |y'|^2)) and is flat.
  CHECK(rep.ratios[0].max_ratio == doctest::Approx(1 / (2 * std::sqrt(1 - 0.15 * 0.15))).epsilon(0.02));
  CHECK(std::abs(rep.ratios[0].slope) <= 0.1);
}

TEST_CASE("decay ratios are uniform in t_min") {
  auto coarse = decay_check(solve_hemisphere(1.0, 32).u);
  auto fine = decay_check(solve_hemisphere(1.0, 64).u);
  CHECK(coarse.pass);
  CHECK(fine.pass);
  for (std::size_t q = 0; q < 2; ++q)
    CHECK(fine.ratios[q].max_ratio == doctest::Approx(coarse.ratios[q].max_ratio).epsilon(0.05));
}

TEST_CASE("decay check on degenerate and perturbed fields") {
  auto mesh = strip(1.0, 32);
  auto phi = AnalyticField::sphere_cap(1.0).sample(mesh.tangential);
  auto flat = DiscreteField::sample(mesh, [&](std::size_t y, double, double, double) { return phi[y]; });
  auto rep = decay_check(flat);
  CHECK(rep.pass);
  for (auto& r : rep.ratios) CHECK(r.max_ratio == 0.0);

  auto u = hemisphere_exact(1.0, mesh);
  for (std::size_t k = 0; k < mesh.nt(); ++k)
    for (std::size_t y = 0; y < mesh.ny(); ++y) u.at(y, k) += mesh.t[k];
  auto bad = decay_check(u);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.ratios[0].pass);
  CHECK(bad.ratios[0].slope < -0.5);
}
