#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "hypexp/analytic_field.hpp"
#include "hypexp/errors.hpp"
#include "hypexp/pde_solver.hpp"
#include "hypexp/remainder.hpp"
#include "oracles.hpp"

using namespace hypexp;

namespace {

std::vector<Sample> samples(double lo, double hi, int count, double (*f)(double)) {
  std::vector<Sample> s;
  for (int q = 0; q < count; ++q) {
    const double t = lo * std::pow(hi / lo, double(q) / (count - 1));
    s.push_back({t, f(t)});
  }
  return s;
}

struct Hemisphere {
  HalfStripMesh mesh;
  DiscreteField u;
  PhiContext ctx;
};

Hemisphere hemisphere(double R, int M) {
  const double r = 0.3 * R;
  Hemisphere h{HalfStripMesh::make(1, r, 2 * r / 32, M, 2.0), {}, {}};
  h.u = hemisphere_exact(R, h.mesh);
  h.ctx = PhiContext::from_analytic(AnalyticField::sphere_cap(R), h.mesh.tangential);
  return h;
}

}  // namespace

TEST_CASE("fit_exponent on synthetic powers") {
  auto a = fit_exponent(samples(1e-4, 1e-1, 20, [](double t) { return 3 * std::pow(t, 4); }), 2);
  CHECK(a.gamma == doctest::Approx(4).epsilon(0.005));
  CHECK(a.j == 0);
  CHECK(a.C == doctest::Approx(3).epsilon(0.02));
  CHECK(a.t_lo < a.t_hi);
  CHECK(a.residual >= 0);

  auto b = fit_exponent(samples(1e-4, 1e-1, 20, [](double t) { return std::pow(t, 4) * std::log(1 / t); }), 2);
  CHECK(b.j == 1);
  CHECK(b.gamma == doctest::Approx(4).epsilon(0.05 / 4));

  CHECK_THROWS_AS(fit_exponent(samples(1e-4, 1e-1, 20, [](double) { return 0.0; }), 2), DegenerateDataError);
}

TEST_CASE("fit_exponent is exact on pure powers") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> gam(0.5, 7), dec(2, 4), amp(0.1, 10);
  for (int c = 0; c < 200; ++c) {
    const double g = gam(rng), C = amp(rng), hi = 0.3, lo = hi * std::pow(10.0, -dec(rng));
    std::vector<Sample> s;
    for (int q = 0; q < 12; ++q) {
      const double t = lo * std::pow(hi / lo, q / 11.0);
      s.push_back({t, C * std::pow(t, g)});
    }
    auto f0 = fit_exponent(s, 0);
    CHECK(std::abs(f0.gamma - g) < 1e-6);
    auto f2 = fit_exponent(s, 2);
    CHECK(f2.j == 0);
  }
}

TEST_CASE("fit_exponent input errors") {
  CHECK_THROWS_AS(fit_exponent(samples(1e-3, 1e-1, 7, [](double t) { return t; }), 0), SpanError);
  CHECK_THROWS_AS(fit_exponent(samples(1e-2, 1e-1, 20, [](double t) { return t; }), 0), SpanError);
  CHECK_THROWS_AS(fit_exponent(samples(1e-3, 1e-1, 20, [](double t) { return t; }), -1), ValidationError);
}

TEST_CASE("hemisphere remainder after the c2 term decays like t^4") {
  auto h = hemisphere(1.0, 64);
  auto uk = compute_local_coeffs(h.ctx, 2, 2);
  auto rows = verify_remainder_bound(h.u, uk, 2, {{0, 0}});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].pass);
  CHECK(rows[0].fit.j == 0);
  CHECK(rows[0].fit.gamma == doctest::Approx(4).epsilon(0.02));
  CHECK(rows[0].threshold == doctest::Approx(2 + 0.5 - 0.15));
}

TEST_CASE("missing c2 fails the k = n + 1 claim") {
  auto h = hemisphere(1.0, 64);
  auto uk = compute_local_coeffs(h.ctx, 2, 2);
  uk.terms = lp_truncate(uk.terms, 1);
  uk.provenance.erase({2, 0});
  auto rows = verify_remainder_bound(h.u, uk, 3, {{0, 0}});
  CHECK_FALSE(rows[0].pass);
  CHECK(rows[0].fit.gamma == doctest::Approx(2).epsilon(0.02));
}

TEST_CASE("exact expansion is below noise") {
  auto h = hemisphere(1.0, 64);
  auto uk = compute_local_coeffs(h.ctx, 2, 2);
  auto full = uk.full();
  auto u = DiscreteField::sample(h.mesh, [&](std::size_t y, double, double, double t) {
    return t > 0 ? lp_eval(full, t, y) : h.u(y, 0);
  });
  auto rows = verify_remainder_bound(u, uk, 3, {{0, 0}, {1, 0}, {0, 1}});
  for (auto& row : rows) {
    CHECK(row.below_noise);
    CHECK(row.pass);
  }
}

TEST_CASE("fitted decay is monotone in k") {
  for (double R : {0.5, 1.0, 2.0}) {
    auto h = hemisphere(R, 64);
    auto local = compute_local_coeffs(h.ctx, 2, 2);
    std::vector<double> gammas;
    for (int k : {1, 2, 4}) {
      ExpansionResult uk = local;
      if (k == 1) {
        uk.terms = lp_truncate(uk.terms, 1);
        uk.provenance.erase({2, 0});
      } else if (k == 4) {
        uk = build_uk(local,
                      {{3, 0, GridField::zeros(h.mesh.tangential)},
                       {4, 0, oracle::hemisphere_terms(R, h.mesh.tangential, 4).coeff(4)}},
                      4);
      }
      // The closed-form field has no outer-boundary artifacts, so the window reaches r.
      RemainderOptions opt;
      opt.t_hi = h.mesh.r;
      auto rows = verify_remainder_bound(h.u, uk, k, {{0, 0}}, opt);
      INFO("R " << R << " k " << k << " " << rows[0].note);
      CHECK(rows[0].pass);
      gammas.push_back(rows[0].fit.gamma);
    }
    CHECK(gammas[0] <= gammas[1]);
    CHECK(gammas[1] <= gammas[2]);
  }
}

TEST_CASE("normal derivative order is limited by k") {
  auto h = hemisphere(1.0, 32);
  auto uk = compute_local_coeffs(h.ctx, 2, 2);
  CHECK_THROWS_AS(verify_remainder_bound(h.u, uk, 1, {{0, 2}}), OrderError);
  CHECK_THROWS_AS(verify_remainder_bound(h.u, uk, 3, {{3, 0}}), OrderError);
}

TEST_CASE("fit_coefficient recovers c2") {
  auto h = hemisphere(1.0, 64);
  auto uk = compute_local_coeffs(h.ctx, 2, 2);
  uk.terms = lp_truncate(uk.terms, 1);
  uk.provenance.erase({2, 0});
  auto c2 = fit_coefficient(h.u, uk, 2, 1e-3, 3e-2);
  const auto& g = h.mesh.tangential;
  for (std::size_t y = 0; y < g.size(); ++y) {
    const double y1 = g.point(y)[0];
    CHECK(c2[y] == doctest::Approx(0.5 / std::sqrt(1 - y1 * y1)).epsilon(1e-4));
  }
}
