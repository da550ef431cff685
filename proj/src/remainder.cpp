#include "hypexp/remainder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypexp/errors.hpp"

namespace hypexp {

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw SpanError("slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

FitResult fit_exponent(const std::vector<Sample>& samples, int j_max) {
  if (j_max < 0) throw ValidationError("j_max must be non-negative");
  bool any = false;
  for (auto& s : samples)
    if (s.value != 0) any = true;
  if (!any) throw DegenerateDataError("all samples are zero");
  std::vector<Sample> use;
  const double t_cap = j_max > 0 ? std::exp(-1.0) : std::numeric_limits<double>::infinity();
  for (auto& s : samples)
    if (s.t > 0 && s.value != 0 && std::isfinite(s.value) && s.t < t_cap) use.push_back(s);
  if (use.size() < 8) throw SpanError("need at least 8 usable samples, have " + std::to_string(use.size()));
  double lo = use[0].t, hi = use[0].t;
  for (auto& s : use) {
    lo = std::min(lo, s.t);
    hi = std::max(hi, s.t);
  }
  if (std::log10(hi / lo) < 1.5) throw SpanError("samples span less than 1.5 decades");

  FitResult best;
  for (int j = 0; j <= j_max; ++j) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(use.size());
    std::vector<double> X(use.size()), Y(use.size());
    for (std::size_t k = 0; k < use.size(); ++k) {
      X[k] = std::log(use[k].t);
      Y[k] = std::log(std::abs(use[k].value)) - j * std::log(std::log(1 / use[k].t));
      sx += X[k];
      sy += Y[k];
      sxx += X[k] * X[k];
      sxy += X[k] * Y[k];
    }
    const double gamma = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - gamma * sx) / n;
    double ss = 0;
    for (std::size_t k = 0; k < use.size(); ++k) {
      const double e = Y[k] - icpt - gamma * X[k];
      ss += e * e;
    }
    const double rms = std::sqrt(ss / n);
    if (j == 0 || rms < 0.99 * best.residual - 1e-12) {
      best.gamma = gamma;
      best.j = j;
      best.C = std::exp(icpt);
      best.residual = rms;
    }
  }
  best.t_lo = lo;
  best.t_hi = hi;
  best.samples = use.size();
  return best;
}

namespace {

// w = u - u_k at (y, k); the t = 0 row compares against the expansion's phi.
struct Remainder {
  const DiscreteField& u;
  LogPolynomial full;
  GridField phi;
  std::vector<double> w;

  Remainder(const DiscreteField& u_, const ExpansionResult& uk) : u(u_), full(uk.full()), phi(uk.phi.phi) {
    const auto& m = u.mesh;
    const bool scalar = full.grid().dims == 0;
    w.resize(m.size());
    for (std::size_t k = 0; k < m.nt(); ++k)
      for (std::size_t y = 0; y < m.ny(); ++y) {
        const double ref = k == 0 ? phi[y] : lp_eval(full, m.t[k], scalar ? 0 : y);
        w[m.node(y, k)] = u(y, k) - ref;
      }
  }
  double operator()(std::size_t y, std::size_t k) const { return w[u.mesh.node(y, k)]; }
};

}  // namespace

std::vector<LevelSample> remainder_levels(const DiscreteField& u, const ExpansionResult& uk, int tau, int m,
                                          double mask, double noise) {
  if (tau < 0 || tau > 2 || m < 0 || m > 2) throw OrderError("finite-difference budget allows tau, m <= 2");
  const auto& M = u.mesh;
  Remainder w(u, uk);
  const double h = M.h();
  const int d = M.dims();
  std::vector<LevelSample> out;
  for (std::size_t k = 1; k + 1 < M.nt(); ++k) {
    auto tw = M.t_weights(k);
    auto dtm = [&](std::size_t y) {
      if (m == 0) return w(y, k);
      double s = 0;
      for (int q = 0; q < 3; ++q) s += (m == 1 ? tw.d1[q] : tw.d2[q]) * w(y, tw.rows[q]);
      return s;
    };
    double tsum = 1;
    if (m > 0) {
      tsum = 0;
      for (int q = 0; q < 3; ++q) tsum += std::abs(m == 1 ? tw.d1[q] : tw.d2[q]);
    }
    const double ysum = tau == 0 ? 1.0 : (tau == 1 ? 1.0 / h : 4.0 / (h * h));
    double best = 0;
    for (std::size_t y = 0; y < M.ny(); ++y) {
      if (M.tangential.radius(y) >= mask) continue;
      if (tau > 0 && M.on_lateral(y)) continue;
      double v;
      if (tau == 0) {
        v = std::abs(dtm(y));
      } else if (tau == 1) {
        double g2 = 0;
        for (int a = 0; a < d; ++a) {
          const double ga = (dtm(M.shift(y, a, 1)) - dtm(M.shift(y, a, -1))) / (2 * h);
          g2 += ga * ga;
        }
        v = std::sqrt(g2);
      } else {
        double h2 = 0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double hab;
            if (a == b) {
              hab = (dtm(M.shift(y, a, 1)) - 2 * dtm(y) + dtm(M.shift(y, a, -1))) / (h * h);
            } else {
              const std::size_t yp = M.shift(y, a, 1), ym = M.shift(y, a, -1);
              hab = (dtm(M.shift(yp, b, 1)) - dtm(M.shift(yp, b, -1)) - dtm(M.shift(ym, b, 1)) +
                     dtm(M.shift(ym, b, -1))) /
                    (4 * h * h);
            }
            h2 += hab * hab;
          }
        v = std::sqrt(h2);
      }
      best = std::max(best, v);
    }
    out.push_back({M.t[k], best, noise * tsum * ysum});
  }
  return out;
}

std::vector<RemainderRow> verify_remainder_bound(const DiscreteField& u, const ExpansionResult& uk, int k,
                                                 const std::vector<std::pair<int, int>>& tau_m,
                                                 const RemainderOptions& opt) {
  const auto& M = u.mesh;
  const double t_lo = opt.t_lo > 0 ? opt.t_lo : 4 * M.t_min();
  const double t_hi = opt.t_hi > 0 ? opt.t_hi : M.r / 4;
  const double mask = opt.mask > 0 ? opt.mask : M.r / 2;
  const double noise = opt.noise * std::max(1.0, u.sup_norm());
  std::vector<RemainderRow> rows;
  for (auto [tau, m] : tau_m) {
    if (m > k) throw OrderError("normal derivative order exceeds the expansion order");
    RemainderRow row;
    row.tau = tau;
    row.m = m;
    row.k = k;
    row.threshold = k - m + opt.alpha - opt.tol;
    auto levels = remainder_levels(u, uk, tau, m, mask, noise);
    std::vector<Sample> samples;
    std::size_t in_window = 0;
    for (auto& l : levels) {
      if (l.t < t_lo || l.t > t_hi) continue;
      ++in_window;
      if (l.value > l.noise) samples.push_back({l.t, l.value});
    }
    if (samples.empty() && in_window > 0) {
      row.below_noise = true;
      row.pass = true;
      row.note = "below-noise";
    } else {
      try {
        row.fit = fit_exponent(samples, opt.j_max);
        row.pass = row.fit.gamma >= row.threshold;
      } catch (const Error& e) {
        row.pass = false;
        row.note = e.what();
      }
    }
    rows.push_back(row);
  }
  return rows;
}

GridField fit_coefficient(const DiscreteField& u, const ExpansionResult& uk, int i, double t_lo, double t_hi) {
  const auto& M = u.mesh;
  Remainder w(u, uk);
  std::vector<double> c(M.ny(), 0.0);
  for (std::size_t y = 0; y < M.ny(); ++y) {
    double s1 = 0, st = 0, stt = 0, sz = 0, stz = 0;
    for (std::size_t k = 1; k + 1 < M.nt(); ++k) {
      const double t = M.t[k];
      if (t < t_lo || t > t_hi) continue;
      const double z = w(y, k) / std::pow(t, i);
      s1 += 1;
      st += t;
      stt += t * t;
      sz += z;
      stz += t * z;
    }
    if (s1 < 2) throw SpanError("coefficient fit window holds fewer than two levels");
    const double det = s1 * stt - st * st;
    c[y] = (stt * sz - st * stz) / det;
  }
  return GridField(M.tangential, std::move(c));
}

}  // namespace hypexp
