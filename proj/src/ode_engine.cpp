#include "hypexp/ode_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypexp/errors.hpp"

namespace hypexp {

SingularODE::SingularODE(int m_low_, int m_high_, double r_) : m_low(m_low_), m_high(m_high_), r(r_) {
  if (m_low > 0) throw ValidationError("lower indicial root must be <= 0");
  if (m_high < 2) throw ValidationError("upper indicial root must be >= 2");
  if (!(r > 0)) throw ValidationError("interval radius must be positive");
}

SampledFunction::SampledFunction(std::vector<double> t_, std::size_t slices_)
    : t(std::move(t_)), slices(slices_), values(t.size() * slices_, 0.0) {
  if (t.size() < 3) throw ValidationError("sampled functions need at least three nodes");
  if (!(t[0] > 0)) throw ValidationError("sample nodes must be positive");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1])) throw ValidationError("sample nodes must increase");
  if (slices == 0) throw ValidationError("at least one slice is required");
}

SampledFunction SampledFunction::sample(const std::vector<double>& t, const LogPolynomial& f) {
  const Grid g = f.grid();
  SampledFunction out(t, g.dims == 0 ? 1 : g.size());
  for (std::size_t s = 0; s < out.slices; ++s)
    for (std::size_t k = 0; k < t.size(); ++k) out.at(s, k) = lp_eval(f, t[k], s);
  return out;
}

ForcingArgs forcing_args(const LogPolynomial& v, std::uint32_t reads, const PhiContext& ctx, int dims,
                         const CoefficientDerivatives& derivs) {
  ForcingArgs a;
  a.ctx = &ctx;
  LogPolynomial vt = lp_diff(v);
  if (reads & kReadV) a.v = v;
  if (reads & kReadVt) a.vt = vt;
  if (reads & kReadVOverT) a.v_over_t = lp_shift(v, -1);
  if (reads & kReadV2OverT3) a.v2_over_t3 = lp_shift(v * v, -3);
  if (reads & kReadVVtOverT2) a.vvt_over_t2 = lp_shift(v * vt, -2);
  if (reads & kReadVt2OverT) a.vt2_over_t = lp_shift(vt * vt, -1);
  if (reads & (kReadDv | kReadDvt | kReadDvOverT | kReadD2v)) {
    auto T = derivs ? derivs(v, dims) : lp_tangential_derivatives(v, dims);
    if (reads & kReadDv) a.dv = T.d1;
    if (reads & kReadDvt)
      for (auto& d : T.d1) a.dvt.push_back(lp_diff(d));
    if (reads & kReadDvOverT)
      for (auto& d : T.d1) a.dv_over_t.push_back(lp_shift(d, -1));
    if (reads & kReadD2v) a.d2v = T.d2;
  }
  return a;
}

FunctionalForcing minimal_graph_forcing(const PhiContext& ctx, int n, const CoefficientDerivatives& derivs) {
  if (n < ctx.dims + 1) throw DimensionError("n must be at least the tangential dimension plus one");
  FunctionalForcing F;
  F.reads = kReadVt | kReadVt2OverT | kReadDv | kReadDvt | kReadD2v | kReadV;
  F.linear = true;
  F.ctx = ctx;
  F.derivs = derivs;
  F.name = "minimal-graph";
  F.eval = [n](const ForcingArgs& a) {
    const PhiContext& c = *a.ctx;
    const int d = c.dims;
    int K = a.v.trunc_order();
    if (a.v.is_exact()) {
      if (!a.v.empty()) throw ValidationError("minimal-graph forcing needs a truncated unknown");
      K = 0;
    }
    auto tr = [K](const LogPolynomial& p) { return lp_truncate(p, K); };
    std::vector<LogPolynomial> du(d);
    LogPolynomial Wp(GridField(1.0)), lap;
    for (int al = 0; al < d; ++al) {
      du[al] = a.dv[al] + LogPolynomial(c.grad[al]);
      Wp = Wp + tr(du[al] * du[al]);
      lap = lap + a.d2v[al][al] + LogPolynomial(c.hess[al][al]);
    }
    LogPolynomial iW = lp_recip(Wp, K);
    LogPolynomial F = lap;
    LogPolynomial cross;
    for (int al = 0; al < d; ++al) {
      cross = cross + tr(du[al] * a.dvt[al]);
      for (int be = 0; be < d; ++be)
        F = F - tr(tr(tr(du[al] * du[be]) * iW) * (a.d2v[al][be] + LogPolynomial(c.hess[al][be])));
    }
    F = F - 2.0 * tr(tr(cross * a.vt) * iW);
    F = F + tr(tr(tr(a.vt * a.vt) * lap) * iW);
    F = F - double(n) * tr(tr(a.vt * a.vt2_over_t) * iW);
    return lp_truncate(F, K).normalize();
  };
  return F;
}

namespace {

void check_integrand_from_zero(const LogPolynomial& f) {
  if (!f.empty() && f.min_power() <= -1)
    throw RepresentationError("weighted integral from 0 diverges (power " + std::to_string(f.min_power()) + ")");
}

}  // namespace

LogPolynomial solve_integral_rep(const SingularODE& ode, int l, const LogPolynomial& F, const GridField& v_r) {
  const int a = ode.m_low - l, b = ode.m_high - l;
  const double D = ode.delta(), r = ode.r;
  LogPolynomial f0 = lp_shift(F, l + 1 - ode.m_low);
  check_integrand_from_zero(f0);
  LogPolynomial g0, g1;
  try {
    g0 = lp_integrate(f0, IntegrationMode::zero());
    g1 = lp_integrate(lp_shift(F, l + 1 - ode.m_high), IntegrationMode::from(r));
  } catch (const DivergentIntegralError& e) {
    throw RepresentationError(e.what());
  }
  GridField C = v_r * std::pow(r, -b) - lp_eval_field(g0, r) * (std::pow(r, a - b) / D);
  LogPolynomial v = (1.0 / D) * (lp_shift(g0, a) - lp_shift(g1, b));
  v.add_term(b, 0, C);
  return v.normalize();
}

namespace {

// Integral of s^alpha over [x0, x1].
double power_moment(double alpha, double x0, double x1) {
  if (alpha == -1) return std::log1p((x1 - x0) / x0);
  return (std::pow(x1, alpha + 1) - std::pow(x0, alpha + 1)) / (alpha + 1);
}

// Weights (w0, w1) with int_{x0}^{x1} s^alpha f ds = w0 f(x0) + w1 f(x1) for linear f.
std::pair<double, double> segment_weights(double alpha, double x0, double x1) {
  const double h = x1 - x0;
  const double m0 = power_moment(alpha, x0, x1);
  const double m1 = power_moment(alpha + 1, x0, x1);
  const double w1 = (m1 - x0 * m0) / h;
  return {m0 - w1, w1};
}

// int_0^{t0} s^alpha f ds with f ~ A s^beta fitted on the first three nodes.
double head_integral(double alpha, const std::vector<double>& t, const double* f) {
  if (f[0] == 0 && f[1] == 0 && f[2] == 0) return 0;
  const bool same = (f[0] > 0 && f[1] > 0 && f[2] > 0) || (f[0] < 0 && f[1] < 0 && f[2] < 0);
  if (same) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < 3; ++k) {
      const double x = std::log(t[k]), y = std::log(std::abs(f[k]));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double beta = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    const double A = std::copysign(std::exp((sy - beta * sx) / 3), f[0]);
    const double e = alpha + beta + 1;
    if (!(e > 0)) throw RepresentationError("weighted integral from 0 diverges for the sampled forcing");
    return A * std::pow(t[0], e) / e;
  }
  if (!(alpha + 1 > 0)) throw RepresentationError("weighted integral from 0 diverges for the sampled forcing");
  return f[0] * std::pow(t[0], alpha + 1) / (alpha + 1);
}

void check_last_node(const SampledFunction& F, double r) {
  if (std::abs(F.t.back() - r) > 1e-12 * std::max(1.0, r))
    throw ValidationError("sampled nodes must end at the interval radius");
}

// Three-point weights for first and second derivatives at node k.
struct Stencil {
  std::size_t rows[3];
  double d1[3];
  double d2[3];
};

Stencil stencil(const std::vector<double>& t, std::size_t k) {
  const std::size_t nt = t.size();
  std::size_t c = std::clamp<std::size_t>(k, 1, nt - 2);
  Stencil s{{c - 1, c, c + 1}, {}, {}};
  const double x = t[k];
  for (int q = 0; q < 3; ++q) {
    const double xq = t[s.rows[q]];
    double den = 1, num1 = 0, num2 = 0;
    double others[2];
    int o = 0;
    for (int p = 0; p < 3; ++p)
      if (p != q) {
        den *= xq - t[s.rows[p]];
        others[o++] = t[s.rows[p]];
      }
    num1 = (x - others[0]) + (x - others[1]);
    num2 = 2;
    s.d1[q] = num1 / den;
    s.d2[q] = num2 / den;
  }
  return s;
}

}  // namespace

SampledFunction solve_integral_rep(const SingularODE& ode, int l, const SampledFunction& F,
                                   const std::vector<double>& v_r) {
  check_last_node(F, ode.r);
  if (v_r.size() != F.slices) throw ShapeError("boundary values must match the slice count");
  const int a = ode.m_low - l, b = ode.m_high - l;
  const double al0 = l + 1 - ode.m_low, al1 = l + 1 - ode.m_high;
  const double D = ode.delta(), r = ode.r;
  const std::size_t nt = F.t.size();
  SampledFunction v(F.t, F.slices);
  std::vector<double> I0(nt), I1(nt);
  for (std::size_t s = 0; s < F.slices; ++s) {
    const double* f = &F.values[s * nt];
    I0[0] = head_integral(al0, F.t, f);
    for (std::size_t k = 0; k + 1 < nt; ++k) {
      auto [w0, w1] = segment_weights(al0, F.t[k], F.t[k + 1]);
      I0[k + 1] = I0[k] + w0 * f[k] + w1 * f[k + 1];
    }
    I1[nt - 1] = 0;
    for (std::size_t k = nt - 1; k-- > 0;) {
      auto [w0, w1] = segment_weights(al1, F.t[k], F.t[k + 1]);
      I1[k] = I1[k + 1] + w0 * f[k] + w1 * f[k + 1];
    }
    const double C = v_r[s] * std::pow(r, -b) - std::pow(r, a - b) * I0[nt - 1] / D;
    for (std::size_t k = 0; k < nt; ++k) {
      const double t = F.t[k];
      v.at(s, k) = C * std::pow(t, b) + (std::pow(t, a) * I0[k] + std::pow(t, b) * I1[k]) / D;
    }
  }
  return v;
}

LogPolynomial reduce_level(const LogPolynomial& v) { return (lp_diff(v) - 2.0 * lp_shift(v, -1)).normalize(); }

SampledFunction reduce_level(const SampledFunction& v) {
  SampledFunction out(v.t, v.slices);
  for (std::size_t k = 0; k < v.t.size(); ++k) {
    auto st = stencil(v.t, k);
    for (std::size_t s = 0; s < v.slices; ++s) {
      double d = 0;
      for (int q = 0; q < 3; ++q) d += st.d1[q] * v.at(s, st.rows[q]);
      out.at(s, k) = d - 2 * v.at(s, k) / v.t[k];
    }
  }
  return out;
}

LogPolynomial lift_level(const LogPolynomial& v_l, const GridField& v_prev_r, double r, LiftForm form) {
  if (!(r > 0)) throw ValidationError("interval radius must be positive");
  LogPolynomial f = lp_shift(v_l, -2);
  LogPolynomial out;
  try {
    if (form == LiftForm::FromZero) {
      check_integrand_from_zero(f);
      LogPolynomial g0 = lp_integrate(f, IntegrationMode::zero());
      out = lp_shift(g0, 2);
      out.add_term(2, 0, v_prev_r / (r * r) - lp_eval_field(g0, r));
    } else {
      // lp_integrate from r gives int_r^t = -int_t^r.
      out = lp_shift(lp_integrate(f, IntegrationMode::from(r)), 2);
      out.add_term(2, 0, v_prev_r / (r * r));
    }
  } catch (const DivergentIntegralError& e) {
    throw RepresentationError(e.what());
  }
  return out.normalize();
}

SampledFunction lift_level(const SampledFunction& v_l, const std::vector<double>& v_prev_r, double r) {
  check_last_node(v_l, r);
  if (v_prev_r.size() != v_l.slices) throw ShapeError("boundary values must match the slice count");
  const std::size_t nt = v_l.t.size();
  SampledFunction out(v_l.t, v_l.slices);
  for (std::size_t s = 0; s < v_l.slices; ++s) {
    double I = 0;
    out.at(s, nt - 1) = v_prev_r[s];
    for (std::size_t k = nt - 1; k-- > 0;) {
      auto [w0, w1] = segment_weights(-2, v_l.t[k], v_l.t[k + 1]);
      I += w0 * v_l.at(s, k) + w1 * v_l.at(s, k + 1);
      const double t = v_l.t[k];
      out.at(s, k) = t * t * (v_prev_r[s] / (r * r) - I);
    }
  }
  return out;
}

LogPolynomial ode_residual(const SingularODE& ode, int l, const LogPolynomial& v, const LogPolynomial& F) {
  LogPolynomial vt = lp_diff(v);
  return (lp_diff(vt) + double(ode.p_level(l)) * lp_shift(vt, -1) + double(ode.q_level(l)) * lp_shift(v, -2) + F)
      .normalize();
}

SampledFunction ode_residual(const SingularODE& ode, int l, const SampledFunction& v, const SampledFunction& F) {
  if (v.t != F.t || v.slices != F.slices) throw ShapeError("solution and forcing must share nodes");
  SampledFunction out(v.t, v.slices);
  const double p = ode.p_level(l), q = ode.q_level(l);
  for (std::size_t k = 1; k + 1 < v.t.size(); ++k) {
    auto st = stencil(v.t, k);
    const double t = v.t[k];
    for (std::size_t s = 0; s < v.slices; ++s) {
      double d1 = 0, d2 = 0;
      for (int q3 = 0; q3 < 3; ++q3) {
        d1 += st.d1[q3] * v.at(s, st.rows[q3]);
        d2 += st.d2[q3] * v.at(s, st.rows[q3]);
      }
      out.at(s, k) = d2 + p * d1 / t + q * v.at(s, k) / (t * t) + F.at(s, k);
    }
  }
  return out;
}

ExpansionResult formal_ode_expansion(const SingularODE& ode, const FunctionalForcing& F, int k,
                                     const std::map<TermKey, GridField>& nonlocal, double zero_tol) {
  if (!F.eval) throw ValidationError("forcing has no evaluation callback");
  if (k < ode.m_high) throw OrderError("expansion order must reach the resonant order");
  for (auto& [key, c] : nonlocal)
    if (key.i != ode.m_high || key.j != 0)
      throw ValidationError("only the resonant coefficient c_{" + std::to_string(ode.m_high) + ",0} is free");
  const int dims = F.ctx.dims;
  const double E_res = ode.delta();
  ExpansionResult e;
  e.n = ode.m_high - 1;
  e.order = k;
  e.m_high = ode.m_high;
  e.phi = F.ctx;
  LogPolynomial v;
  for (int i = 2; i <= k; ++i) {
    LogPolynomial vi = v;
    vi.set_trunc_order(i - 1);
    LogPolynomial Fv = F.eval(forcing_args(vi, F.reads, F.ctx, dims, F.derivs));
    if (Fv.trunc_order() < i - 2)
      throw OrderError("forcing does not determine order " + std::to_string(i));
    if (i == 2 && !Fv.empty() && Fv.min_power() < 0) throw ValidationError("forcing must be bounded at t = 0");
    const int J = Fv.max_log_power_at(i - 2);
    const double Dind = double(i - ode.m_low) * (i - ode.m_high);
    const double E = 2.0 * i - ode.m_low - ode.m_high;
    std::map<int, GridField> c;
    auto get = [&c](int j) { return c.count(j) ? c[j] : GridField(0.0); };
    if (Dind != 0) {
      for (int j = J; j >= 0; --j)
        c[j] = (Fv.coeff(i - 2, j) + (j + 1) * E * get(j + 1) + double((j + 2) * (j + 1)) * get(j + 2)) / -Dind;
    } else {
      auto it = nonlocal.find(TermKey{i, 0});
      c[0] = it != nonlocal.end() ? it->second : GridField(0.0);
      e.provenance[TermKey{i, 0}] = Provenance::NonlocalInput;
      for (int j = J; j >= 0; --j)
        c[j + 1] = (Fv.coeff(i - 2, j) + double((j + 2) * (j + 1)) * get(j + 2)) / (-(j + 1) * E_res);
    }
    for (auto& [j, cj] : c) {
      v.add_term(i, j, cj);
      if (!e.provenance.count(TermKey{i, j})) e.provenance[TermKey{i, j}] = Provenance::Local;
    }
    v.normalize();
  }
  v.set_trunc_order(k);
  // Residual of the full ODE below the guaranteed order.
  LogPolynomial Fv = F.eval(forcing_args(v, F.reads, F.ctx, dims, F.derivs));
  LogPolynomial R = lp_truncate(ode_residual(ode, 0, v, Fv), k - 2);
  double res = 0;
  for (auto& [key, c] : R.terms()) res = std::max(res, c.sup_norm());
  e.local_residual = res;
  if (res > 1e-6) throw NumericalFailure("formal expansion residual " + std::to_string(res) + " exceeds 1e-6");
  e.terms = v;
  if (F.linear) {
    auto rep = log_bound_check(e, ode, zero_tol);
    if (!rep.pass) e.warnings.push_back(rep.summary);
  } else {
    e.warnings.push_back("log bound check skipped: forcing not declared linear in the quadratic ratios");
  }
  return e;
}

LogCheckReport log_bound_check(const ExpansionResult& e, const SingularODE& ode, double tol) {
  LogCheckReport rep;
  for (auto& [key, c] : e.terms.terms()) {
    if (key.j == 0) continue;
    const double nrm = c.sup_norm();
    if (nrm < tol) continue;
    const int num = key.i - 1, den = ode.m_high - 1;
    const int allowed = num >= 0 ? num / den : -((-num + den - 1) / den);
    if (key.j > allowed) {
      rep.pass = false;
      rep.violations.push_back({key.i, key.j, allowed, nrm});
    }
  }
  std::ostringstream s;
  if (rep.pass) {
    s << "log bound holds";
  } else {
    s << "log bound violated:";
    for (auto& v : rep.violations) s << " (i=" << v.i << ", j=" << v.j << ", allowed " << v.allowed << ")";
  }
  rep.summary = s.str();
  return rep;
}

LogCheckReport no_log_propagation_check(const ExpansionResult& e, double tol) {
  LogCheckReport rep;
  const double lead = e.terms.coeff(e.m_high, 1).sup_norm();
  if (lead >= tol) {
    rep.summary = "log leader nonzero; nothing to check";
    return rep;
  }
  for (auto& [key, c] : e.terms.terms()) {
    if (key.j == 0) continue;
    const double nrm = c.sup_norm();
    if (nrm >= tol) {
      rep.pass = false;
      rep.violations.push_back({key.i, key.j, 0, nrm});
    }
  }
  std::ostringstream s;
  if (rep.pass) {
    s << "no log terms without a log leader";
  } else {
    s << "log terms present although the log leader vanishes:";
    for (auto& v : rep.violations) s << " (i=" << v.i << ", j=" << v.j << ")";
  }
  rep.summary = s.str();
  return rep;
}

}  // namespace hypexp
