#include "hypexp/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "hypexp/errors.hpp"

namespace hypexp {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Local:
      return "local";
    case Provenance::NonlocalInput:
      return "nonlocal-input";
    case Provenance::Fitted:
      return "fitted";
  }
  return "local";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "local") return Provenance::Local;
  if (s == "nonlocal-input") return Provenance::NonlocalInput;
  if (s == "fitted") return Provenance::Fitted;
  throw ValidationError("unknown provenance tag '" + s + "'");
}

LogPolynomial ExpansionResult::full() const {
  LogPolynomial p = terms;
  p.add_term(0, 0, phi.phi);
  return p.normalize();
}

TangentialDerivs lp_tangential_derivatives(const LogPolynomial& w, int dims) {
  TangentialDerivs out;
  out.d1.assign(dims, LogPolynomial());
  out.d2.assign(dims, std::vector<LogPolynomial>(dims));
  for (int a = 0; a < dims; ++a) {
    out.d1[a].set_trunc_order(w.trunc_order());
    for (int b = 0; b < dims; ++b) out.d2[a][b].set_trunc_order(w.trunc_order());
  }
  for (auto& [k, c] : w.terms()) {
    if (c.is_constant()) continue;
    auto D = fd_derivatives(c, 2, dims);
    for (int a = 0; a < dims; ++a) {
      out.d1[a].add_term(k.i, k.j, D.grad[a]);
      for (int b = 0; b < dims; ++b) out.d2[a][b].add_term(k.i, k.j, D.hess[a][b]);
    }
  }
  for (int a = 0; a < dims; ++a) {
    out.d1[a].normalize();
    for (int b = 0; b < dims; ++b) out.d2[a][b].normalize();
  }
  return out;
}

namespace {

struct UDerivs {
  LogPolynomial ut, utt;
  std::vector<LogPolynomial> du, dut;
  std::vector<std::vector<LogPolynomial>> d2u;
};

UDerivs derivatives_of(const LogPolynomial& u, const PhiContext& ctx, const CoefficientDerivatives& derivs) {
  if (u.min_power() < 0) throw ValidationError("Q is applied to log-polynomials without negative powers");
  const int d = ctx.dims;
  LogPolynomial w = u;
  w.add_term(0, 0, -1.0 * ctx.phi);
  w.normalize();
  auto T = derivs ? derivs(w, d) : lp_tangential_derivatives(w, d);
  UDerivs D;
  D.ut = lp_diff(u);
  D.utt = lp_diff(D.ut);
  D.du.resize(d);
  D.dut.resize(d);
  D.d2u.assign(d, std::vector<LogPolynomial>(d));
  for (int a = 0; a < d; ++a) {
    D.du[a] = T.d1[a] + LogPolynomial(ctx.grad[a]);
    D.dut[a] = lp_diff(T.d1[a]);
    for (int b = 0; b < d; ++b) D.d2u[a][b] = T.d2[a][b] + LogPolynomial(ctx.hess[a][b]);
  }
  return D;
}

}  // namespace

LogPolynomial apply_Q(const LogPolynomial& u_in, const PhiContext& ctx, int n, int K,
                      const CoefficientDerivatives& derivs) {
  if (n < 2) throw ValidationError("ambient dimension n must be at least 2");
  LogPolynomial u = lp_truncate(u_in, K + 2);
  auto D = derivatives_of(u, ctx, derivs);
  const int d = ctx.dims;
  auto tr = [K](const LogPolynomial& p) { return lp_truncate(p, K); };
  LogPolynomial lap = D.utt;
  LogPolynomial W(GridField(1.0));
  W = W + tr(D.ut * D.ut);
  LogPolynomial N = tr(tr(D.ut * D.ut) * D.utt);
  for (int a = 0; a < d; ++a) {
    lap = lap + D.d2u[a][a];
    W = W + tr(D.du[a] * D.du[a]);
    N = N + 2.0 * tr(tr(D.du[a] * D.ut) * D.dut[a]);
    for (int b = 0; b < d; ++b) N = N + tr(tr(D.du[a] * D.du[b]) * D.d2u[a][b]);
  }
  LogPolynomial Q = lap - tr(N * lp_recip(W, K)) - double(n) * lp_shift(D.ut, -1);
  return lp_truncate(Q, K);
}

QEvaluator::QEvaluator(const LogPolynomial& u, const PhiContext& ctx, int n, const CoefficientDerivatives& derivs)
    : n_(n), dims_(ctx.dims) {
  auto D = derivatives_of(u, ctx, derivs);
  ut_ = std::move(D.ut);
  utt_ = std::move(D.utt);
  du_ = std::move(D.du);
  dut_ = std::move(D.dut);
  d2u_ = std::move(D.d2u);
}

double QEvaluator::operator()(std::size_t idx, double t) const {
  const double ut = lp_eval(ut_, t, idx), utt = lp_eval(utt_, t, idx);
  double du[2] = {0, 0}, dut[2] = {0, 0}, d2u[2][2] = {{0, 0}, {0, 0}};
  for (int a = 0; a < dims_; ++a) {
    du[a] = lp_eval(du_[a], t, idx);
    dut[a] = lp_eval(dut_[a], t, idx);
    for (int b = 0; b < dims_; ++b) d2u[a][b] = lp_eval(d2u_[a][b], t, idx);
  }
  double lap = utt, W = 1 + ut * ut, N = ut * ut * utt;
  for (int a = 0; a < dims_; ++a) {
    lap += d2u[a][a];
    W += du[a] * du[a];
    N += 2 * du[a] * ut * dut[a];
    for (int b = 0; b < dims_; ++b) N += du[a] * du[b] * d2u[a][b];
  }
  return lap - N / W - n_ * ut / t;
}

int local_top_order(int n) { return n % 2 == 0 ? n : n + 1; }

namespace {

void check_stencil_budget(const PhiContext& ctx, int order) {
  if (ctx.dims == 0 || ctx.phi.is_constant()) return;
  const Grid& g = ctx.grid();
  for (int a = 0; a < g.dims; ++a)
    if (g.n[a] < std::max(5, order + 3))
      throw OrderError("grid too coarse for coefficients of order " + std::to_string(order));
}

}  // namespace

ExpansionResult compute_local_coeffs(const PhiContext& ctx, int n, int k) {
  if (n < 2) throw ValidationError("ambient dimension n must be at least 2");
  if (k > local_top_order(n))
    throw OrderError("local coefficients exist only through order " + std::to_string(local_top_order(n)));
  ExpansionResult res;
  res.n = n;
  res.order = k;
  res.m_high = n + 1;
  res.phi = ctx;
  res.terms.set_trunc_order(std::max(k, 0));
  const int even_top = n % 2 == 0 ? n : n - 1;
  int last = 0;
  for (int i = 2; i <= std::min(k, even_top); i += 2) {
    check_stencil_budget(ctx, i);
    LogPolynomial Q = apply_Q(res.full(), ctx, n, i - 2);
    GridField F = Q.coeff(i - 2, 0);
    res.terms.set_term(i, 0, F / double(i * (n + 1 - i)));
    res.terms.normalize();
    if (res.terms.has(i, 0)) res.provenance[{i, 0}] = Provenance::Local;
    last = i;
  }
  if (n % 2 == 1 && k == n + 1) {
    check_stencil_budget(ctx, n + 1);
    LogPolynomial Q = apply_Q(res.full(), ctx, n, n - 1);
    GridField F = Q.coeff(n - 1, 0);
    res.terms.set_term(n + 1, 1, -1.0 * F / double(n + 1));
    res.terms.normalize();
    if (res.terms.has(n + 1, 1)) res.provenance[{n + 1, 1}] = Provenance::Local;
    last = n + 1;
  }
  if (last >= 2) {
    LogPolynomial Q = apply_Q(res.full(), ctx, n, last - 1);
    double worst = 0;
    for (auto& [key, c] : Q.terms()) worst = std::max(worst, c.sup_norm());
    res.local_residual = worst;
    if (worst > 1e-6) throw NumericalFailure("local recursion left a residual of size " + std::to_string(worst));
  }
  return res;
}

GridField willmore_c41(const GridField& phi) {
  if (phi.grid().dims != 2) throw DimensionError("c_{4,1} closed form needs tangential dimension 2");
  auto D = fd_derivatives(phi, 1);
  GridField W = (GridField(1.0) + D.grad[0] * D.grad[0] + D.grad[1] * D.grad[1]).map([](double x) { return std::sqrt(x); });
  return -0.125 * W * willmore_residual(phi);
}

GridField willmore_c41(const AnalyticField& phi, const Grid& grid) {
  if (grid.dims != 2) throw DimensionError("c_{4,1} closed form needs tangential dimension 2");
  return GridField::sample(grid, [&](double a, double b) {
    auto g = analytic_geometry(phi, a, b, 2, 3);
    return -0.125 * g.W * g.willmore;
  });
}

ExpansionResult build_uk(const ExpansionResult& local, const std::vector<NonlocalCoeff>& nonlocal, int k) {
  ExpansionResult out = local;
  out.order = k;
  out.terms = lp_truncate(local.terms, LogPolynomial::kExact);
  out.terms.set_trunc_order(LogPolynomial::kExact);
  std::map<TermKey, int> seen;
  const int n = local.n;
  const int mh = local.m_high;
  for (auto& c : nonlocal) {
    if (c.i < mh) throw ValidationError("nonlocal coefficients start at order " + std::to_string(mh));
    if (c.j < 0 || c.j > (c.i - 1) / (mh - 1))
      throw ValidationError("log power " + std::to_string(c.j) + " at order " + std::to_string(c.i) +
                            " violates the log-power bound");
    if (seen.count({c.i, c.j}) || local.provenance.count({c.i, c.j}))
      throw ValidationError("duplicate coefficient (" + std::to_string(c.i) + "," + std::to_string(c.j) + ")");
    seen[{c.i, c.j}] = 1;
    out.terms.add_term(c.i, c.j, c.c);
    out.provenance[{c.i, c.j}] = c.tag;
  }
  (void)n;
  out.terms.set_trunc_order(k);
  out.terms.normalize();
  for (auto it = out.provenance.begin(); it != out.provenance.end();)
    it = out.terms.has(it->first.i, it->first.j) || it->first.i <= k ? std::next(it) : out.provenance.erase(it);
  return out;
}

FGraphCoeffs f_graph_coeffs(const GridField& H, const std::optional<GridField>& K, int n,
                            const std::optional<GridField>& laplace_H) {
  if (n < 2) throw ValidationError("ambient dimension n must be at least 2");
  if (!(H.min() > 0)) throw PositivityError("mean curvature must be positive everywhere");
  FGraphCoeffs out;
  out.a1 = H.map([](double h) { return std::sqrt(2.0 / h); });
  out.m_low = -1;
  out.m_high = n;
  out.p = -(n - 2);
  out.q = -n;
  if (n == 3) {
    if (!K) throw ValidationError("a_{3,1} needs the Gauss curvature");
    GridField lap = laplace_H ? *laplace_H : fd_laplacian(H);
    GridField bracket = lap + 2.0 * H * (H * H - *K);
    out.a31 = GridField::zip(bracket, H, [](double b, double h) { return b / (4 * std::sqrt(2.0) * std::pow(h, 2.5)); });
  }
  return out;
}

}  // namespace hypexp
