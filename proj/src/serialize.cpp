#include "hypexp/serialize.hpp"

#include "hypexp/errors.hpp"
#include "json.hpp"

namespace hypexp {

using nlohmann::json;

namespace {

json grid_json(const Grid& g) {
  return {{"dims", g.dims}, {"n", g.n}, {"h", g.h}, {"origin", g.origin}};
}

Grid grid_from(const json& j) {
  Grid g;
  g.dims = j.at("dims").get<int>();
  if (g.dims < 0 || g.dims > 2) throw ValidationError("grid dims must be 0, 1 or 2");
  g.n = j.at("n").get<std::array<int, 2>>();
  g.h = j.at("h").get<std::array<double, 2>>();
  g.origin = j.at("origin").get<std::array<double, 2>>();
  return g;
}

json field_json(const GridField& f) {
  if (f.is_constant()) return f[0];
  return f.values();
}

GridField field_from(const json& j, const Grid* g) {
  if (j.is_number()) return GridField(j.get<double>());
  if (!j.is_array()) throw ValidationError("coefficient must be a number or an array");
  if (!g) throw ValidationError("array coefficient without a grid");
  auto v = j.get<std::vector<double>>();
  if (v.size() != g->size()) throw ShapeError("coefficient length does not match the grid");
  return GridField(*g, std::move(v));
}

json logpoly_json(const LogPolynomial& p, const std::map<TermKey, Provenance>* prov) {
  json out;
  out["trunc_order"] = p.is_exact() ? json(nullptr) : json(p.trunc_order());
  const Grid g = p.grid();
  if (g.dims > 0) out["grid"] = grid_json(g);
  json terms = json::array();
  for (auto& [k, c] : p.terms()) {
    json t = {{"i", k.i}, {"j", k.j}, {"coeff", field_json(c)}};
    if (prov) {
      auto it = prov->find(k);
      t["provenance"] = to_string(it == prov->end() ? Provenance::Local : it->second);
    }
    terms.push_back(std::move(t));
  }
  out["terms"] = std::move(terms);
  return out;
}

LogPolynomial logpoly_from(const json& j, std::map<TermKey, Provenance>* prov) {
  LogPolynomial p;
  const json& tr = j.at("trunc_order");
  p.set_trunc_order(tr.is_null() ? LogPolynomial::kExact : tr.get<int>());
  Grid g;
  const bool has_grid = j.contains("grid");
  if (has_grid) g = grid_from(j.at("grid"));
  for (auto& t : j.at("terms")) {
    TermKey k{t.at("i").get<int>(), t.at("j").get<int>()};
    if (k.j < 0) throw ValidationError("log power must be non-negative");
    p.set_term(k.i, k.j, field_from(t.at("coeff"), has_grid ? &g : nullptr));
    if (prov && t.contains("provenance")) (*prov)[k] = provenance_from_string(t.at("provenance").get<std::string>());
  }
  return p;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string logpoly_to_json(const LogPolynomial& p, int indent) { return logpoly_json(p, nullptr).dump(indent); }

LogPolynomial logpoly_from_json(const std::string& text) {
  try {
    return logpoly_from(parse(text), nullptr);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad log-polynomial JSON: ") + e.what());
  }
}

std::string expansion_to_json(const ExpansionResult& e, int indent) {
  json out;
  out["n"] = e.n;
  out["order"] = e.order;
  out["m_high"] = e.m_high;
  out["local_residual"] = e.local_residual;
  json phi = {{"dims", e.phi.dims}, {"analytic", e.phi.analytic}, {"value", field_json(e.phi.phi)}};
  if (!e.phi.phi.is_constant()) phi["grid"] = grid_json(e.phi.phi.grid());
  out["phi"] = std::move(phi);
  out["expansion"] = logpoly_json(e.terms, &e.provenance);
  out["warnings"] = e.warnings;
  return out.dump(indent);
}

ExpansionResult expansion_from_json(const std::string& text) {
  try {
    json j = parse(text);
    ExpansionResult e;
    e.n = j.at("n").get<int>();
    e.order = j.at("order").get<int>();
    e.m_high = j.at("m_high").get<int>();
    e.local_residual = j.value("local_residual", 0.0);
    const json& phi = j.at("phi");
    Grid g;
    const bool has_grid = phi.contains("grid");
    if (has_grid) g = grid_from(phi.at("grid"));
    e.phi = PhiContext::from_grid(field_from(phi.at("value"), has_grid ? &g : nullptr));
    e.terms = logpoly_from(j.at("expansion"), &e.provenance);
    if (j.contains("warnings")) e.warnings = j.at("warnings").get<std::vector<std::string>>();
    return e;
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("bad expansion JSON: ") + ex.what());
  }
}

}  // namespace hypexp
