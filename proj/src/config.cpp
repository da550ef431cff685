#include "hypexp/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hypexp/analytic_field.hpp"
#include "hypexp/errors.hpp"
#include "hypexp/format.hpp"

namespace hypexp {

namespace {

struct Key {
  std::string section;
  std::string name;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ValidationError("'" + key + "' expects a number, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ValidationError("'" + key + "' expects an integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ValidationError("'" + key + "' expects true or false, got '" + v + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::pair<int, int>> to_orders(const std::string& key, const std::string& v) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ValidationError("'" + key + "' entries look like tau:m, got '" + item + "'");
    const int tau = to_int(key, item.substr(0, colon)), m = to_int(key, item.substr(colon + 1));
    if (tau < 0 || tau > 2 || m < 0 || m > 2) throw ValidationError("'" + key + "' allows tau, m in 0..2");
    out.emplace_back(tau, m);
  }
  if (out.empty()) throw ValidationError("'" + key + "' is empty");
  return out;
}

std::vector<Key> registry(ExperimentConfig& c) {
  auto d = [](const std::string& s, const std::string& n, double& x) {
    return Key{s, n, [&x, n](const std::string& v) { x = to_double(n, v); }, [&x] { return fmt17(x); }};
  };
  auto i = [](const std::string& s, const std::string& n, int& x) {
    return Key{s, n, [&x, n](const std::string& v) { x = to_int(n, v); }, [&x] { return std::to_string(x); }};
  };
  auto str = [](const std::string& s, const std::string& n, std::string& x) {
    return Key{s, n, [&x](const std::string& v) { x = v; }, [&x] { return x; }};
  };
  auto& p = c.problem;
  auto& m = c.mesh;
  auto& a = c.analysis;
  auto& ro = a.remainder;
  return {
      str("problem", "pipeline", p.pipeline),
      i("problem", "n", p.n),
      str("problem", "phi", p.phi),
      d("problem", "R", p.R),
      str("problem", "lateral_bc", p.lateral_bc),
      str("problem", "forcing", p.forcing),
      i("problem", "m_low", p.m_low),
      i("problem", "m_high", p.m_high),
      d("problem", "v_r", p.v_r),
      d("mesh", "r", m.r),
      d("mesh", "h", m.h),
      i("mesh", "M", m.M),
      d("mesh", "gamma", m.gamma),
      i("mesh", "j_min", m.j_min),
      i("mesh", "refinements", m.refinements),
      d("solver", "newton_tol", c.solver.newton_tol),
      i("solver", "max_iters", c.solver.max_iters),
      Key{"solver", "damping", [&c](const std::string& v) { c.solver.damping = to_bool("damping", v); },
          [&c] { return std::string(c.solver.damping ? "true" : "false"); }},
      d("solver", "lambda", c.solver.lambda),
      i("analysis", "k", a.k),
      Key{"analysis", "orders", [&a](const std::string& v) { a.orders = to_orders("orders", v); },
          [&a] {
            std::string s;
            for (auto& [tau, mm] : a.orders) s += (s.empty() ? "" : ",") + std::to_string(tau) + ":" + std::to_string(mm);
            return s;
          }},
      d("analysis", "alpha", ro.alpha),
      d("analysis", "tol", ro.tol),
      i("analysis", "j_max", ro.j_max),
      d("analysis", "t_lo", ro.t_lo),
      d("analysis", "t_hi", ro.t_hi),
      d("analysis", "mask", ro.mask),
      d("analysis", "noise", ro.noise),
      str("analysis", "nonlocal", a.nonlocal),
      str("analysis", "input", a.input),
      str("output", "dir", c.output.dir),
  };
}

Key& find_key(std::vector<Key>& keys, const std::string& section, const std::string& name) {
  for (auto& k : keys)
    if (k.name == name && (section.empty() || k.section == section)) return k;
  throw ValidationError("unknown configuration key '" + (section.empty() ? name : section + "." + name) + "'");
}

void validate(const ExperimentConfig& c) {
  const auto& p = c.problem;
  if (p.n < 2) throw ValidationError("n must be at least 2");
  AnalyticField::parse(p.phi);
  if (p.lateral_bc != "oracle" && p.lateral_bc != "expansion")
    throw ValidationError("lateral_bc must be 'oracle' or 'expansion'");
  if (p.forcing != "graph") AnalyticField::parse(p.forcing);
  if (!(c.mesh.r > 0)) throw ValidationError("r must be positive");
  if (c.mesh.h < 0 || c.mesh.h > c.mesh.r) throw ValidationError("h must lie in (0, r]");
  if (c.mesh.M < 3) throw ValidationError("M must be at least 3");
  if (!(c.mesh.gamma >= 1)) throw ValidationError("gamma must be at least 1");
  if (c.mesh.j_min < 1 || c.mesh.j_min > c.mesh.M - 2) throw ValidationError("j_min must lie in 1..M-2");
  if (c.mesh.refinements < 1) throw ValidationError("refinements must be at least 1");
  if (!(c.solver.newton_tol > 0)) throw ValidationError("newton_tol must be positive");
  if (c.solver.max_iters < 0) throw ValidationError("max_iters must be non-negative");
  if (!(c.solver.lambda > 0)) throw ValidationError("lambda must be positive");
  const auto& ro = c.analysis.remainder;
  if (c.analysis.k < 0 || (c.analysis.k > 0 && c.analysis.k < 2)) throw ValidationError("k must be at least 2");
  if (!(ro.alpha > 0 && ro.alpha < 1)) throw ValidationError("alpha must lie in (0, 1)");
  if (!(ro.tol >= 0)) throw ValidationError("tol must be non-negative");
  if (ro.j_max < 0) throw ValidationError("j_max must be non-negative");
  if (!(ro.noise >= 0)) throw ValidationError("noise must be non-negative");
  if (c.analysis.nonlocal != "zero" && c.analysis.nonlocal != "fitted")
    throw ValidationError("nonlocal must be 'zero' or 'fitted'");
  if (!p.pipeline.empty()) validate_for(c, p.pipeline);
}

void apply_override(std::vector<Key>& keys, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) throw UsageError("overrides look like key=value, got '" + item + "'");
  std::string key = trim(item.substr(0, eq)), section;
  if (auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  find_key(keys, section, key).set(trim(item.substr(eq + 1)));
}

ExperimentConfig parse_stream(std::istream& in, const std::vector<std::string>& overrides) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError("malformed configuration: " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  ExperimentConfig c;
  auto keys = registry(c);
  for (auto& [name, node] : tree) {
    if (node.empty()) {
      find_key(keys, "", name).set(node.data());
      continue;
    }
    if (name != "problem" && name != "mesh" && name != "solver" && name != "analysis" && name != "output")
      throw ValidationError("unknown configuration section '" + name + "'");
    for (auto& [key, leaf] : node) find_key(keys, name, key).set(leaf.data());
  }
  for (auto& o : overrides) apply_override(keys, o);
  validate(c);
  return c;
}

}  // namespace

double ExperimentConfig::radius() const {
  if (problem.R > 0) return problem.R;
  auto f = AnalyticField::parse(problem.phi);
  if (f.kind() != AnalyticField::Kind::SphereCap)
    throw ValidationError("oracle lateral data needs R or a sphere_cap phi");
  return f.param(0);
}

std::vector<std::string> ExperimentConfig::echo() const {
  ExperimentConfig copy = *this;
  std::vector<std::string> out;
  for (auto& k : registry(copy)) out.push_back(k.section + "." + k.name + " = " + k.get());
  return out;
}

ExperimentConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("configuration file not found: " + path);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read configuration file: " + path);
  return parse_stream(in, overrides);
}

ExperimentConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
  std::istringstream in(text);
  return parse_stream(in, overrides);
}

void validate_for(const ExperimentConfig& c, const std::string& command) {
  if (command == "solve" || command == "fit" || command == "verify") {
    if (c.problem.n != 2 && c.problem.n != 3) throw ValidationError("the " + command + " pipeline supports n = 2 and n = 3");
    if (c.problem.lateral_bc == "oracle") c.radius();
  } else if (command == "ode") {
    if (c.problem.forcing != "graph" && !(c.problem.m_low <= 0 && c.m_high() >= 2))
      throw ValidationError("indicial roots must satisfy m_low <= 0 and m_high >= 2");
  } else if (command != "expand") {
    throw UsageError("unknown pipeline '" + command + "'");
  }
}

}  // namespace hypexp
