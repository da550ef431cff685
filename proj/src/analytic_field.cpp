#include "hypexp/analytic_field.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "hypexp/errors.hpp"
#include "hypexp/format.hpp"

namespace hypexp {

AnalyticField AnalyticField::constant(double v) {
  AnalyticField f;
  f.kind_ = Kind::Constant;
  f.params_ = {v};
  return f;
}

AnalyticField AnalyticField::sphere_cap(double R) {
  if (!(R > 0)) throw ValidationError("sphere_cap radius must be positive");
  AnalyticField f;
  f.kind_ = Kind::SphereCap;
  f.params_ = {R};
  return f;
}

AnalyticField AnalyticField::polynomial(std::vector<Monomial> terms) {
  for (auto& m : terms)
    if (m.a < 0 || m.b < 0) throw ValidationError("polynomial powers must be non-negative");
  AnalyticField f;
  f.kind_ = Kind::Polynomial;
  f.mono_ = std::move(terms);
  return f;
}

AnalyticField AnalyticField::trig(double freq, double amp, double freq2) {
  AnalyticField f;
  f.kind_ = Kind::Trig;
  f.params_ = {freq, amp, freq2};
  return f;
}

namespace {

std::map<std::string, double> parse_params(const std::string& body, const std::string& spec) {
  std::map<std::string, double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("malformed field parameter in '" + spec + "'");
    std::string key = item.substr(0, eq);
    try {
      std::size_t used = 0;
      double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
      out[key] = v;
    } catch (const std::exception&) {
      throw ValidationError("non-numeric field parameter in '" + spec + "'");
    }
  }
  return out;
}

double take(std::map<std::string, double>& p, const std::string& key, double def, bool required,
            const std::string& spec) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (required) throw ValidationError("missing parameter '" + key + "' in '" + spec + "'");
    return def;
  }
  double v = it->second;
  p.erase(it);
  return v;
}

}  // namespace

AnalyticField AnalyticField::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  auto p = parse_params(colon == std::string::npos ? "" : spec.substr(colon + 1), spec);
  AnalyticField f;
  if (kind == "constant") {
    f = constant(take(p, "v", 0.0, false, spec));
  } else if (kind == "sphere_cap") {
    f = sphere_cap(take(p, "R", 1.0, true, spec));
  } else if (kind == "trig") {
    double freq = take(p, "freq", 1.0, false, spec);
    double amp = take(p, "amp", 0.1, false, spec);
    double freq2 = take(p, "freq2", 0.0, false, spec);
    f = trig(freq, amp, freq2);
  } else if (kind == "polynomial") {
    std::vector<Monomial> terms;
    for (auto& [key, v] : p) {
      if (key.size() < 2 || key.size() > 3 || key[0] != 'a' || !std::isdigit(key[1]) ||
          (key.size() == 3 && !std::isdigit(key[2])))
        throw ValidationError("polynomial keys look like a20 or a2: '" + key + "'");
      terms.push_back({key[1] - '0', key.size() == 3 ? key[2] - '0' : 0, v});
    }
    p.clear();
    f = polynomial(std::move(terms));
  } else {
    throw ValidationError("unknown field kind '" + kind + "'");
  }
  if (!p.empty()) throw ValidationError("unknown parameter '" + p.begin()->first + "' in '" + spec + "'");
  return f;
}

std::string AnalyticField::spec() const {
  switch (kind_) {
    case Kind::Constant:
      return "constant:v=" + fmt17(params_[0]);
    case Kind::SphereCap:
      return "sphere_cap:R=" + fmt17(params_[0]);
    case Kind::Trig:
      return "trig:freq=" + fmt17(params_[0]) + ",amp=" + fmt17(params_[1]) + ",freq2=" + fmt17(params_[2]);
    case Kind::Polynomial: {
      std::string s = "polynomial:";
      for (std::size_t k = 0; k < mono_.size(); ++k) {
        if (k) s += ',';
        s += "a" + std::to_string(mono_[k].a) + std::to_string(mono_[k].b) + "=" + fmt17(mono_[k].c);
      }
      return s;
    }
  }
  return "";
}

Jet AnalyticField::jet(double y1, double y2, int dims, int order) const {
  if (dims < 0 || dims > 2) throw DimensionError("analytic fields support 0 to 2 tangential dimensions");
  Jet x = Jet::variable(order, 0, y1);
  Jet y = dims == 2 ? Jet::variable(order, 1, y2) : Jet(order, 0.0);
  if (dims == 0) x = Jet(order, 0.0);
  switch (kind_) {
    case Kind::Constant:
      return Jet(order, params_[0]);
    case Kind::SphereCap: {
      const double R = params_[0];
      if (y1 * y1 + y2 * y2 >= R * R) throw DomainError("sphere_cap evaluated outside |y'| < R");
      return R - sqrt(R * R - x * x - y * y);
    }
    case Kind::Polynomial: {
      Jet s(order, 0.0);
      for (auto& m : mono_) {
        Jet term(order, m.c);
        for (int k = 0; k < m.a; ++k) term = term * x;
        for (int k = 0; k < m.b; ++k) term = term * y;
        s += term;
      }
      return s;
    }
    case Kind::Trig:
      return params_[1] * (sin(params_[0] * x) * cos(params_[2] * y));
  }
  return Jet(order);
}

double AnalyticField::value(double y1, double y2) const { return jet(y1, y2, 2, 0).value(); }

GridField AnalyticField::sample(const Grid& grid) const {
  if (grid.dims == 0) return GridField(value(0, 0));
  return GridField::sample(grid, [&](double a, double b) { return jet(a, b, grid.dims, 0).value(); });
}

}  // namespace hypexp
