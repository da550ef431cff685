#pragma once

#include <string>

#include "hypexp/expansion.hpp"
#include "hypexp/log_polynomial.hpp"

namespace hypexp {

/// JSON form of a log-polynomial. `trunc_order` is null for exact values;
/// coefficients are numbers when constant and value arrays over the shared
/// "grid" object otherwise.
std::string logpoly_to_json(const LogPolynomial& p, int indent = 2);
LogPolynomial logpoly_from_json(const std::string& text);

/// Expansion with per-term provenance and the boundary data it was built from.
/// Derivatives of phi are recomputed by finite differences on load.
std::string expansion_to_json(const ExpansionResult& e, int indent = 2);
ExpansionResult expansion_from_json(const std::string& text);

}  // namespace hypexp
