#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hypexp/pde_solver.hpp"
#include "hypexp/remainder.hpp"

namespace hypexp {

struct ExperimentConfig {
  struct Problem {
    /// Default command when none is given on the command line.
    std::string pipeline;
    int n = 2;
    std::string phi = "sphere_cap:R=1";
    /// Hemisphere radius for oracle lateral data; non-positive takes it from a sphere_cap phi.
    double R = 0;
    /// "oracle" or "expansion".
    std::string lateral_bc = "oracle";
    /// "graph" or an analytic field F(y') for the ode pipeline.
    std::string forcing = "graph";
    int m_low = 0;
    /// Non-positive selects n + 1.
    int m_high = 0;
    double v_r = 0;
  } problem;

  struct Mesh {
    double r = 0.3;
    /// Non-positive selects 2r / 32.
    double h = 0;
    int M = 64;
    double gamma = 2;
    int j_min = 1;
    int refinements = 1;
  } mesh;

  SolverConfig solver;

  struct Analysis {
    /// Non-positive selects n + 1.
    int k = 0;
    std::vector<std::pair<int, int>> orders{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 2}, {1, 2}};
    RemainderOptions remainder;
    /// "zero" or "fitted": source of the free coefficient c_{n+1}.
    std::string nonlocal = "zero";
    /// CSV of t,value samples for the fit pipeline; empty fits the solved field.
    std::string input;
  } analysis;

  struct Output {
    std::string dir = "out";
  } output;

  int k() const { return analysis.k > 0 ? analysis.k : problem.n + 1; }
  int m_high() const { return problem.m_high > 0 ? problem.m_high : problem.n + 1; }
  double h() const { return mesh.h > 0 ? mesh.h : 2 * mesh.r / 32; }
  int dims() const { return problem.n >= 3 ? 2 : 1; }
  double radius() const;

  /// Canonical "section.key = value" lines, one per key, in a fixed order.
  std::vector<std::string> echo() const;
};

/// Reads an INI file; keys may appear without a section header. Missing
/// files raise UsageError, bad values ValidationError.
ExperimentConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});
/// Same, from text.
ExperimentConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {});

/// Checks the constraints of one pipeline (n in {2, 3} for the solver pipelines).
void validate_for(const ExperimentConfig& cfg, const std::string& command);

}  // namespace hypexp
