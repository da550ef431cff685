#pragma once

#include <string>
#include <vector>

#include "hypexp/config.hpp"

namespace hypexp {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitValidation = 3 };

struct PipelineOutcome {
  int exit_code = kExitOk;
  std::string message;
  /// Paths of the files written, manifest last.
  std::vector<std::string> artifacts;
};

/// Runs expand, solve, ode, fit or verify and writes its artifacts under
/// cfg.output.dir. Library errors map to exit codes instead of escaping.
PipelineOutcome run_pipeline(const ExperimentConfig& cfg, const std::string& command);

/// Mesh of refinement level q: M 2^q normal intervals, spacing h / 2^q.
HalfStripMesh pipeline_mesh(const ExperimentConfig& cfg, int level = 0);

}  // namespace hypexp
