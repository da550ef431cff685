// Command-line runner for the hypexp pipelines.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypexp/config.hpp"
#include "hypexp/errors.hpp"
#include "hypexp/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace hypexp;
  CLI::App app{"Boundary expansions of minimal graphs in hyperbolic space"};
  app.require_subcommand(0, 1);
  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--override", overrides, "key=value or section.key=value (repeatable)")->take_all();
  for (const char* name : {"expand", "solve", "ode", "fit", "verify"}) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto cfg = config_path.empty() ? parse_config_text("", overrides) : parse_config(config_path, overrides);
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    std::string command = cfg.problem.pipeline;
    if (auto subs = app.get_subcommands(); !subs.empty()) command = subs.front()->get_name();
    if (command.empty()) throw UsageError("no pipeline given on the command line or in the configuration");
    auto outcome = run_pipeline(cfg, command);
    if (outcome.exit_code != kExitOk) std::cerr << "hypexp: " << outcome.message << "\n";
    for (auto& a : outcome.artifacts) std::cout << a << "\n";
    return outcome.exit_code;
  } catch (const UsageError& e) {
    std::cerr << "hypexp: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    std::cerr << "hypexp: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "hypexp: " << e.what() << "\n";
    return kExitValidation;
  }
}
