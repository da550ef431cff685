#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hypexp/config.hpp"
#include "hypexp/errors.hpp"
#include "hypexp/pipeline.hpp"
#include "hypexp/serialize.hpp"

using namespace hypexp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / "hypexp_test_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig hemisphere_config(const fs::path& out, int n = 2) {
  auto cfg = parse_config_text("n=" + std::to_string(n) + "\nphi=sphere_cap:R=1\n");
  cfg.output.dir = out.string();
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HYPEXP_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("minimal configuration takes defaults") {
  auto cfg = parse_config_text("n=2\nphi=sphere_cap:R=1\n");
  CHECK(cfg.problem.n == 2);
  CHECK(cfg.mesh.r == 0.3);
  CHECK(cfg.mesh.M == 64);
  CHECK(cfg.mesh.gamma == 2);
  CHECK(cfg.solver.newton_tol == 1e-10);
  CHECK(cfg.k() == 3);
  CHECK(cfg.radius() == 1.0);
  CHECK(cfg.analysis.orders.size() == 6);
  CHECK(cfg.analysis.remainder.alpha == 0.5);
}

TEST_CASE("sections, overrides and mesh formula") {
  auto cfg = parse_config_text(
      "[problem]\nn = 3\nphi = trig:freq=1,amp=0.1\n[mesh]\nr = 0.2\ngamma = 2.0\nM = 128\n"
      "[solver]\ndamping = false\n[analysis]\norders = 0:0,1:2\n[output]\ndir = x\n",
      {"mesh.M=100", "max_iters=5"});
  CHECK(cfg.problem.n == 3);
  CHECK_FALSE(cfg.solver.damping);
  CHECK(cfg.solver.max_iters == 5);
  CHECK(cfg.analysis.orders == std::vector<std::pair<int, int>>{{0, 0}, {1, 2}});
  CHECK(cfg.output.dir == "x");
  CHECK(cfg.mesh.M == 100);

  auto c128 = parse_config_text("gamma=2.0\nM=128\n");
  auto mesh = pipeline_mesh(c128);
  for (int j = 1; j <= 128; j += 9) CHECK(mesh.t[j] == doctest::Approx(0.3 * std::pow(j / 128.0, 2)).epsilon(1e-14));
  CHECK(mesh.t[0] == 0.0);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse_config_text("n=5\npipeline=solve\n"), ValidationError);
  CHECK_NOTHROW(parse_config_text("n=5\npipeline=expand\n"));
  CHECK_THROWS_AS(parse_config_text("n=1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("bogus=1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("[mesh]\nn=2\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("[extra]\nn=2\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("M=many\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("alpha=1.5\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("phi=cone:R=1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("", {"n"}), UsageError);
  CHECK_THROWS_AS(parse_config("/nonexistent/hypexp.ini"), UsageError);
  CHECK_THROWS_AS(parse_config_text("n=2\nphi=trig:freq=1\npipeline=verify\n"), ValidationError);
}

TEST_CASE("expand writes the sphere cap coefficients") {
  auto dir = scratch("expand");
  auto cfg = hemisphere_config(dir, 3);
  cfg.analysis.k = 4;
  auto out = run_pipeline(cfg, "expand");
  REQUIRE(out.exit_code == kExitOk);
  auto e = expansion_from_json(slurp(dir / "coefficients.json"));
  CHECK(e.n == 3);
  const auto& g = e.terms.grid();
  std::size_t origin = 0;
  for (std::size_t y = 0; y < g.size(); ++y)
    if (g.radius(y) < g.radius(origin)) origin = y;
  CHECK(g.radius(origin) < 1e-12);
  CHECK(e.terms.coeff(2)[origin] == doctest::Approx(0.5).epsilon(1e-4));
  INFO("masked c41 " << e.terms.coeff(4, 1).sup_norm_masked(0.15));
  CHECK(e.terms.coeff(4, 1).sup_norm_masked(0.15) < 1e-3);
  CHECK(fs::exists(dir / "manifest.txt"));
}

TEST_CASE("solve failure maps to exit code 2") {
  auto dir = scratch("solve_fail");
  auto cfg = hemisphere_config(dir);
  cfg.solver.max_iters = 1;
  auto out = run_pipeline(cfg, "solve");
  CHECK(out.exit_code == kExitNumerical);
  CHECK(slurp(dir / "manifest.txt").find("exit_code = 2") != std::string::npos);
}

TEST_CASE("solve writes a convergence report") {
  auto dir = scratch("solve");
  auto cfg = hemisphere_config(dir);
  cfg.mesh.M = 32;
  cfg.mesh.h = 0.6 / 32;
  cfg.mesh.refinements = 3;
  REQUIRE(run_pipeline(cfg, "solve").exit_code == kExitOk);
  auto conv = slurp(dir / "convergence.json");
  const auto at = conv.find("\"slope\": ");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(conv.substr(at + 9)) == doctest::Approx(2).epsilon(0.1));
  auto csv = slurp(dir / "solution.csv");
  CHECK(csv.rfind("y1,t,u\n", 0) == 0);
}

TEST_CASE("pipelines are deterministic") {
  for (std::string command : {"expand", "solve", "ode", "fit", "verify"}) {
    auto a = scratch(command + "_a"), b = scratch(command + "_b");
    REQUIRE(run_pipeline(hemisphere_config(a), command).exit_code == kExitOk);
    REQUIRE(run_pipeline(hemisphere_config(b), command).exit_code == kExitOk);
    for (auto& entry : fs::directory_iterator(a)) {
      const auto name = entry.path().filename();
      if (name == "manifest.txt") continue;
      INFO(command << " " << name.string());
      CHECK(slurp(entry.path()) == slurp(b / name));
    }
  }
}

TEST_CASE("verify passes on the hemisphere suite") {
  auto dir = scratch("verify");
  auto out = run_pipeline(hemisphere_config(dir), "verify");
  CHECK(out.exit_code == kExitOk);
  auto report = slurp(dir / "verify_report.csv");
  CHECK(report.find(",fail\n") == std::string::npos);
  CHECK(report.find("remainder tau=1 m=2") != std::string::npos);
}

TEST_CASE("fit reads a samples file") {
  auto dir = scratch("fit_input");
  {
    std::ofstream s(dir / "samples.csv");
    s << "t,value\n";
    for (int q = 0; q < 20; ++q) {
      const double t = 1e-4 * std::pow(1e3, q / 19.0);
      s << t << "," << 2 * std::pow(t, 3) << "\n";
    }
  }
  auto cfg = hemisphere_config(dir);
  cfg.analysis.input = (dir / "samples.csv").string();
  REQUIRE(run_pipeline(cfg, "fit").exit_code == kExitOk);
  auto report = slurp(dir / "fit_report.csv");
  CHECK(report.rfind("tau,m,gamma,j,C,pass\n,,", 0) == 0);
  CHECK(std::stod(report.substr(report.find("\n,,") + 3)) == doctest::Approx(3).epsilon(1e-6));
}

TEST_CASE("command-line exit codes") {
  auto dir = scratch("binary");
  {
    std::ofstream c(dir / "c.ini");
    c << "[problem]\nn = 2\nphi = sphere_cap:R=1\n";
  }
  const std::string base = "--config " + (dir / "c.ini").string() + " --out " + (dir / "out").string();
  CHECK(run_cli(base + " expand") == 0);
  CHECK(fs::exists(dir / "out" / "coefficients.json"));
  CHECK(run_cli(base + " --override solver.max_iters=1 solve") == 2);
  CHECK(run_cli(base + " --override n=5 solve") == 3);
  CHECK(run_cli(base + " --override pipeline=verify") == 0);
  CHECK(run_cli("--config " + (dir / "missing.ini").string() + " expand") == 1);
  CHECK(run_cli(base) == 1);
  CHECK(run_cli("--no-such-flag") == 1);
  CHECK(run_cli("--help") == 0);
}
