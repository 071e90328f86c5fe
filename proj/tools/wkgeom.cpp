// wkgeom: numerical experiments with weighted extremal metrics, energy
// functionals and geodesics on toric momentum intervals and 2-D Delzant
// polytopes.  See README.md for the configuration format.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wkgeom/runner.hpp"

namespace {

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, std::uint64_t seed, bool seed_set,
                double tol_scale) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config '" << config_path << "'\n";
    return 4;
  }
  std::stringstream ss;
  ss << in.rdbuf();

  wkgeom::ExperimentConfig cfg;
  try {
    cfg = wkgeom::parse_experiment_config(ss.str());
    if (cfg.command.empty()) {
      cfg.command = command;
    } else if (cfg.command != command) {
      throw wkgeom::ConfigError("config command '" + cfg.command +
                                "' does not match CLI command '" + command + "'");
    }
    if (seed_set) cfg.seed = seed;
    cfg.tol_scale = tol_scale;
    if (!(cfg.tol_scale > 0)) throw wkgeom::ConfigError("--tol-scale must be positive");
  } catch (const wkgeom::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 4;
  }

  try {
    const wkgeom::RunReport rep = wkgeom::run(cfg);
    wkgeom::write_outputs(rep, out_dir);
    for (const auto& v : rep.verdicts)
      std::printf("[%s] %s (margin %.3e)\n", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.margin);
    if (!rep.all_pass()) return 2;
    return 0;
  } catch (const wkgeom::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 4;
  } catch (const wkgeom::Error& e) {
    if (wkgeom::is_infeasibility(e)) {
      std::cerr << "infeasible: " << wkgeom::error_name(e) << ": " << e.what() << "\n";
      return 3;
    }
    std::cerr << "verdict/invariant failure: " << wkgeom::error_name(e) << ": " << e.what()
              << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted Kahler geometry experiments on toric polytopes"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tol_scale = 1.0;

  const std::vector<std::string> names = {"polytope-info", "extremal",  "energies",
                                          "geodesic-scan", "convexity", "subslope",
                                          "epsgeo"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (default: .)");
    sub->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->add_option("--tol-scale", tol_scale, "multiply all verdict tolerances");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // help text, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;  // configuration error
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return run_command(command, config_path, out_dir, seed, seed_set, tol_scale);
}
