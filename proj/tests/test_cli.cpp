#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wkgeom/runner.hpp"

using namespace wkgeom;
namespace fs = std::filesystem;

namespace {

std::string kMinimal = R"(seed = 9
[polytope]
type = "interval"
bounds = [-1.0, 1.0]
[weights.v]
family = "constant"
[weights.w]
family = "constant"
)";

ExperimentConfig config_for(const std::string& command, const std::string& extra = "") {
  ExperimentConfig cfg = parse_experiment_config(kMinimal + extra);
  cfg.command = command;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parser") {
  SECTION("round trips a full document") {
    const std::string text = R"(# comment
seed = 17
[polytope]
type = "interval"
bounds = [-2.0, 0.5]
[weights.v]
family = "power"
xi = [1.0]
c = 3.0
alpha = -0.5
[weights.w]
family = "affine"
xi = [0.25]
c = 1.0
[potentials.bump]
coeffs = [0.0, 0.1, 0.2]
[command]
name = "energies"
f = "bump"
quad_order = 128
)";
    const ExperimentConfig cfg = parse_experiment_config(text);
    REQUIRE(cfg.seed == 17);
    REQUIRE(cfg.interval.a == -2.0);
    REQUIRE(cfg.command == "energies");
    REQUIRE(cfg.quad_order == 128);
    REQUIRE(cfg.potentials.at("bump").size() == 3);
    REQUIRE(cfg.v.family == WeightFamily::Power);
    REQUIRE(cfg.w.family == WeightFamily::Affine);
  }
  SECTION("unknown keys are rejected") {
    REQUIRE_THROWS_AS(parse_experiment_config(kMinimal + "[command]\nname = \"extremal\"\nbogus = 1\n"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_experiment_config(kMinimal + "[mystery]\nx = 1\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_experiment_config("seed = -3\n"), ConfigError);
  }
  SECTION("unknown command and malformed values are rejected") {
    REQUIRE_THROWS_AS(parse_experiment_config(kMinimal + "[command]\nname = \"fly\"\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_experiment_config("seed = banana\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_experiment_config("[polytope]\ntype = \"interval\"\nbounds = [1.0, -1.0]\n"),
                      ConfigError);
  }
  SECTION("nested facet arrays") {
    const std::string text = R"([polytope]
type = "polygon2d"
facets = [[1, 0, 0.0], [0, 1, 0.0], [-1, -1, 1.0]]
[weights.v]
family = "constant"
[weights.w]
family = "constant"
)";
    const ExperimentConfig cfg = parse_experiment_config(text);
    REQUIRE_FALSE(cfg.is_interval);
    REQUIRE(cfg.facets.size() == 3);
    REQUIRE(cfg.facets[2].normal[0] == -1);
  }
}

TEST_CASE("extremal command summary carries the spec keys") {
  const RunReport rep = run(config_for("extremal"));
  REQUIRE(rep.summary["c_vw"].get<double>() == Catch::Approx(2.0).epsilon(1e-12));
  REQUIRE(rep.summary["ell"]["a"].get<double>() == Catch::Approx(2.0).epsilon(1e-10));
  REQUIRE(std::abs(rep.summary["ell"]["b"].get<double>()) < 1e-12);
  REQUIRE(rep.summary["residual_sup"].get<double>() <= 1e-9);
  REQUIRE(rep.all_pass());
  REQUIRE(rep.csv.front() == "mu,H,Scal_v,ell_w");
}

TEST_CASE("every command is exposed and runs") {
  const std::string pots = R"([potentials.p0]
coeffs = [0.0, 0.05, 0.1]
[potentials.p1]
coeffs = [0.0, -0.06, 0.12]
)";
  for (const std::string cmd :
       {"polytope-info", "extremal", "energies", "geodesic-scan", "convexity", "subslope",
        "epsgeo"}) {
    ExperimentConfig cfg = parse_experiment_config(
        kMinimal + pots + "[command]\nf = \"p0\"\nf0 = \"p0\"\nf1 = \"p1\"\ndraws = 3\ngrid_mu = 17\ngrid_t = 17\n");
    cfg.command = cmd;
    const RunReport rep = run(cfg);
    REQUIRE(rep.all_pass());
    REQUIRE_FALSE(rep.csv.empty());
    REQUIRE(rep.summary.contains("provenance"));
  }
}

TEST_CASE("infeasibility classification for exit codes") {
  ExperimentConfig cfg = config_for("extremal");
  cfg.v.family = WeightFamily::Power;
  cfg.v.params.xi = {1.0};
  cfg.v.params.c = 0.5;  // base nonpositive at mu = -1
  cfg.v.params.require_positive = true;
  try {
    run(cfg);
    FAIL("expected NotPositiveOnP");
  } catch (const Error& e) {
    REQUIRE(is_infeasibility(e));
  }
}

TEST_CASE("outputs are byte-identical across repeated runs") {
  const fs::path dir1 = fs::temp_directory_path() / "wkgeom_cli_a";
  const fs::path dir2 = fs::temp_directory_path() / "wkgeom_cli_b";
  fs::create_directories(dir1);
  fs::create_directories(dir2);
  ExperimentConfig cfg = config_for("convexity");
  cfg.draws = 3;
  cfg.samples = 11;
  write_outputs(run(cfg), dir1.string());
  write_outputs(run(cfg), dir2.string());
  REQUIRE(slurp(dir1 / "convexity.csv") == slurp(dir2 / "convexity.csv"));
  REQUIRE(slurp(dir1 / "convexity_summary.json") == slurp(dir2 / "convexity_summary.json"));
  REQUIRE_FALSE(slurp(dir1 / "convexity.csv").empty());
}

TEST_CASE("geodesic-scan CSV has the documented columns") {
  const std::string pots = R"([potentials.p0]
coeffs = [0.0, 0.05]
[potentials.p1]
coeffs = [0.0, -0.05, 0.08]
)";
  ExperimentConfig cfg = parse_experiment_config(
      kMinimal + pots + "[command]\nname = \"geodesic-scan\"\nf0 = \"p0\"\nf1 = \"p1\"\nsamples = 9\n");
  const RunReport rep = run(cfg);
  REQUIRE(rep.csv.front() == "t,E_w,E_vRic,H_v,M,M_rel,d2M");
  REQUIRE(rep.csv.size() == 10);
  REQUIRE(rep.summary.contains("distance"));
}

TEST_CASE("seeded rng reproduces draw sequences") {
  CounterRng a(2024), b(2024);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());
  CounterRng c(2025);
  bool differs = false;
  for (int i = 0; i < 10; ++i) differs = differs || (a.next_u64() != c.next_u64());
  REQUIRE(differs);
}
