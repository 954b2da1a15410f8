#include "dersizer/cli.hpp"
#include "dersizer/config.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dersizer;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(testing::TempDir()) / ("dersizer_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path path = dir / "config.json";
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(DERSIZER_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string kWeekly = DERSIZER_SOURCE_DIR "/configs/weekly.json";

}  // namespace

TEST(Config, EmptyObjectGivesDefaults) {
  const AppConfig c = parse_config("{}");
  EXPECT_EQ(c.seed, 2016U);
  EXPECT_EQ(c.horizon, 8760);
  EXPECT_EQ(c.renewables.size(), 2U);
  EXPECT_EQ(c.biomass_kw, 500.0);
  EXPECT_EQ(c.lole_threshold, 0.1);
  EXPECT_EQ(c.sweep_fractions.size(), 6U);
  EXPECT_TRUE(c.costs.natural_gas.is_fuel_powered);
  EXPECT_TRUE(c.costs.pv.is_renewable);
}

TEST(Config, UnknownKeysNameTheField) {
  EXPECT_EQ(field_of(R"({"sead": 1})"), "sead");
  EXPECT_EQ(field_of(R"({"load": {"peak": 1}})"), "load.peak");
  EXPECT_EQ(field_of(R"({"planner": {"biomass": 1}})"), "planner.biomass");
  EXPECT_EQ(field_of(R"({"renewables": [{"technology": "pv", "rating": 3}]})"), "renewables[0].rating");
}

TEST(Config, InvalidValuesNameTheField) {
  EXPECT_EQ(field_of(R"({"planner": {"lole_threshold": 0}})"), "planner.lole_threshold");
  EXPECT_EQ(field_of(R"({"reliability": {"trials": 0}})"), "reliability.trials");
  EXPECT_EQ(field_of(R"({"renewables": [{"technology": "hydro"}]})"), "renewables[0].technology");
  EXPECT_EQ(field_of(R"({"sweep": {"fractions": [0.5, 0.2]}})"), "sweep.fractions");
  EXPECT_EQ(field_of(R"({"horizon": "long"})"), "horizon");
  EXPECT_EQ(field_of("{not json"), "<config>");
}

TEST(Config, EffectiveConfigRoundTrips) {
  AppConfig c = load_config(kWeekly);
  const std::string once = effective_config_json(c);
  const AppConfig again = parse_config(once);
  EXPECT_EQ(effective_config_json(again), once);
  EXPECT_EQ(again.horizon, 168);
  EXPECT_EQ(again.counted_renewable_fraction, 0.8);
}

TEST(Config, MeasuredProfilesMustBeComplete) {
  EXPECT_EQ(field_of(R"({"load": {"csv": "load.csv"}})"), "renewables[0].csv");
}

TEST(Config, MeasuredProfilesDriveThePlanner) {
  const fs::path dir = scratch("measured");
  {
    std::ofstream load(dir / "load.csv");
    std::ofstream pv(dir / "pv.csv");
    load << "timestamp,power_kw\n";
    pv << "timestamp,power_kw\n";
    for (int h = 0; h < 48; ++h) {
      load << h << ',' << 800 + 200 * (h % 24 > 12) << '\n';
      pv << h << ',' << (h % 24 > 6 && h % 24 < 18 ? 300 : 0) << '\n';
    }
  }
  const fs::path path = write_config(dir, R"({"horizon": 48, "load": {"csv": "load.csv"},
      "renewables": [{"technology": "pv", "rated_kw": 400, "csv": "pv.csv"}]})");
  const PlannerConfig pc = build_planner_config(load_config(path.string()));
  ASSERT_TRUE(pc.load_series.has_value());
  EXPECT_EQ(pc.load_series->size(), 48);
  EXPECT_EQ(pc.renewable_profiles.size(), 1U);
  const Planner planner(pc);
  EXPECT_EQ(planner.net_load()[12], 800.0 - 300.0);
  EXPECT_EQ(planner.scenarios().size(), 1U);
}

TEST(Cli, ParseCommand) {
  EXPECT_EQ(parse_command("reliability-curve"), Command::reliability_curve);
  EXPECT_FALSE(parse_command("optimise").has_value());
  for (Command c : {Command::lcoe, Command::qfd, Command::reliability_curve, Command::plan, Command::sweep}) {
    EXPECT_EQ(parse_command(command_name(c)), c);
  }
}

TEST(Cli, QfdWritesTargets) {
  const fs::path out = scratch("qfd");
  std::ostringstream log;
  ASSERT_EQ(run({kWeekly, Command::qfd, out.string()}, log), kExitOk) << log.str();
  EXPECT_EQ(slurp(out / "qfd.csv"),
            "technology,absolute_target\nPV Panel,131\nWind Turbine,131\nBiomass Genset,153\n"
            "Natural Gas Genset,107\nNatural Gas Combustion Turbine,49\nCoal-Fired Power Plant,33\n");
  const auto result = nlohmann::json::parse(slurp(out / "result.json"));
  EXPECT_EQ(result["status"], "ok");
  EXPECT_TRUE(fs::exists(out / "effective_config.json"));
}

TEST(Cli, LcoeWritesOneCurvePerTechnology) {
  const fs::path out = scratch("lcoe");
  std::ostringstream log;
  ASSERT_EQ(run({kWeekly, Command::lcoe, out.string()}, log), kExitOk) << log.str();
  for (const char* name : {"pv", "wind", "biomass", "natural_gas"}) {
    EXPECT_TRUE(fs::exists(out / (std::string("lcoe_") + name + ".csv"))) << name;
  }
}

TEST(Cli, ConfigErrorsExitThree) {
  const fs::path dir = scratch("bad_config");
  std::ostringstream log;
  const fs::path bad = write_config(dir, R"({"planner": {"bogus": 1}})");
  EXPECT_EQ(run({bad.string(), Command::plan, (dir / "out").string()}, log), kExitConfig);
  EXPECT_NE(log.str().find("planner.bogus"), std::string::npos);
  EXPECT_EQ(run({(dir / "missing.json").string(), Command::qfd, (dir / "out").string()}, log), kExitConfig);
}

TEST(Cli, InfeasiblePlanExitsFour) {
  const fs::path dir = scratch("infeasible");
  const fs::path path = write_config(dir, R"({"horizon": 168, "reliability": {"trials": 200, "scenarios": 2,
      "prm_max": 0.02}, "pso": {"swarm_size": 5, "max_iterations": 3}, "planner": {"largest_genset_step_kw": 1000}})");
  std::ostringstream log;
  EXPECT_EQ(run({path.string(), Command::plan, (dir / "out").string()}, log), kExitInfeasible);
  const auto result = nlohmann::json::parse(slurp(dir / "out" / "result.json"));
  EXPECT_EQ(result["status"], "infeasible");
  EXPECT_FALSE(result["solution"]["feasible"].get<bool>());
}

TEST(Cli, PlanArtifactsAreByteIdenticalAcrossThreads) {
  const fs::path a = scratch("plan_a");
  const fs::path b = scratch("plan_b");
  std::ostringstream log;
  RunManifest m{kWeekly, Command::plan, a.string()};
  ASSERT_EQ(run(m, log), kExitOk) << log.str();
  m.output_dir = b.string();
  m.threads = 4;
  ASSERT_EQ(run(m, log), kExitOk) << log.str();
  for (const char* name : {"table.csv", "load.csv", "net_load.csv", "spectrum.csv", "genset_share.csv",
                           "bess_share.csv", "pso_trace.csv", "result.json"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
}

TEST(Cli, SeedOverrideChangesTheRun) {
  const fs::path a = scratch("seed_a");
  const fs::path b = scratch("seed_b");
  std::ostringstream log;
  RunManifest m{kWeekly, Command::plan, a.string()};
  m.seed = 11;
  run(m, log);
  m.output_dir = b.string();
  m.seed = 12;
  run(m, log);
  EXPECT_NE(slurp(a / "load.csv"), slurp(b / "load.csv"));
  EXPECT_EQ(nlohmann::json::parse(slurp(a / "result.json"))["seed"], 11);
}

TEST(CliBinary, UsageErrorsExitTwo) {
  const fs::path out = scratch("binary");
  EXPECT_EQ(run_cli("plan"), kExitUsage);
  EXPECT_EQ(run_cli("frobnicate --config " + kWeekly + " --out " + out.string()), kExitUsage);
  EXPECT_EQ(run_cli("qfd --config " + kWeekly + " --out " + out.string() + " --threads 0"), kExitUsage);
  EXPECT_EQ(run_cli("--help"), kExitOk);
}

TEST(CliBinary, QfdRunsEndToEnd) {
  const fs::path out = scratch("binary_qfd");
  EXPECT_EQ(run_cli("qfd --config " + kWeekly + " --out " + out.string() + " --seed 3 --threads 2"), kExitOk);
  EXPECT_TRUE(fs::exists(out / "qfd.csv"));
}
