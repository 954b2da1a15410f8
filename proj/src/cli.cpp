#include "dersizer/cli.hpp"

#include "dersizer/config.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

namespace dersizer {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  template <typename Writer>
  void write(const std::string& name, Writer&& writer) const {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + (dir_ / name).string() + "'");
    writer(out);
    if (!out) throw std::runtime_error("write failed for '" + (dir_ / name).string() + "'");
  }

  void write_text(const std::string& name, const std::string& text) const {
    write(name, [&](std::ostream& out) { out << text; });
  }

 private:
  fs::path dir_;
};

json cost_json(const AnnualizedCost& c) {
  return {{"capital", c.capital}, {"om", c.om}, {"fuel", c.fuel}, {"tax_credit", c.tax_credit}, {"total", c.total}};
}

json solution_json(const SizingSolution& s) {
  const auto& f = s.fleet;
  return {{"feasible", s.feasible},
          {"violation", s.violation},
          {"diagnostic", s.diagnostic},
          {"total_annualized_cost", s.total_annualized_cost},
          {"fleet",
           {{"pv_kw", f.pv_kw},
            {"wt_kw", f.wt_kw},
            {"biomass_kw", f.biomass_kw},
            {"ng_units_kw", f.ng_units_kw},
            {"genset_total_nominal_kw", f.genset_total_nominal_kw},
            {"largest_ng_kw", f.largest_ng_kw()},
            {"bess_power_kw", f.bess_power_kw},
            {"bess_energy_kwh", f.bess_energy_kwh}}},
          {"cost_breakdown",
           {{"pv", cost_json(s.cost_breakdown.pv)},
            {"wind", cost_json(s.cost_breakdown.wind)},
            {"biomass", cost_json(s.cost_breakdown.biomass)},
            {"natural_gas", cost_json(s.cost_breakdown.natural_gas)},
            {"bess", cost_json(s.cost_breakdown.bess)}}},
          {"reliability",
           {{"lole_days_per_year", s.achieved.lole_days_per_year},
            {"lole_half_width", s.achieved.lole_half_width},
            {"saifi_per_customer_year", s.achieved.saifi_per_customer_year},
            {"saifi_half_width", s.achieved.saifi_half_width}}},
          {"prm_used", s.prm_used},
          {"plg", s.plg},
          {"cutoff_frequency_cph", s.cutoff_frequency},
          {"cutoff_bin", s.cutoff_bin},
          {"largest_ng_limit_kw", s.largest_ng_limit_kw},
          {"supply_adequate", s.supply_adequate}};
}

json rounds_json(const std::vector<RoundLog>& rounds) {
  json out = json::array();
  for (const auto& r : rounds) {
    json candidates = json::array();
    for (const auto& c : r.candidates) {
      candidates.push_back(
          {{"cutoff_bin", c.cutoff_bin}, {"total_annualized_cost", c.total_annualized_cost}, {"feasible", c.feasible}});
    }
    out.push_back({{"round", r.round},
                   {"largest_ng_kw", r.largest_ng_kw},
                   {"pso_iterations", r.pso.iterations_run},
                   {"pso_evaluations", r.pso.evaluations},
                   {"pso_best_objective", r.pso.best_objective},
                   {"best", solution_json(r.best)},
                   {"candidates", candidates}});
  }
  return out;
}

std::string plg_tag(double plg) { return format_number(plg); }

int run_lcoe(const AppConfig& app, const OutputDir& out, json& result) {
  const std::pair<const char*, const CostParameters*> techs[] = {{"pv", &app.costs.pv},
                                                                  {"wind", &app.costs.wind},
                                                                  {"biomass", &app.costs.biomass},
                                                                  {"natural_gas", &app.costs.natural_gas}};
  for (const auto& [name, params] : techs) {
    const auto curve = lcoe_vs_cf_curve(*params, app.lcoe.rated_kw, app.lcoe.cf_grid);
    out.write(std::string("lcoe_") + name + ".csv", [&](std::ostream& o) { write_lcoe_csv(o, curve); });
    json points = json::array();
    for (const auto& p : curve) points.push_back({{"capacity_factor", p.capacity_factor}, {"lcoe", p.lcoe}});
    result["curves"][name] = points;
  }
  return kExitOk;
}

int run_qfd(const AppConfig& app, const OutputDir& out, json& result) {
  const Eigen::VectorXi score = qfd_score(app.qfd);
  out.write("qfd.csv", [&](std::ostream& o) {
    o << "technology,absolute_target\n";
    for (std::size_t t = 0; t < app.qfd.technologies.size(); ++t) {
      o << app.qfd.technologies[t] << ',' << score[static_cast<Index>(t)] << '\n';
    }
  });
  for (std::size_t t = 0; t < app.qfd.technologies.size(); ++t) {
    result["absolute_targets"][app.qfd.technologies[t]] = score[static_cast<Index>(t)];
  }
  return kExitOk;
}

int run_curve(const AppConfig& app, unsigned threads, const OutputDir& out, json& result) {
  const Planner planner(build_planner_config(app, threads));
  ReliabilityConfig base;
  base.net_load_scenarios = planner.scenarios();
  base.trials = app.reliability.trials;
  base.rng_seed = mix_seed(app.seed, 3);
  base.customers = app.reliability.customers;
  base.epoch_hours = app.reliability.epoch_hours;
  base.threads = threads;
  for (double plg_target : app.curve.plg_values) {
    const auto points = reliability_curve(base, app.curve.prm_grid, plg_target, app.curve.unit_forced_outage_rate);
    const std::string name = "reliability_curve_plg" + plg_tag(plg_target) + ".csv";
    out.write(name, [&](std::ostream& o) { write_curve_csv(o, points); });
    json rows = json::array();
    for (const auto& p : points) {
      rows.push_back({{"prm", p.prm},
                      {"lole", p.metrics.lole_days_per_year},
                      {"lole_hw", p.metrics.lole_half_width},
                      {"saifi", p.metrics.saifi_per_customer_year},
                      {"saifi_hw", p.metrics.saifi_half_width}});
    }
    result["curves"].push_back({{"plg", plg_target}, {"file", name}, {"points", rows}});
  }
  return kExitOk;
}

int run_plan(const AppConfig& app, unsigned threads, const OutputDir& out, json& result, std::ostream& log) {
  const Planner planner(build_planner_config(app, threads));
  const PlanResult plan_result = planner.plan();
  const SizingSolution& best = plan_result.best;

  out.write("table.csv", [&](std::ostream& o) {
    write_table_header(o);
    write_table_row(o, scenario_label(app.counted_renewable_fraction), best);
  });
  out.write("load.csv", [&](std::ostream& o) { write_series_csv(o, planner.load()); });
  out.write("net_load.csv", [&](std::ostream& o) { write_series_csv(o, planner.net_load()); });
  out.write("spectrum.csv", [&](std::ostream& o) { write_spectrum_csv(o, planner.splitter().spectrum()); });
  const SplitResult split = planner.splitter().split_at_bin(best.cutoff_bin);
  out.write("genset_share.csv", [&](std::ostream& o) { write_series_csv(o, split.genset_share); });
  out.write("bess_share.csv", [&](std::ostream& o) { write_series_csv(o, split.bess_share_ac); });
  for (const auto& r : plan_result.rounds) {
    if (r.largest_ng_kw == best.largest_ng_limit_kw) {
      out.write("pso_trace.csv", [&](std::ostream& o) { write_trace_csv(o, r.pso); });
      break;
    }
  }

  result["solution"] = solution_json(best);
  result["rounds"] = rounds_json(plan_result.rounds);
  if (!best.feasible) {
    log << "infeasible: " << best.diagnostic << '\n';
    return kExitInfeasible;
  }
  return kExitOk;
}

int run_sweep(const AppConfig& app, unsigned threads, const OutputDir& out, json& result, std::ostream& log) {
  const auto rows = sensitivity_sweep(build_planner_config(app, threads), app.sweep_fractions);
  out.write("table.csv", [&](std::ostream& o) {
    write_table_header(o);
    for (const auto& row : rows) write_table_row(o, scenario_label(row.counted_fraction), row.solution);
  });
  out.write("sweep_cost.csv", [&](std::ostream& o) {
    o << "renewable_fraction,annualized_cost\n";
    for (const auto& row : rows) {
      o << format_number(row.counted_fraction) << ',' << format_number(row.solution.total_annualized_cost) << '\n';
    }
  });
  bool all_feasible = true;
  for (const auto& row : rows) {
    result["sweep"].push_back({{"counted_renewable_fraction", row.counted_fraction},
                               {"scenario", scenario_label(row.counted_fraction)},
                               {"rounds", row.rounds},
                               {"solution", solution_json(row.solution)}});
    if (!row.solution.feasible) {
      all_feasible = false;
      log << "infeasible at fraction " << format_number(row.counted_fraction) << ": " << row.solution.diagnostic
          << '\n';
    }
  }
  return all_feasible ? kExitOk : kExitInfeasible;
}

}  // namespace

std::optional<Command> parse_command(const std::string& verb) {
  if (verb == "lcoe") return Command::lcoe;
  if (verb == "qfd") return Command::qfd;
  if (verb == "reliability-curve") return Command::reliability_curve;
  if (verb == "plan") return Command::plan;
  if (verb == "sweep") return Command::sweep;
  return std::nullopt;
}

std::string command_name(Command command) {
  switch (command) {
    case Command::lcoe:
      return "lcoe";
    case Command::qfd:
      return "qfd";
    case Command::reliability_curve:
      return "reliability-curve";
    case Command::plan:
      return "plan";
    case Command::sweep:
      return "sweep";
  }
  return "unknown";
}

int run(const RunManifest& manifest, std::ostream& log) {
  AppConfig app;
  try {
    app = load_config(manifest.config_path);
    if (manifest.seed) app.seed = *manifest.seed;
    if (manifest.command == Command::plan || manifest.command == Command::sweep ||
        manifest.command == Command::reliability_curve) {
      build_planner_config(app, manifest.threads);
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const unsigned threads = std::max(1u, manifest.threads);

  try {
    const OutputDir out{fs::path(manifest.output_dir)};
    out.write_text("effective_config.json", effective_config_json(app));

    json result;
    result["command"] = command_name(manifest.command);
    result["seed"] = app.seed;
    int status = kExitOk;
    switch (manifest.command) {
      case Command::lcoe:
        status = run_lcoe(app, out, result);
        break;
      case Command::qfd:
        status = run_qfd(app, out, result);
        break;
      case Command::reliability_curve:
        status = run_curve(app, threads, out, result);
        break;
      case Command::plan:
        status = run_plan(app, threads, out, result, log);
        break;
      case Command::sweep:
        status = run_sweep(app, threads, out, result, log);
        break;
    }
    result["status"] = status == kExitOk ? "ok" : "infeasible";
    out.write_text("result.json", result.dump(2) + "\n");
    if (manifest.verbosity > 0) log << command_name(manifest.command) << ": wrote " << manifest.output_dir << '\n';
    return status;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace dersizer
