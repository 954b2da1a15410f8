#include "dersizer/config.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace dersizer {

using nlohmann::json;

namespace {

class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  template <typename T>
  bool field(const char* key, T& out);

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ConfigError(child(key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void read_value(const json& j, const std::string& path, double& out) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  out = j.get<double>();
}

void read_value(const json& j, const std::string& path, bool& out) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  out = j.get<bool>();
}

void read_value(const json& j, const std::string& path, std::string& out) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  out = j.get<std::string>();
}

template <typename Int>
  requires std::is_integral_v<Int>
void read_value(const json& j, const std::string& path, Int& out) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (j.is_number_unsigned()) {
      out = static_cast<Int>(j.get<std::uint64_t>());
      return;
    }
    if (j.get<std::int64_t>() < 0) throw ConfigError(path, "must be >= 0");
  }
  out = static_cast<Int>(j.get<std::int64_t>());
}

void read_value(const json& j, const std::string& path, std::vector<double>& out) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  out.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    double v = 0.0;
    read_value(j[i], path + "[" + std::to_string(i) + "]", v);
    out.push_back(v);
  }
}

void read_value(const json& j, const std::string& path, RenewableTechnology& out) {
  if (j == "pv") {
    out = RenewableTechnology::pv;
  } else if (j == "wind") {
    out = RenewableTechnology::wind;
  } else {
    throw ConfigError(path, "expected \"pv\" or \"wind\"");
  }
}

void read_value(const json& j, const std::string& path, BessDispatch& out) {
  if (j == "firm") {
    out = BessDispatch::firm;
  } else if (j == "energy_limited") {
    out = BessDispatch::energy_limited;
  } else {
    throw ConfigError(path, "expected \"firm\" or \"energy_limited\"");
  }
}

void read_value(const json& j, const std::string& path, LoadShapeOptions& o) {
  ObjectReader r(j, path);
  r.field("base_fraction", o.base_fraction);
  r.field("morning_fraction", o.morning_fraction);
  r.field("evening_fraction", o.evening_fraction);
  r.field("summer_cooling_fraction", o.summer_cooling_fraction);
  r.field("winter_heating_fraction", o.winter_heating_fraction);
  r.field("cooling_peak_hour", o.cooling_peak_hour);
  r.field("weekend_factor", o.weekend_factor);
  r.finish();
}

void read_value(const json& j, const std::string& path, LoadSpec& s) {
  ObjectReader r(j, path);
  r.field("peak_kw", s.peak_kw);
  r.field("noise_std_fraction", s.noise_std_fraction);
  r.field("shape", s.shape);
  r.field("csv", s.csv);
  r.finish();
}

void read_value(const json& j, const std::string& path, CloudAttenuation& c) {
  ObjectReader r(j, path);
  r.field("alpha", c.alpha);
  r.field("beta", c.beta);
  r.finish();
}

void read_value(const json& j, const std::string& path, WindRegime& w) {
  ObjectReader r(j, path);
  r.field("weibull_shape", w.weibull_shape);
  r.field("weibull_scale_ms", w.weibull_scale_ms);
  r.field("persistence", w.persistence);
  r.field("cut_in_ms", w.cut_in_ms);
  r.field("rated_speed_ms", w.rated_speed_ms);
  r.field("cut_out_ms", w.cut_out_ms);
  r.finish();
}

void read_value(const json& j, const std::string& path, RenewableSpec& s) {
  ObjectReader r(j, path);
  r.field("technology", s.technology);
  r.field("rated_kw", s.rated_kw);
  r.field("latitude_deg", s.latitude_deg);
  r.field("cloud", s.cloud);
  r.field("wind", s.wind);
  r.field("csv", s.csv);
  r.finish();
}

void read_value(const json& j, const std::string& path, std::vector<RenewableSpec>& out) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  out.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    RenewableSpec spec;
    read_value(j[i], path + "[" + std::to_string(i) + "]", spec);
    out.push_back(spec);
  }
}

void read_value(const json& j, const std::string& path, CostParameters& p) {
  ObjectReader r(j, path);
  r.field("overnight_capital_cost", p.overnight_capital_cost);
  r.field("fixed_om_cost", p.fixed_om_cost);
  r.field("variable_om_cost", p.variable_om_cost);
  r.field("fuel_price", p.fuel_price);
  r.field("heat_rate", p.heat_rate);
  r.field("leveling_factor", p.leveling_factor);
  r.field("ptc_rate", p.ptc_rate);
  r.field("discount_rate", p.discount_rate);
  r.field("lifetime_years", p.lifetime_years);
  r.field("is_renewable", p.is_renewable);
  r.field("is_fuel_powered", p.is_fuel_powered);
  r.field("efficiency", p.efficiency);
  r.field("energy_capital_cost", p.energy_capital_cost);
  r.finish();
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

void read_value(const json& j, const std::string& path, TechnologyCosts& c) {
  ObjectReader r(j, path);
  r.field("pv", c.pv);
  r.field("wind", c.wind);
  r.field("biomass", c.biomass);
  r.field("natural_gas", c.natural_gas);
  r.field("bess", c.bess);
  r.finish();
}

void read_value(const json& j, const std::string& path, BessParameters& b) {
  ObjectReader r(j, path);
  r.field("conversion_efficiency", b.conversion_efficiency);
  r.field("soc_max", b.soc_max);
  r.field("soc_min", b.soc_min);
  r.field("initial_energy_offset_kwh", b.initial_energy_offset_kwh);
  r.finish();
  try {
    validate(b);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

void read_value(const json& j, const std::string& path, PsoConfig& p) {
  ObjectReader r(j, path);
  r.field("swarm_size", p.swarm_size);
  r.field("max_iterations", p.max_iterations);
  r.field("inertia_weight", p.inertia_weight);
  r.field("cognitive_coeff", p.cognitive_coeff);
  r.field("social_coeff", p.social_coeff);
  r.field("velocity_clamp", p.velocity_clamp);
  r.field("stagnation_tolerance", p.stagnation_tolerance);
  r.field("stagnation_patience", p.stagnation_patience);
  r.finish();
  PsoConfig probe = p;
  probe.lower = Eigen::VectorXd::Zero(1);
  probe.upper = Eigen::VectorXd::Ones(1);
  try {
    validate(probe);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

void read_value(const json& j, const std::string& path, ReliabilitySettings& s) {
  ObjectReader r(j, path);
  r.field("trials", s.trials);
  r.field("scenarios", s.scenarios);
  r.field("epoch_hours", s.epoch_hours);
  r.field("genset_forced_outage_rate", s.genset_forced_outage_rate);
  r.field("bess_forced_outage_rate", s.bess_forced_outage_rate);
  r.field("bess_mode", s.bess_mode);
  r.field("customers", s.customers);
  r.field("prm_max", s.prm_max);
  r.field("prm_step", s.prm_step);
  r.field("plg_quantum", s.plg_quantum);
  r.finish();
  auto check = [&](bool ok, const char* key, const char* msg) {
    if (!ok) throw ConfigError(path + "." + key, msg);
  };
  check(s.trials >= 1, "trials", "must be >= 1");
  check(s.scenarios >= 1, "scenarios", "must be >= 1");
  check(s.epoch_hours > 0.0, "epoch_hours", "must be > 0");
  check(s.genset_forced_outage_rate >= 0.0 && s.genset_forced_outage_rate < 1.0, "genset_forced_outage_rate",
        "must be in [0, 1)");
  check(s.bess_forced_outage_rate >= 0.0 && s.bess_forced_outage_rate < 1.0, "bess_forced_outage_rate",
        "must be in [0, 1)");
  check(s.customers >= 1, "customers", "must be >= 1");
  check(s.prm_max >= 0.0, "prm_max", "must be >= 0");
  check(s.prm_step > 0.0, "prm_step", "must be > 0");
  check(s.plg_quantum > 0.0, "plg_quantum", "must be > 0");
}

void read_value(const json& j, const std::string& path, QfdMatrix& m) {
  ObjectReader r(j, path);
  json criteria, technologies;
  r.field("criteria", criteria);
  r.field("technologies", technologies);
  r.finish();
  QfdMatrix out;
  if (!criteria.is_array() || criteria.empty()) throw ConfigError(path + ".criteria", "expected a non-empty array");
  if (!technologies.is_array() || technologies.empty()) {
    throw ConfigError(path + ".technologies", "expected a non-empty array");
  }
  out.importance.resize(static_cast<Index>(criteria.size()));
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const std::string p = path + ".criteria[" + std::to_string(i) + "]";
    ObjectReader cr(criteria[i], p);
    std::string name;
    int importance = 0;
    cr.field("name", name);
    cr.field("importance", importance);
    cr.finish();
    if (importance < 1 || importance > 5) throw ConfigError(p + ".importance", "must be in [1, 5]");
    out.criteria.push_back(name);
    out.importance[static_cast<Index>(i)] = importance;
  }
  out.scores.resize(static_cast<Index>(criteria.size()), static_cast<Index>(technologies.size()));
  for (std::size_t t = 0; t < technologies.size(); ++t) {
    const std::string p = path + ".technologies[" + std::to_string(t) + "]";
    ObjectReader tr(technologies[t], p);
    std::string name;
    json scores;
    tr.field("name", name);
    tr.field("scores", scores);
    tr.finish();
    if (!scores.is_array() || scores.size() != criteria.size()) {
      throw ConfigError(p + ".scores", "needs exactly one integer score per criterion");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
      int v = 0;
      read_value(scores[i], p + ".scores[" + std::to_string(i) + "]", v);
      out.scores(static_cast<Index>(i), static_cast<Index>(t)) = v;
    }
    out.technologies.push_back(name);
  }
  m = std::move(out);
}

void read_value(const json& j, const std::string&, json& out) { out = j; }

void read_value(const json& j, const std::string& path, LcoeSettings& s) {
  ObjectReader r(j, path);
  r.field("cf_grid", s.cf_grid);
  r.field("rated_kw", s.rated_kw);
  r.finish();
  if (s.cf_grid.empty()) throw ConfigError(path + ".cf_grid", "must not be empty");
  if (!(s.rated_kw > 0.0)) throw ConfigError(path + ".rated_kw", "must be > 0");
}

void read_value(const json& j, const std::string& path, CurveSettings& s) {
  ObjectReader r(j, path);
  r.field("prm_grid", s.prm_grid);
  r.field("plg_values", s.plg_values);
  r.field("unit_forced_outage_rate", s.unit_forced_outage_rate);
  r.finish();
  if (s.prm_grid.empty() || !std::is_sorted(s.prm_grid.begin(), s.prm_grid.end())) {
    throw ConfigError(path + ".prm_grid", "must be a non-empty ascending list");
  }
  for (double v : s.plg_values) {
    if (!(v > 0.0 && v <= 1.0)) throw ConfigError(path + ".plg_values", "each PLG must be in (0, 1]");
  }
}

template <typename T>
bool ObjectReader::field(const char* key, T& out) {
  const auto it = j_.find(key);
  if (it == j_.end()) return false;
  used_.insert(key);
  read_value(*it, child(key), out);
  return true;
}

json to_json_value(const CostParameters& p) {
  return {{"overnight_capital_cost", p.overnight_capital_cost},
          {"fixed_om_cost", p.fixed_om_cost},
          {"variable_om_cost", p.variable_om_cost},
          {"fuel_price", p.fuel_price},
          {"heat_rate", p.heat_rate},
          {"leveling_factor", p.leveling_factor},
          {"ptc_rate", p.ptc_rate},
          {"discount_rate", p.discount_rate},
          {"lifetime_years", p.lifetime_years},
          {"is_renewable", p.is_renewable},
          {"is_fuel_powered", p.is_fuel_powered},
          {"efficiency", p.efficiency},
          {"energy_capital_cost", p.energy_capital_cost}};
}

std::string resolve(const std::string& base_dir, const std::string& file) {
  if (file.empty()) return file;
  const std::filesystem::path p(file);
  return p.is_absolute() ? file : (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

AppConfig default_app_config() {
  AppConfig c;
  RenewableSpec pv;
  pv.technology = RenewableTechnology::pv;
  pv.rated_kw = 3000.0;
  RenewableSpec wind;
  wind.technology = RenewableTechnology::wind;
  wind.rated_kw = 1000.0;
  c.renewables = {pv, wind};

  auto& pvc = c.costs.pv;
  pvc.overnight_capital_cost = 2500.0;
  pvc.fixed_om_cost = 20.0;
  pvc.ptc_rate = 0.023;
  pvc.is_renewable = true;

  auto& wtc = c.costs.wind;
  wtc.overnight_capital_cost = 1700.0;
  wtc.fixed_om_cost = 40.0;
  wtc.ptc_rate = 0.023;
  wtc.is_renewable = true;

  // Heat rate converts thermal kWh to MMBtu; efficiency is the engine's.
  auto& bio = c.costs.biomass;
  bio.overnight_capital_cost = 3500.0;
  bio.fixed_om_cost = 100.0;
  bio.variable_om_cost = 0.005;
  bio.fuel_price = 2.0;
  bio.heat_rate = 0.003412;
  bio.leveling_factor = 1.1;
  bio.efficiency = 0.25;
  bio.is_fuel_powered = true;

  auto& ng = c.costs.natural_gas;
  ng.overnight_capital_cost = 1000.0;
  ng.fixed_om_cost = 15.0;
  ng.variable_om_cost = 0.01;
  ng.fuel_price = 4.0;
  ng.heat_rate = 0.003412;
  ng.leveling_factor = 1.1;
  ng.efficiency = 0.38;
  ng.is_fuel_powered = true;

  auto& bess = c.costs.bess;
  bess.overnight_capital_cost = 400.0;
  bess.energy_capital_cost = 350.0;
  bess.fixed_om_cost = 10.0;
  bess.lifetime_years = 10;

  c.qfd = default_qfd_matrix();
  return c;
}

AppConfig parse_config(const std::string& json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<config>", std::string("invalid JSON: ") + e.what());
  }
  AppConfig c = default_app_config();
  ObjectReader r(j, "");
  r.field("seed", c.seed);
  r.field("horizon", c.horizon);
  r.field("interval_hours", c.interval_hours);
  r.field("load", c.load);
  r.field("renewables", c.renewables);
  r.field("costs", c.costs);
  r.field("bess", c.bess);
  r.field("pso", c.pso);
  r.field("reliability", c.reliability);
  r.field("qfd", c.qfd);
  r.field("lcoe", c.lcoe);
  r.field("reliability_curve", c.curve);

  json planner = json::object();
  r.field("planner", planner);
  {
    ObjectReader pr(planner, "planner");
    pr.field("counted_renewable_fraction", c.counted_renewable_fraction);
    pr.field("biomass_kw", c.biomass_kw);
    pr.field("lole_threshold", c.lole_threshold);
    pr.field("largest_genset_step_kw", c.largest_genset_step_kw);
    pr.field("plg_includes_renewables", c.plg_includes_renewables);
    pr.field("genset_rounding_kw", c.genset_rounding_kw);
    pr.finish();
  }
  json sweep = json::object();
  r.field("sweep", sweep);
  {
    ObjectReader sr(sweep, "sweep");
    sr.field("fractions", c.sweep_fractions);
    sr.finish();
  }
  r.finish();

  auto check = [](bool ok, const char* field, const char* msg) {
    if (!ok) throw ConfigError(field, msg);
  };
  check(c.horizon >= 2, "horizon", "must be >= 2");
  check(c.interval_hours > 0.0, "interval_hours", "must be > 0");
  check(c.load.peak_kw > 0.0, "load.peak_kw", "must be > 0");
  check(c.load.noise_std_fraction >= 0.0 && c.load.noise_std_fraction <= 0.5, "load.noise_std_fraction",
        "must be in [0, 0.5]");
  check(c.counted_renewable_fraction >= 0.0 && c.counted_renewable_fraction <= 1.0,
        "planner.counted_renewable_fraction", "must be in [0, 1]");
  check(c.biomass_kw >= 0.0, "planner.biomass_kw", "must be >= 0");
  check(c.lole_threshold > 0.0, "planner.lole_threshold", "must be > 0");
  check(c.largest_genset_step_kw > 0.0, "planner.largest_genset_step_kw", "must be > 0");
  check(c.genset_rounding_kw >= 0.0, "planner.genset_rounding_kw", "must be >= 0");
  check(!c.sweep_fractions.empty() && std::is_sorted(c.sweep_fractions.begin(), c.sweep_fractions.end()),
        "sweep.fractions", "must be a non-empty ascending list");
  for (double f : c.sweep_fractions) check(f >= 0.0 && f <= 1.0, "sweep.fractions", "each fraction must be in [0, 1]");
  for (std::size_t i = 0; i < c.renewables.size(); ++i) {
    if (!(c.renewables[i].rated_kw >= 0.0)) {
      throw ConfigError("renewables[" + std::to_string(i) + "].rated_kw", "must be >= 0");
    }
    const bool measured = !c.renewables[i].csv.empty();
    if (measured != !c.load.csv.empty()) {
      throw ConfigError("renewables[" + std::to_string(i) + "].csv",
                        "measured profiles must be given for the load and every renewable, or for none");
    }
    c.renewables[i].csv = resolve(base_dir, c.renewables[i].csv);
  }
  c.load.csv = resolve(base_dir, c.load.csv);
  return c;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<config>", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(buffer.str(), parent.empty() ? "." : parent.string());
}

std::string effective_config_json(const AppConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["horizon"] = c.horizon;
  j["interval_hours"] = c.interval_hours;
  const auto& s = c.load.shape;
  j["load"] = {{"peak_kw", c.load.peak_kw},
               {"noise_std_fraction", c.load.noise_std_fraction},
               {"shape",
                {{"base_fraction", s.base_fraction},
                 {"morning_fraction", s.morning_fraction},
                 {"evening_fraction", s.evening_fraction},
                 {"summer_cooling_fraction", s.summer_cooling_fraction},
                 {"winter_heating_fraction", s.winter_heating_fraction},
                 {"cooling_peak_hour", s.cooling_peak_hour},
                 {"weekend_factor", s.weekend_factor}}}};
  if (!c.load.csv.empty()) j["load"]["csv"] = c.load.csv;
  j["renewables"] = json::array();
  for (const auto& r : c.renewables) {
    json rj = {{"technology", r.technology == RenewableTechnology::pv ? "pv" : "wind"},
               {"rated_kw", r.rated_kw},
               {"latitude_deg", r.latitude_deg},
               {"cloud", {{"alpha", r.cloud.alpha}, {"beta", r.cloud.beta}}},
               {"wind",
                {{"weibull_shape", r.wind.weibull_shape},
                 {"weibull_scale_ms", r.wind.weibull_scale_ms},
                 {"persistence", r.wind.persistence},
                 {"cut_in_ms", r.wind.cut_in_ms},
                 {"rated_speed_ms", r.wind.rated_speed_ms},
                 {"cut_out_ms", r.wind.cut_out_ms}}}};
    if (!r.csv.empty()) rj["csv"] = r.csv;
    j["renewables"].push_back(rj);
  }
  j["costs"] = {{"pv", to_json_value(c.costs.pv)},
                {"wind", to_json_value(c.costs.wind)},
                {"biomass", to_json_value(c.costs.biomass)},
                {"natural_gas", to_json_value(c.costs.natural_gas)},
                {"bess", to_json_value(c.costs.bess)}};
  j["bess"] = {{"conversion_efficiency", c.bess.conversion_efficiency},
               {"soc_max", c.bess.soc_max},
               {"soc_min", c.bess.soc_min},
               {"initial_energy_offset_kwh", c.bess.initial_energy_offset_kwh}};
  j["planner"] = {{"counted_renewable_fraction", c.counted_renewable_fraction},
                  {"biomass_kw", c.biomass_kw},
                  {"lole_threshold", c.lole_threshold},
                  {"largest_genset_step_kw", c.largest_genset_step_kw},
                  {"plg_includes_renewables", c.plg_includes_renewables},
                  {"genset_rounding_kw", c.genset_rounding_kw}};
  j["pso"] = {{"swarm_size", c.pso.swarm_size},
              {"max_iterations", c.pso.max_iterations},
              {"inertia_weight", c.pso.inertia_weight},
              {"cognitive_coeff", c.pso.cognitive_coeff},
              {"social_coeff", c.pso.social_coeff},
              {"velocity_clamp", c.pso.velocity_clamp},
              {"stagnation_tolerance", c.pso.stagnation_tolerance},
              {"stagnation_patience", c.pso.stagnation_patience}};
  const auto& rs = c.reliability;
  j["reliability"] = {{"trials", rs.trials},
                      {"scenarios", rs.scenarios},
                      {"epoch_hours", rs.epoch_hours},
                      {"genset_forced_outage_rate", rs.genset_forced_outage_rate},
                      {"bess_forced_outage_rate", rs.bess_forced_outage_rate},
                      {"bess_mode", rs.bess_mode == BessDispatch::firm ? "firm" : "energy_limited"},
                      {"customers", rs.customers},
                      {"prm_max", rs.prm_max},
                      {"prm_step", rs.prm_step},
                      {"plg_quantum", rs.plg_quantum}};
  json criteria = json::array();
  for (std::size_t i = 0; i < c.qfd.criteria.size(); ++i) {
    criteria.push_back({{"name", c.qfd.criteria[i]}, {"importance", c.qfd.importance[static_cast<Index>(i)]}});
  }
  json technologies = json::array();
  for (std::size_t t = 0; t < c.qfd.technologies.size(); ++t) {
    json scores = json::array();
    for (Index i = 0; i < c.qfd.scores.rows(); ++i) scores.push_back(c.qfd.scores(i, static_cast<Index>(t)));
    technologies.push_back({{"name", c.qfd.technologies[t]}, {"scores", scores}});
  }
  j["qfd"] = {{"criteria", criteria}, {"technologies", technologies}};
  j["lcoe"] = {{"cf_grid", c.lcoe.cf_grid}, {"rated_kw", c.lcoe.rated_kw}};
  j["reliability_curve"] = {{"prm_grid", c.curve.prm_grid},
                            {"plg_values", c.curve.plg_values},
                            {"unit_forced_outage_rate", c.curve.unit_forced_outage_rate}};
  j["sweep"] = {{"fractions", c.sweep_fractions}};
  return j.dump(2) + "\n";
}

PlannerConfig build_planner_config(const AppConfig& c, unsigned threads) {
  PlannerConfig p;
  p.horizon = c.horizon;
  p.counted_renewable_fraction = c.counted_renewable_fraction;
  p.biomass_kw = c.biomass_kw;
  p.lole_threshold = c.lole_threshold;
  p.largest_genset_step_kw = c.largest_genset_step_kw;
  p.bess = c.bess;
  p.costs = c.costs;
  p.pso = c.pso;
  p.reliability = c.reliability;
  p.plg_includes_renewables = c.plg_includes_renewables;
  p.genset_rounding_kw = c.genset_rounding_kw;
  p.seed = c.seed;
  p.threads = threads;

  if (!c.load.csv.empty()) {
    try {
      p.load_series = read_series_csv(c.load.csv);
      for (std::size_t i = 0; i < c.renewables.size(); ++i) {
        p.renewable_profiles.push_back(
            {c.renewables[i].technology, c.renewables[i].rated_kw, read_series_csv(c.renewables[i].csv)});
      }
    } catch (const std::runtime_error& e) {
      throw ConfigError("load.csv", e.what());
    }
    p.horizon = p.load_series->size();
    return p;
  }

  p.load.base_profile = synthetic_load_shape(c.load.peak_kw, c.horizon, c.interval_hours, c.load.shape);
  p.load.peak_load_kw = c.load.peak_kw;
  p.load.noise_std_fraction = c.load.noise_std_fraction;
  p.load.interval_hours = c.interval_hours;
  for (const auto& spec : c.renewables) {
    RenewableModel m;
    m.technology = spec.technology;
    m.rated_power_kw = spec.rated_kw;
    m.cloud = spec.cloud;
    m.wind = spec.wind;
    m.interval_hours = c.interval_hours;
    m.shape = spec.technology == RenewableTechnology::pv ? clear_sky_shape(c.horizon, c.interval_hours, spec.latitude_deg)
                                                         : Eigen::VectorXd::Ones(c.horizon);
    p.renewables.push_back(std::move(m));
  }
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("planner", e.what());
  }
  return p;
}

}  // namespace dersizer
