#pragma once

#include "dersizer/planner.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dersizer {

/// Validation failure tied to one configuration field (dotted path).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct LoadSpec {
  double peak_kw = 4000.0;
  double noise_std_fraction = 0.05;
  LoadShapeOptions shape;
  std::string csv;  // measured `timestamp,power_kw` profile; overrides the synthetic model
};

struct RenewableSpec {
  RenewableTechnology technology = RenewableTechnology::pv;
  double rated_kw = 0.0;
  double latitude_deg = 40.0;
  CloudAttenuation cloud;
  WindRegime wind;
  std::string csv;
};

struct LcoeSettings {
  std::vector<double> cf_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double rated_kw = 1000.0;
};

struct CurveSettings {
  std::vector<double> prm_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0};
  std::vector<double> plg_values{0.1, 0.2, 0.3, 0.5};
  double unit_forced_outage_rate = 0.05;
};

/// Everything one run needs; defaults describe a 4 MW-peak community
/// microgrid with 3 MW PV, 1 MW wind and a 0.5 MW biomass genset.
struct AppConfig {
  std::uint64_t seed = 2016;
  Index horizon = 8760;
  double interval_hours = 1.0;
  LoadSpec load;
  std::vector<RenewableSpec> renewables;
  TechnologyCosts costs;
  BessParameters bess;
  double counted_renewable_fraction = 1.0;
  double biomass_kw = 500.0;
  double lole_threshold = 0.1;
  double largest_genset_step_kw = 100.0;
  bool plg_includes_renewables = false;
  double genset_rounding_kw = 0.0;
  PsoConfig pso;
  ReliabilitySettings reliability;
  QfdMatrix qfd;
  LcoeSettings lcoe;
  CurveSettings curve;
  std::vector<double> sweep_fractions{0.0, 0.2, 0.5, 0.8, 0.9, 1.0};
};

AppConfig default_app_config();

/// Parses JSON text on top of the defaults. Unknown keys and invalid values
/// raise ConfigError naming the field. Relative CSV paths resolve against
/// `base_dir`.
AppConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");
AppConfig load_config(const std::string& path);

/// Effective configuration (defaults applied) as pretty JSON.
std::string effective_config_json(const AppConfig& config);

/// Builds the synthetic (or measured) models for the planner.
PlannerConfig build_planner_config(const AppConfig& config, unsigned threads = 1);

}  // namespace dersizer
