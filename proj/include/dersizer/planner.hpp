#pragma once

#include "dersizer/cost_model.hpp"
#include "dersizer/pso.hpp"
#include "dersizer/reliability.hpp"
#include "dersizer/sizing.hpp"
#include "dersizer/spectral_split.hpp"
#include "dersizer/stochastic_models.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dersizer {

struct TechnologyCosts {
  CostParameters pv;
  CostParameters wind;
  CostParameters biomass;
  CostParameters natural_gas;
  CostParameters bess;
};

struct ReliabilitySettings {
  std::size_t trials = 1000;
  /// Independent net-load years drawn from the stochastic models.
  std::size_t scenarios = 16;
  double epoch_hours = 168.0;
  double genset_forced_outage_rate = 0.05;
  double bess_forced_outage_rate = 0.02;
  BessDispatch bess_mode = BessDispatch::firm;
  std::size_t customers = 1000;
  double prm_max = 2.0;
  double prm_step = 0.005;
  /// PLG values are rounded up to this grid before the reserve-margin lookup.
  double plg_quantum = 0.001;
};

/// A measured renewable output profile.
struct RenewableProfile {
  RenewableTechnology technology = RenewableTechnology::pv;
  double rated_power_kw = 0.0;
  TimeSeries series;
};

struct PlannerConfig {
  LoadModel load;
  std::vector<RenewableModel> renewables;
  /// Measured profiles; when a load profile is present the measured data
  /// replace the synthetic planning year and the Monte Carlo pool collapses
  /// to that single year.
  std::optional<TimeSeries> load_series;
  std::vector<RenewableProfile> renewable_profiles;

  Index horizon = 8760;
  double counted_renewable_fraction = 1.0;
  double biomass_kw = 500.0;
  double lole_threshold = 0.1;
  double largest_genset_step_kw = 100.0;
  BessParameters bess;
  TechnologyCosts costs;
  PsoConfig pso;
  ReliabilitySettings reliability;
  bool plg_includes_renewables = false;
  /// Round the genset total up to this grid (kW); 0 disables.
  double genset_rounding_kw = 0.0;
  std::uint64_t seed = 2016;
  unsigned threads = 1;
};

void validate(const PlannerConfig& config);

struct CostBreakdown {
  AnnualizedCost pv;
  AnnualizedCost wind;
  AnnualizedCost biomass;
  AnnualizedCost natural_gas;
  AnnualizedCost bess;

  double total() const { return pv.total + wind.total + biomass.total + natural_gas.total + bess.total; }
};

struct SizingSolution {
  FleetDesign fleet;
  double total_annualized_cost = 0.0;
  CostBreakdown cost_breakdown;
  ReliabilityMetrics achieved;
  double prm_used = 0.0;
  double plg = 0.0;
  double cutoff_frequency = 0.0;
  Index cutoff_bin = 0;
  double largest_ng_limit_kw = 0.0;
  bool supply_adequate = false;
  bool feasible = false;
  /// Sum of normalized constraint violations; 0 when feasible.
  double violation = 0.0;
  std::string diagnostic;
};

/// Objective seen by the swarm: the cost when feasible, otherwise a large
/// finite penalty that grows with the violation.
double penalized_objective(const SizingSolution& solution);

/// true when a is preferred: lower cost, then smaller genset total, then
/// smaller BESS energy. Feasible always beats infeasible; among infeasible
/// candidates the smaller violation wins.
bool better_solution(const SizingSolution& a, const SizingSolution& b);

struct SupplyCheck {
  bool adequate = true;
  Index first_violation = -1;
};

/// Genset nominal plus BESS power against every net-load sample.
SupplyCheck check_supply_adequacy(const FleetDesign& fleet, const TimeSeries& net_load);

struct CandidateRecord {
  Index cutoff_bin = 0;
  double total_annualized_cost = 0.0;
  bool feasible = false;
};

struct RoundLog {
  std::size_t round = 0;
  double largest_ng_kw = 0.0;
  SizingSolution best;
  PsoResult pso;
  std::vector<CandidateRecord> candidates;  // every distinct cut-off bin evaluated, ascending
};

struct PlanResult {
  SizingSolution best;
  std::vector<RoundLog> rounds;
};

/// Genset and BESS sizing for one planning configuration.
///
/// Construction generates the planning year, the Monte Carlo scenario pool
/// and the net-load spectrum. evaluate_candidate() is one pass of the
/// split/size/cost/check pipeline; plan() runs the swarm over the cut-off
/// frequency for each largest-unit limit and keeps the best feasible
/// result.
class Planner {
 public:
  explicit Planner(PlannerConfig config);
  ~Planner();
  Planner(Planner&&) noexcept;
  Planner& operator=(Planner&&) noexcept;

  const PlannerConfig& config() const;
  const TimeSeries& load() const;
  const TimeSeries& net_load() const;
  const SpectralSplitter& splitter() const;
  const AdequacyEvaluator& adequacy() const;
  /// Monte Carlo net-load years.
  const std::vector<TimeSeries>& scenarios() const;
  /// Nominal peak load used to start the largest-unit schedule.
  double peak_load_kw() const;

  /// Largest natural-gas unit limits, from peak - biomass down in steps
  /// while not below the biomass rating.
  std::vector<double> largest_ng_schedule() const;

  SizingSolution evaluate_candidate(double cutoff_frequency, double largest_ng_kw) const;
  SizingSolution evaluate_bin(Index cutoff_bin, double largest_ng_kw) const;

  /// Reserve margin required for LOLE at a given PLG (memoized).
  PrmSearchResult required_prm(double plg) const;

  RoundLog run_round(std::size_t round, double largest_ng_kw) const;
  PlanResult plan() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

PlanResult plan(const PlannerConfig& config);

struct SweepRow {
  double counted_fraction = 0.0;
  SizingSolution solution;
  std::size_t rounds = 0;
};

/// plan() at each counted renewable fraction with the same seeds.
std::vector<SweepRow> sensitivity_sweep(const PlannerConfig& config, const std::vector<double>& fractions);

/// "No Renewables" for 0, otherwise e.g. "80% Renewables".
std::string scenario_label(double counted_fraction);

/// `scenario,annualized_cost,genset_total_mw,bess_power_mw,bess_energy_mwh,largest_ng_mw`
void write_table_header(std::ostream& out);
void write_table_row(std::ostream& out, const std::string& scenario, const SizingSolution& solution);

}  // namespace dersizer
