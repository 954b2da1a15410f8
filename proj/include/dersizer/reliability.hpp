#pragma once

#include "dersizer/time_series.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dersizer {

enum class UnitTechnology { biomass, natural_gas, generic };

struct DispatchableUnit {
  double rated_kw = 0.0;
  double forced_outage_rate = 0.0;  // probability of being out for one outage epoch
  UnitTechnology technology = UnitTechnology::generic;
};

/// How the BESS counts toward available capacity.
enum class BessDispatch {
  firm,           // full power whenever the BESS is in service
  energy_limited  // full power until its stored energy is spent; refilled between events
};

struct ReliabilityConfig {
  std::vector<DispatchableUnit> units;
  double bess_power_kw = 0.0;
  double bess_energy_kwh = 0.0;
  double bess_forced_outage_rate = 0.0;
  BessDispatch bess_mode = BessDispatch::firm;
  /// Net load years; trial t runs against scenario t mod size.
  std::vector<TimeSeries> net_load_scenarios;
  std::size_t trials = 1000;
  std::uint64_t rng_seed = 1;
  std::size_t customers = 1;
  double epoch_hours = 168.0;
  unsigned threads = 1;
};

struct ReliabilityMetrics {
  double lole_days_per_year = 0.0;
  double saifi_per_customer_year = 0.0;
  double lole_half_width = 0.0;   // 95 % Monte Carlo half-widths
  double saifi_half_width = 0.0;
};

/// Peak load scaled by (1 + prm).
double planning_capacity(double peak_load_kw, double prm);

/// Reserve margin implied by peak + largest unit + uncertainty allowance.
double implied_prm(double peak_load_kw, double largest_unit_kw, double uncertainty_kw);

/// (sum of ratings + bess - peak) / peak.
double prm_of_fleet(std::span<const DispatchableUnit> units, double bess_power_kw, double peak_load_kw);

/// Largest unit rating over total capacity.
double plg(std::span<const DispatchableUnit> units, double total_capacity_kw);

/// Monte Carlo adequacy evaluator with the per-scenario lookup tables built
/// once and shared across fleets.
///
/// Each trial draws an independent in/out state per unit per outage epoch
/// from a random stream keyed by (seed, trial), so results do not depend on
/// thread count. A day counts toward LOLE if any of its samples has
/// available capacity below net load; each maximal run of such samples is
/// one interruption of every customer.
class AdequacyEvaluator {
 public:
  /// `config.units` and the BESS ratings are ignored here; pass the fleet
  /// to evaluate().
  explicit AdequacyEvaluator(const ReliabilityConfig& config);
  ~AdequacyEvaluator();
  AdequacyEvaluator(AdequacyEvaluator&&) noexcept;
  AdequacyEvaluator& operator=(AdequacyEvaluator&&) noexcept;

  ReliabilityMetrics evaluate(std::span<const DispatchableUnit> units, double bess_power_kw,
                              double bess_energy_kwh, double bess_forced_outage_rate,
                              BessDispatch mode = BessDispatch::firm) const;

  /// Peak of the first scenario.
  double reference_peak_kw() const;
  Index epochs() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ReliabilityMetrics evaluate_reliability(const ReliabilityConfig& config);

/// Equal units of `plg_target * total` plus one remainder unit, total =
/// peak * (1 + prm).
std::vector<DispatchableUnit> synthesize_fleet(double peak_load_kw, double prm, double plg_target,
                                               double forced_outage_rate);

struct CurvePoint {
  double prm = 0.0;
  double plg = 0.0;
  ReliabilityMetrics metrics;
};

/// LOLE/SAIFI along a reserve-margin grid for synthetic fleets whose largest
/// unit is `plg_target` of the total. Peak is the first scenario's peak.
std::vector<CurvePoint> reliability_curve(const ReliabilityConfig& base, const std::vector<double>& prm_grid,
                                          double plg_target, double unit_forced_outage_rate = 0.05);

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points);

struct PrmSearchOptions {
  double prm_max = 2.0;
  double step = 0.005;
  double unit_forced_outage_rate = 0.05;
  /// Peak the reserve margin is measured against; 0 uses the evaluator's
  /// first scenario.
  double reference_peak_kw = 0.0;
};

struct PrmSearchResult {
  bool reachable = false;
  double prm = 0.0;
  ReliabilityMetrics metrics;  // at `prm`, or at prm_max when unreachable
  std::string diagnostic;
};

/// Smallest grid PRM whose LOLE estimate plus half-width is within the
/// threshold, found by bisection on the grid index.
PrmSearchResult min_prm_for_lole(const AdequacyEvaluator& evaluator, double lole_threshold, double plg_target,
                                 const PrmSearchOptions& options = {});
PrmSearchResult min_prm_for_lole(const ReliabilityConfig& base, double lole_threshold, double plg_target,
                                 const PrmSearchOptions& options = {});

/// Stateless 64-bit mixer; used to derive per-trial and per-round seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace dersizer
