#include "dersizer/planner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace dersizer {

namespace {

constexpr double kInfeasiblePenalty = 1e12;
constexpr double kViolationWeight = 1e9;

// Random-stream identifiers under the master seed.
constexpr std::uint64_t kPlanningLoadStream = 1;
constexpr std::uint64_t kPlanningRenewableStream = 2;
constexpr std::uint64_t kOutageStream = 3;
constexpr std::uint64_t kScenarioLoadStream = 1000;
constexpr std::uint64_t kScenarioRenewableStream = 2000;
constexpr std::uint64_t kRoundStream = 100000;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

TimeSeries sum_or_zero(const std::vector<TimeSeries>& series, const std::vector<RenewableTechnology>& tech,
                       RenewableTechnology wanted, Index n, double T) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (tech[i] == wanted) total += series[i].samples;
  }
  return TimeSeries(std::move(total), T);
}

}  // namespace

void validate(const PlannerConfig& c) {
  require(c.lole_threshold > 0.0, "planner.lole_threshold must be > 0");
  require(c.largest_genset_step_kw > 0.0, "planner.largest_genset_step_kw must be > 0");
  require(c.biomass_kw >= 0.0, "planner.biomass_kw must be >= 0");
  require(c.counted_renewable_fraction >= 0.0 && c.counted_renewable_fraction <= 1.0,
          "planner.counted_renewable_fraction must be in [0, 1]");
  require(c.genset_rounding_kw >= 0.0, "planner.genset_rounding_kw must be >= 0");
  require(c.horizon >= 2, "planner.horizon must be >= 2");
  require(c.reliability.trials >= 1, "reliability.trials must be >= 1");
  require(c.reliability.scenarios >= 1, "reliability.scenarios must be >= 1");
  require(c.reliability.plg_quantum > 0.0, "reliability.plg_quantum must be > 0");
  validate(c.bess);
  validate(c.costs.pv);
  validate(c.costs.wind);
  validate(c.costs.biomass);
  validate(c.costs.natural_gas);
  validate(c.costs.bess);
  if (!c.load_series) {
    validate(c.load);
    for (const auto& r : c.renewables) validate(r);
  }
}

double penalized_objective(const SizingSolution& s) {
  return s.feasible ? s.total_annualized_cost : kInfeasiblePenalty + kViolationWeight * s.violation;
}

bool better_solution(const SizingSolution& a, const SizingSolution& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible && a.violation != b.violation) return a.violation < b.violation;
  if (a.total_annualized_cost != b.total_annualized_cost) return a.total_annualized_cost < b.total_annualized_cost;
  if (a.fleet.genset_total_nominal_kw != b.fleet.genset_total_nominal_kw) {
    return a.fleet.genset_total_nominal_kw < b.fleet.genset_total_nominal_kw;
  }
  if (a.fleet.bess_energy_kwh != b.fleet.bess_energy_kwh) return a.fleet.bess_energy_kwh < b.fleet.bess_energy_kwh;
  return a.cutoff_bin < b.cutoff_bin;
}

SupplyCheck check_supply_adequacy(const FleetDesign& fleet, const TimeSeries& net_load) {
  const double capacity = fleet.genset_total_nominal_kw + fleet.bess_power_kw;
  for (Index k = 0; k < net_load.size(); ++k) {
    if (net_load[k] > capacity) return {false, k};
  }
  return {};
}

struct Planner::Impl {
  PlannerConfig config;
  TimeSeries load;
  TimeSeries pv_output;
  TimeSeries wind_output;
  double pv_kw = 0.0;
  double wt_kw = 0.0;
  TimeSeries net;
  double nominal_peak = 0.0;
  std::unique_ptr<SpectralSplitter> splitter;
  std::unique_ptr<AdequacyEvaluator> adequacy;
  AnnualizedCost pv_cost;
  AnnualizedCost wind_cost;

  std::vector<TimeSeries> scenarios;
  mutable std::mutex prm_mutex;
  mutable std::map<long, PrmSearchResult> prm_cache;
};

Planner::Planner(PlannerConfig config) : impl_(std::make_unique<Impl>()) {
  validate(config);
  auto& im = *impl_;
  im.config = std::move(config);
  const auto& c = im.config;

  std::vector<TimeSeries> outputs;
  std::vector<RenewableTechnology> tech;
  std::vector<TimeSeries> scenarios;

  if (c.load_series) {
    im.load = *c.load_series;
    im.nominal_peak = im.load.peak();
    for (const auto& p : c.renewable_profiles) {
      require_compatible(im.load, p.series, "planner renewable profile");
      outputs.push_back(p.series);
      tech.push_back(p.technology);
      (p.technology == RenewableTechnology::pv ? im.pv_kw : im.wt_kw) += p.rated_power_kw;
    }
    im.net = dersizer::net_load(im.load, outputs, c.counted_renewable_fraction);
    scenarios.push_back(im.net);
  } else {
    LoadModel load_model = c.load;
    load_model.rng_seed = mix_seed(c.seed, kPlanningLoadStream);
    im.load = generate_load(load_model, c.horizon);
    im.nominal_peak = c.load.peak_load_kw;
    for (std::size_t i = 0; i < c.renewables.size(); ++i) {
      RenewableModel model = c.renewables[i];
      model.rng_seed = mix_seed(mix_seed(c.seed, kPlanningRenewableStream), i);
      outputs.push_back(generate_renewable(model, c.horizon));
      tech.push_back(model.technology);
      (model.technology == RenewableTechnology::pv ? im.pv_kw : im.wt_kw) += model.rated_power_kw;
    }
    im.net = dersizer::net_load(im.load, outputs, c.counted_renewable_fraction);

    for (std::size_t s = 0; s < c.reliability.scenarios; ++s) {
      LoadModel lm = c.load;
      lm.rng_seed = mix_seed(mix_seed(c.seed, kScenarioLoadStream), s);
      const TimeSeries scenario_load = generate_load(lm, c.horizon);
      std::vector<TimeSeries> scenario_re;
      for (std::size_t i = 0; i < c.renewables.size(); ++i) {
        RenewableModel model = c.renewables[i];
        model.rng_seed = mix_seed(mix_seed(mix_seed(c.seed, kScenarioRenewableStream), s), i);
        scenario_re.push_back(generate_renewable(model, c.horizon));
      }
      scenarios.push_back(dersizer::net_load(scenario_load, scenario_re, c.counted_renewable_fraction));
    }
  }

  const Index n = im.load.size();
  const double T = im.load.interval_hours;
  im.pv_output = sum_or_zero(outputs, tech, RenewableTechnology::pv, n, T);
  im.wind_output = sum_or_zero(outputs, tech, RenewableTechnology::wind, n, T);
  if (im.pv_kw > 0.0) im.pv_cost = annualize_costs(c.costs.pv, im.pv_kw, im.pv_output);
  if (im.wt_kw > 0.0) im.wind_cost = annualize_costs(c.costs.wind, im.wt_kw, im.wind_output);

  im.splitter = std::make_unique<SpectralSplitter>(im.net);

  ReliabilityConfig rc;
  rc.net_load_scenarios = scenarios;
  im.scenarios = std::move(scenarios);
  rc.trials = c.reliability.trials;
  rc.rng_seed = mix_seed(c.seed, kOutageStream);
  rc.customers = c.reliability.customers;
  rc.epoch_hours = c.reliability.epoch_hours;
  rc.threads = 1;
  im.adequacy = std::make_unique<AdequacyEvaluator>(rc);
}

Planner::~Planner() = default;
Planner::Planner(Planner&&) noexcept = default;
Planner& Planner::operator=(Planner&&) noexcept = default;

const PlannerConfig& Planner::config() const { return impl_->config; }
const TimeSeries& Planner::load() const { return impl_->load; }
const TimeSeries& Planner::net_load() const { return impl_->net; }
const SpectralSplitter& Planner::splitter() const { return *impl_->splitter; }
const AdequacyEvaluator& Planner::adequacy() const { return *impl_->adequacy; }
const std::vector<TimeSeries>& Planner::scenarios() const { return impl_->scenarios; }
double Planner::peak_load_kw() const { return impl_->nominal_peak; }

std::vector<double> Planner::largest_ng_schedule() const {
  const auto& c = impl_->config;
  const double start = impl_->nominal_peak - c.biomass_kw;
  std::vector<double> schedule;
  if (start < c.biomass_kw || start <= 0.0) {
    schedule.push_back(c.biomass_kw > 0.0 ? c.biomass_kw : std::max(start, c.largest_genset_step_kw));
    return schedule;
  }
  const double tolerance = 1e-9 * impl_->nominal_peak;
  for (std::size_t i = 0;; ++i) {
    const double limit = start - static_cast<double>(i) * c.largest_genset_step_kw;
    if (limit < c.biomass_kw - tolerance || limit <= 0.0) break;
    schedule.push_back(limit);
  }
  return schedule;
}

PrmSearchResult Planner::required_prm(double plg_value) const {
  const auto& rs = impl_->config.reliability;
  const long key = std::max(1L, static_cast<long>(std::ceil(plg_value / rs.plg_quantum - 1e-9)));
  {
    std::lock_guard lock(impl_->prm_mutex);
    if (auto it = impl_->prm_cache.find(key); it != impl_->prm_cache.end()) return it->second;
  }
  const double quantized = std::min(1.0, static_cast<double>(key) * rs.plg_quantum);
  PrmSearchOptions options;
  options.prm_max = rs.prm_max;
  options.step = rs.prm_step;
  options.unit_forced_outage_rate = rs.genset_forced_outage_rate;
  options.reference_peak_kw = impl_->net.peak() > 0.0 ? impl_->net.peak() : impl_->nominal_peak;
  PrmSearchResult result = min_prm_for_lole(*impl_->adequacy, impl_->config.lole_threshold, quantized, options);
  std::lock_guard lock(impl_->prm_mutex);
  impl_->prm_cache.emplace(key, result);
  return result;
}

SizingSolution Planner::evaluate_candidate(double cutoff_frequency, double largest_ng_kw) const {
  return evaluate_bin(cutoff_bin(cutoff_frequency, impl_->net.size(), impl_->net.interval_hours), largest_ng_kw);
}

SizingSolution Planner::evaluate_bin(Index bin, double largest_ng_kw) const {
  require(largest_ng_kw > 0.0, "evaluate_candidate: largest natural-gas unit must be > 0");
  const auto& im = *impl_;
  const auto& c = im.config;
  const SplitResult split = im.splitter->split_at_bin(bin);
  const TimeSeries& share = split.genset_share;
  const double T = share.interval_hours;

  SizingSolution s;
  s.cutoff_bin = split.cutoff_bin;
  s.cutoff_frequency = split.cutoff_frequency;
  s.largest_ng_limit_kw = largest_ng_kw;

  const TimeSeries dc = bess_dc_power(split.bess_share_ac, c.bess.conversion_efficiency);
  auto& fleet = s.fleet;
  fleet.pv_kw = im.pv_kw;
  fleet.wt_kw = im.wt_kw;
  fleet.biomass_kw = c.biomass_kw;
  fleet.bess_power_kw = size_bess_power(dc);
  fleet.bess_energy_kwh = size_bess_energy(dc, c.bess);

  // The reserve margin sets the genset total, which sets the PLG, which sets
  // the required margin. Take the smallest grid margin that covers its own
  // requirement; the requirement falls as the margin grows.
  const double renewable_kw = c.plg_includes_renewables ? im.pv_kw + im.wt_kw : 0.0;
  const double share_peak = share.peak();
  const double largest_unit = std::max(c.biomass_kw, largest_ng_kw);
  auto requirement_at = [&](long index) {
    const double margin = static_cast<double>(index) * c.reliability.prm_step;
    const double total = std::max(share_peak * (1.0 + margin), c.biomass_kw) + fleet.bess_power_kw + renewable_kw;
    return required_prm(total > 0.0 ? std::min(1.0, largest_unit / total) : 1.0);
  };
  const auto top = static_cast<long>(std::llround(c.reliability.prm_max / c.reliability.prm_step));
  PrmSearchResult prm = requirement_at(top);
  long hi = top;
  if (prm.reachable) {
    long lo = -1;
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      const PrmSearchResult r = requirement_at(mid);
      if (r.reachable && r.prm <= static_cast<double>(mid) * c.reliability.prm_step + 1e-12) {
        hi = mid;
        prm = r;
      } else {
        lo = mid;
      }
    }
  }
  s.prm_used = static_cast<double>(hi) * c.reliability.prm_step;

  double genset_total = std::max(size_gensets(share, s.prm_used), c.biomass_kw);
  if (c.genset_rounding_kw > 0.0) genset_total = std::ceil(genset_total / c.genset_rounding_kw) * c.genset_rounding_kw;
  fleet.genset_total_nominal_kw = genset_total;
  fleet.ng_units_kw = allocate_ng_units(genset_total, c.biomass_kw, largest_ng_kw);

  // Biomass runs first; natural gas covers the rest of the genset share.
  const TimeSeries biomass_output(share.samples.cwiseMin(c.biomass_kw), T);
  const TimeSeries ng_output(share.samples - biomass_output.samples, T);
  auto& costs = s.cost_breakdown;
  costs.pv = im.pv_cost;
  costs.wind = im.wind_cost;
  if (c.biomass_kw > 0.0) costs.biomass = annualize_costs(c.costs.biomass, c.biomass_kw, biomass_output);
  const double ng_total = fleet.ng_total_kw();
  if (ng_total > 0.0) costs.natural_gas = annualize_costs(c.costs.natural_gas, ng_total, ng_output);
  costs.bess = annualize_storage_costs(c.costs.bess, fleet.bess_power_kw, fleet.bess_energy_kwh);
  s.total_annualized_cost = costs.total();

  std::vector<DispatchableUnit> units;
  const double genset_for = c.reliability.genset_forced_outage_rate;
  if (c.biomass_kw > 0.0) units.push_back({c.biomass_kw, genset_for, UnitTechnology::biomass});
  for (double u : fleet.ng_units_kw) units.push_back({u, genset_for, UnitTechnology::natural_gas});
  s.achieved = im.adequacy->evaluate(units, fleet.bess_power_kw, fleet.bess_energy_kwh,
                                     c.reliability.bess_forced_outage_rate, c.reliability.bess_mode);

  const double p_total = genset_total + fleet.bess_power_kw + renewable_kw;
  s.plg = p_total > 0.0 ? fleet.largest_dispatchable_kw() / p_total : 1.0;

  const SupplyCheck supply = check_supply_adequacy(fleet, im.net);
  s.supply_adequate = supply.adequate;

  double violation = 0.0;
  std::string why;
  if (!prm.reachable) {
    violation += 1.0;
    why += prm.diagnostic + "; ";
  }
  if (!supply.adequate) {
    const double capacity = genset_total + fleet.bess_power_kw;
    violation += (im.net.peak() - capacity) / std::max(im.net.peak(), 1.0);
    why += "supply below net load at sample " + std::to_string(supply.first_violation) + "; ";
  }
  if (s.plg > s.prm_used) {
    violation += s.plg - s.prm_used;
    why += "PLG " + format_number(s.plg) + " exceeds PRM " + format_number(s.prm_used) + "; ";
  }
  if (s.achieved.lole_days_per_year > c.lole_threshold) {
    violation += (s.achieved.lole_days_per_year - c.lole_threshold) / c.lole_threshold;
    why += "LOLE " + format_number(s.achieved.lole_days_per_year) + " above threshold; ";
  }
  s.violation = violation;
  s.feasible = why.empty();
  if (!why.empty()) why.resize(why.size() - 2);
  s.diagnostic = why;
  return s;
}

RoundLog Planner::run_round(std::size_t round, double largest_ng_kw) const {
  const auto& c = impl_->config;
  const double nyquist = nyquist_frequency(impl_->net.interval_hours);
  std::map<Index, SizingSolution> seen;

  PsoConfig pso = c.pso;
  pso.lower = Eigen::VectorXd::Constant(1, 0.0);
  pso.upper = Eigen::VectorXd::Constant(1, nyquist);
  pso.rng_seed = mix_seed(mix_seed(c.seed, kRoundStream), round);

  auto objective = [&](const Eigen::VectorXd& x) {
    const Index bin = cutoff_bin(std::clamp(x[0], 0.0, nyquist), impl_->net.size(), impl_->net.interval_hours);
    auto it = seen.find(bin);
    if (it == seen.end()) it = seen.emplace(bin, evaluate_bin(bin, largest_ng_kw)).first;
    return penalized_objective(it->second);
  };

  RoundLog log;
  log.round = round;
  log.largest_ng_kw = largest_ng_kw;
  log.pso = optimize(objective, pso);
  bool first = true;
  for (const auto& [bin, solution] : seen) {
    log.candidates.push_back({bin, solution.total_annualized_cost, solution.feasible});
    if (first || better_solution(solution, log.best)) log.best = solution;
    first = false;
  }
  return log;
}

PlanResult Planner::plan() const {
  const std::vector<double> schedule = largest_ng_schedule();
  PlanResult result;
  result.rounds.resize(schedule.size());
  const std::size_t workers = std::min<std::size_t>(std::max(1u, impl_->config.threads), schedule.size());
  if (workers <= 1) {
    for (std::size_t r = 0; r < schedule.size(); ++r) result.rounds[r] = run_round(r, schedule[r]);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < schedule.size(); r += workers) result.rounds[r] = run_round(r, schedule[r]);
      });
    }
  }
  for (std::size_t r = 0; r < result.rounds.size(); ++r) {
    if (r == 0 || better_solution(result.rounds[r].best, result.best)) result.best = result.rounds[r].best;
  }
  return result;
}

PlanResult plan(const PlannerConfig& config) { return Planner(config).plan(); }

std::vector<SweepRow> sensitivity_sweep(const PlannerConfig& config, const std::vector<double>& fractions) {
  require(!fractions.empty(), "sensitivity_sweep: no fractions given");
  require(std::is_sorted(fractions.begin(), fractions.end()), "sensitivity_sweep: fractions must be ascending");
  std::vector<SweepRow> rows;
  for (double f : fractions) {
    PlannerConfig c = config;
    c.counted_renewable_fraction = f;
    const PlanResult r = plan(c);
    rows.push_back({f, r.best, r.rounds.size()});
  }
  return rows;
}

std::string scenario_label(double counted_fraction) {
  if (counted_fraction == 0.0) return "No Renewables";
  const double percent = counted_fraction * 100.0;
  if (std::abs(percent - std::round(percent)) < 1e-9) {
    return std::to_string(static_cast<long>(std::llround(percent))) + "% Renewables";
  }
  return format_number(percent) + "% Renewables";
}

void write_table_header(std::ostream& out) {
  out << "scenario,annualized_cost,genset_total_mw,bess_power_mw,bess_energy_mwh,largest_ng_mw\n";
}

void write_table_row(std::ostream& out, const std::string& scenario, const SizingSolution& s) {
  out << scenario << ',' << format_number(s.total_annualized_cost) << ','
      << format_number(s.fleet.genset_total_nominal_kw / 1000.0) << ',' << format_number(s.fleet.bess_power_kw / 1000.0)
      << ',' << format_number(s.fleet.bess_energy_kwh / 1000.0) << ','
      << format_number(s.fleet.largest_ng_kw() / 1000.0) << '\n';
}

}  // namespace dersizer
