#include "dersizer/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace dersizer {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

// SplitMix64 stream; one per trial.
class TrialRandom {
 public:
  explicit TrialRandom(std::uint64_t seed) : state_(seed) {}
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

std::size_t count_above(const std::vector<double>& sorted, double threshold) {
  return static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), threshold));
}

struct EpochTable {
  Index begin = 0;
  Index end = 0;
  double first = 0.0;
  double max = 0.0;
  std::size_t segment_begin = 0;  // this epoch's slice of ScenarioTables::segments
  std::size_t segment_end = 0;
  std::vector<double> interior;       // net[k] for begin < k < end, sorted
  std::vector<double> interior_pairs;  // min(net[k-1], net[k]) for begin < k < end, sorted
};

struct Segment {
  Index epoch = 0;
  Index day = 0;
  double max = 0.0;
};

struct ScenarioTables {
  const TimeSeries* series = nullptr;
  std::vector<EpochTable> epochs;
  std::vector<Segment> segments;  // maximal runs inside one day and one epoch, in time order
};

struct TrialOutcome {
  double days = 0.0;
  double events = 0.0;
};

double half_width(const std::vector<double>& values, double mean) {
  const auto n = values.size();
  if (n < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return 1.96 * std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double planning_capacity(double peak_load_kw, double prm) {
  require(peak_load_kw >= 0.0 && prm >= 0.0, "planning_capacity: inputs must be >= 0");
  return peak_load_kw * (1.0 + prm);
}

double implied_prm(double peak_load_kw, double largest_unit_kw, double uncertainty_kw) {
  require(peak_load_kw > 0.0 && largest_unit_kw >= 0.0 && uncertainty_kw >= 0.0,
          "implied_prm: need peak > 0 and non-negative allowances");
  return (largest_unit_kw + uncertainty_kw) / peak_load_kw;
}

double prm_of_fleet(std::span<const DispatchableUnit> units, double bess_power_kw, double peak_load_kw) {
  require(peak_load_kw > 0.0, "prm_of_fleet: peak load must be > 0");
  double total = bess_power_kw;
  for (const auto& u : units) total += u.rated_kw;
  return (total - peak_load_kw) / peak_load_kw;
}

double plg(std::span<const DispatchableUnit> units, double total_capacity_kw) {
  require(!units.empty(), "plg: empty unit list");
  require(total_capacity_kw > 0.0, "plg: total capacity must be > 0");
  double largest = 0.0;
  for (const auto& u : units) largest = std::max(largest, u.rated_kw);
  return largest / total_capacity_kw;
}

struct AdequacyEvaluator::Impl {
  std::vector<TimeSeries> scenarios;
  std::vector<ScenarioTables> tables;
  Index epoch_samples = 0;
  Index epoch_count = 0;
  double to_year = 1.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void build() {
    const Index n = scenarios.front().size();
    const double T = scenarios.front().interval_hours;
    tables.resize(scenarios.size());
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      const auto& net = scenarios[s].samples;
      auto& table = tables[s];
      table.series = &scenarios[s];
      for (Index b = 0; b < n; b += epoch_samples) {
        EpochTable e;
        e.begin = b;
        e.end = std::min(n, b + epoch_samples);
        e.first = net[b];
        e.max = net.segment(b, e.end - b).maxCoeff();
        for (Index k = b + 1; k < e.end; ++k) {
          e.interior.push_back(net[k]);
          e.interior_pairs.push_back(std::min(net[k - 1], net[k]));
        }
        std::sort(e.interior.begin(), e.interior.end());
        std::sort(e.interior_pairs.begin(), e.interior_pairs.end());
        table.epochs.push_back(std::move(e));
      }
      Index k = 0;
      while (k < n) {
        const Index epoch = k / epoch_samples;
        const auto day = static_cast<Index>(std::floor(static_cast<double>(k) * T / kHoursPerDay + 1e-9));
        Segment seg{epoch, day, net[k]};
        ++k;
        while (k < n && k / epoch_samples == epoch &&
               static_cast<Index>(std::floor(static_cast<double>(k) * T / kHoursPerDay + 1e-9)) == day) {
          seg.max = std::max(seg.max, net[k]);
          ++k;
        }
        auto& ep = table.epochs[static_cast<std::size_t>(epoch)];
        if (ep.segment_end == 0) ep.segment_begin = table.segments.size();
        table.segments.push_back(seg);
        ep.segment_end = table.segments.size();
      }
    }
  }

  // Capacity per epoch with BESS firm.
  static TrialOutcome count_firm(const ScenarioTables& table, const std::vector<double>& available) {
    TrialOutcome out;
    Index last_day = -1;
    const auto& net = table.series->samples;
    for (std::size_t e = 0; e < table.epochs.size(); ++e) {
      const auto& ep = table.epochs[e];
      const double a = available[e];
      if (ep.max <= a) continue;
      for (std::size_t i = ep.segment_begin; i < ep.segment_end; ++i) {
        const auto& seg = table.segments[i];
        if (seg.day != last_day && seg.max > a) {
          out.days += 1.0;
          last_day = seg.day;
        }
      }
      if (ep.first > a) {
        const bool continues = e > 0 && net[ep.begin - 1] > available[e - 1];
        if (!continues) out.events += 1.0;
      }
      out.events += static_cast<double>(count_above(ep.interior, a)) -
                    static_cast<double>(count_above(ep.interior_pairs, a));
    }
    return out;
  }

  TrialOutcome count_energy_limited(const ScenarioTables& table, const std::vector<double>& generation,
                                    const std::vector<char>& bess_up, double bess_power, double bess_energy) const {
    TrialOutcome out;
    const auto& series = *table.series;
    const double T = series.interval_hours;
    bool in_deficit = false;
    bool in_shortfall = false;
    double stored = 0.0;
    Index last_day = -1;
    for (Index k = 0; k < series.size(); ++k) {
      const auto e = static_cast<std::size_t>(k / epoch_samples);
      const double deficit = series[k] - generation[e];
      bool short_now = false;
      if (deficit > 0.0) {
        if (!in_deficit) stored = bess_energy;
        in_deficit = true;
        const double supply = bess_up[e] ? std::min(bess_power, stored / T) : 0.0;
        if (supply >= deficit) {
          stored -= deficit * T;
        } else {
          stored -= supply * T;
          short_now = true;
        }
      } else {
        in_deficit = false;
      }
      if (short_now) {
        const auto day = static_cast<Index>(std::floor(static_cast<double>(k) * T / kHoursPerDay + 1e-9));
        if (day != last_day) {
          out.days += 1.0;
          last_day = day;
        }
        if (!in_shortfall) out.events += 1.0;
      }
      in_shortfall = short_now;
    }
    return out;
  }
};

AdequacyEvaluator::AdequacyEvaluator(const ReliabilityConfig& config) : impl_(std::make_unique<Impl>()) {
  require(!config.net_load_scenarios.empty(), "reliability: at least one net-load scenario required");
  require(config.trials >= 1, "reliability: trials must be >= 1");
  require(config.customers >= 1, "reliability: customers must be >= 1");
  require(config.epoch_hours > 0.0, "reliability: epoch_hours must be > 0");
  const auto& first = config.net_load_scenarios.front();
  require(!first.empty(), "reliability: zero-length net-load series");
  for (const auto& s : config.net_load_scenarios) require_compatible(first, s, "reliability scenarios");

  impl_->scenarios = config.net_load_scenarios;
  impl_->epoch_samples = std::clamp<Index>(static_cast<Index>(std::llround(config.epoch_hours / first.interval_hours)),
                                           1, first.size());
  impl_->epoch_count = (first.size() + impl_->epoch_samples - 1) / impl_->epoch_samples;
  impl_->to_year = first.annualization_factor();
  impl_->trials = config.trials;
  impl_->seed = config.rng_seed;
  impl_->threads = std::max(1u, config.threads);
  impl_->build();
}

AdequacyEvaluator::~AdequacyEvaluator() = default;
AdequacyEvaluator::AdequacyEvaluator(AdequacyEvaluator&&) noexcept = default;
AdequacyEvaluator& AdequacyEvaluator::operator=(AdequacyEvaluator&&) noexcept = default;

double AdequacyEvaluator::reference_peak_kw() const { return impl_->scenarios.front().peak(); }

Index AdequacyEvaluator::epochs() const { return impl_->epoch_count; }

ReliabilityMetrics AdequacyEvaluator::evaluate(std::span<const DispatchableUnit> units, double bess_power_kw,
                                               double bess_energy_kwh, double bess_forced_outage_rate,
                                               BessDispatch mode) const {
  for (const auto& u : units) {
    require(u.rated_kw > 0.0, "reliability: unit rating must be > 0");
    require(u.forced_outage_rate >= 0.0 && u.forced_outage_rate < 1.0,
            "reliability: forced outage rate must be in [0, 1)");
  }
  require(bess_power_kw >= 0.0 && bess_energy_kwh >= 0.0, "reliability: BESS ratings must be >= 0");
  require(bess_forced_outage_rate >= 0.0 && bess_forced_outage_rate < 1.0,
          "reliability: BESS forced outage rate must be in [0, 1)");

  const Impl& im = *impl_;
  const auto n_epochs = static_cast<std::size_t>(im.epoch_count);
  std::vector<double> days(im.trials);
  std::vector<double> events(im.trials);

  auto run_trial = [&](std::size_t t, std::vector<double>& generation, std::vector<char>& bess_up,
                       std::vector<double>& available) {
    TrialRandom rng(mix_seed(im.seed, t));
    for (std::size_t e = 0; e < n_epochs; ++e) {
      double cap = 0.0;
      for (const auto& u : units) {
        if (rng.uniform() >= u.forced_outage_rate) cap += u.rated_kw;
      }
      generation[e] = cap;
      bess_up[e] = rng.uniform() >= bess_forced_outage_rate;
      available[e] = cap + (bess_up[e] ? bess_power_kw : 0.0);
    }
    const auto& table = im.tables[t % im.tables.size()];
    const TrialOutcome o = (mode == BessDispatch::firm || bess_power_kw == 0.0)
                               ? Impl::count_firm(table, available)
                               : im.count_energy_limited(table, generation, bess_up, bess_power_kw, bess_energy_kwh);
    days[t] = o.days * im.to_year;
    events[t] = o.events * im.to_year;
  };

  auto run_range = [&](std::size_t begin, std::size_t end) {
    std::vector<double> generation(n_epochs), available(n_epochs);
    std::vector<char> bess_up(n_epochs);
    for (std::size_t t = begin; t < end; ++t) run_trial(t, generation, bess_up, available);
  };

  const std::size_t workers = std::min<std::size_t>(im.threads, im.trials);
  if (workers <= 1) {
    run_range(0, im.trials);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (im.trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(im.trials, b + chunk);
      if (b < e) pool.emplace_back(run_range, b, e);
    }
  }

  ReliabilityMetrics m;
  double sum_days = 0.0, sum_events = 0.0;
  for (std::size_t t = 0; t < im.trials; ++t) {
    sum_days += days[t];
    sum_events += events[t];
  }
  const auto n = static_cast<double>(im.trials);
  m.lole_days_per_year = sum_days / n;
  // Single bus: every event interrupts all customers, so the per-customer
  // rate equals the event rate.
  m.saifi_per_customer_year = sum_events / n;
  m.lole_half_width = half_width(days, m.lole_days_per_year);
  m.saifi_half_width = half_width(events, m.saifi_per_customer_year);
  return m;
}

ReliabilityMetrics evaluate_reliability(const ReliabilityConfig& config) {
  const AdequacyEvaluator evaluator(config);
  return evaluator.evaluate(config.units, config.bess_power_kw, config.bess_energy_kwh,
                            config.bess_forced_outage_rate, config.bess_mode);
}

std::vector<DispatchableUnit> synthesize_fleet(double peak_load_kw, double prm, double plg_target,
                                               double forced_outage_rate) {
  require(plg_target > 0.0 && plg_target <= 1.0, "synthesize_fleet: plg_target must be in (0, 1]");
  require(peak_load_kw > 0.0 && prm >= 0.0, "synthesize_fleet: need peak > 0 and prm >= 0");
  const double total = planning_capacity(peak_load_kw, prm);
  const double largest = plg_target * total;
  const auto full = static_cast<std::size_t>(std::floor(1.0 / plg_target + 1e-9));
  std::vector<DispatchableUnit> units(full, DispatchableUnit{largest, forced_outage_rate, UnitTechnology::generic});
  const double remainder = total - static_cast<double>(full) * largest;
  if (remainder > 1e-9 * total) units.push_back({remainder, forced_outage_rate, UnitTechnology::generic});
  return units;
}

std::vector<CurvePoint> reliability_curve(const ReliabilityConfig& base, const std::vector<double>& prm_grid,
                                          double plg_target, double unit_forced_outage_rate) {
  require(plg_target > 0.0 && plg_target <= 1.0, "reliability_curve: infeasible plg_target (must be in (0, 1])");
  require(!prm_grid.empty(), "reliability_curve: empty PRM grid");
  require(std::is_sorted(prm_grid.begin(), prm_grid.end()), "reliability_curve: PRM grid must be ascending");
  const AdequacyEvaluator evaluator(base);
  const double peak = evaluator.reference_peak_kw();
  std::vector<CurvePoint> out;
  for (double prm : prm_grid) {
    const auto fleet = synthesize_fleet(peak, prm, plg_target, unit_forced_outage_rate);
    out.push_back({prm, plg_target, evaluator.evaluate(fleet, 0.0, 0.0, 0.0)});
  }
  return out;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  out << "prm,plg,lole,lole_hw,saifi,saifi_hw\n";
  for (const auto& p : points) {
    out << format_number(p.prm) << ',' << format_number(p.plg) << ',' << format_number(p.metrics.lole_days_per_year)
        << ',' << format_number(p.metrics.lole_half_width) << ',' << format_number(p.metrics.saifi_per_customer_year)
        << ',' << format_number(p.metrics.saifi_half_width) << '\n';
  }
}

PrmSearchResult min_prm_for_lole(const AdequacyEvaluator& evaluator, double lole_threshold, double plg_target,
                                 const PrmSearchOptions& options) {
  require(lole_threshold > 0.0, "min_prm_for_lole: threshold must be > 0");
  require(options.step > 0.0 && options.prm_max >= 0.0, "min_prm_for_lole: bad search grid");
  require(options.reference_peak_kw >= 0.0, "min_prm_for_lole: reference peak must be >= 0");
  const double peak = options.reference_peak_kw > 0.0 ? options.reference_peak_kw : evaluator.reference_peak_kw();
  require(peak > 0.0, "min_prm_for_lole: reference peak must be > 0");
  const auto top = static_cast<long>(std::llround(options.prm_max / options.step));

  auto at = [&](long index) {
    const double prm = static_cast<double>(index) * options.step;
    const auto fleet = synthesize_fleet(peak, prm, plg_target, options.unit_forced_outage_rate);
    return evaluator.evaluate(fleet, 0.0, 0.0, 0.0);
  };
  auto ok = [&](const ReliabilityMetrics& m) { return m.lole_days_per_year + m.lole_half_width <= lole_threshold; };

  PrmSearchResult result;
  const ReliabilityMetrics at_top = at(top);
  if (!ok(at_top)) {
    result.prm = static_cast<double>(top) * options.step;
    result.metrics = at_top;
    result.diagnostic = "LOLE threshold unreachable at PRM " + format_number(result.prm) + " with PLG " +
                        format_number(plg_target) + " (LOLE " + format_number(at_top.lole_days_per_year) +
                        " +/- " + format_number(at_top.lole_half_width) + ")";
    return result;
  }
  long hi = top;
  ReliabilityMetrics hi_metrics = at_top;
  const ReliabilityMetrics at_zero = at(0);
  if (ok(at_zero)) {
    hi = 0;
    hi_metrics = at_zero;
  } else {
    long lo = 0;
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      const ReliabilityMetrics m = at(mid);
      if (ok(m)) {
        hi = mid;
        hi_metrics = m;
      } else {
        lo = mid;
      }
    }
  }
  result.reachable = true;
  result.prm = static_cast<double>(hi) * options.step;
  result.metrics = hi_metrics;
  return result;
}

PrmSearchResult min_prm_for_lole(const ReliabilityConfig& base, double lole_threshold, double plg_target,
                                 const PrmSearchOptions& options) {
  return min_prm_for_lole(AdequacyEvaluator(base), lole_threshold, plg_target, options);
}

}  // namespace dersizer
