#include "dersizer/config.hpp"
#include "dersizer/planner.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace dersizer;

namespace {

PlannerConfig weekly(double fraction = 0.8, double lole = 0.1) {
  AppConfig app = load_config(DERSIZER_SOURCE_DIR "/configs/weekly.json");
  app.counted_renewable_fraction = fraction;
  app.lole_threshold = lole;
  return build_planner_config(app);
}

const PlanResult& weekly_plan() {
  static const PlanResult result = Planner(weekly()).plan();
  return result;
}

}  // namespace

TEST(SupplyCheck, Examples) {
  FleetDesign fleet;
  fleet.genset_total_nominal_kw = 900.0;
  fleet.bess_power_kw = 100.0;
  Eigen::VectorXd v(3);
  v << 500.0, 1000.0, 200.0;
  EXPECT_TRUE(check_supply_adequacy(fleet, TimeSeries(v, 1.0)).adequate);
  v[2] = 1000.5;
  const SupplyCheck bad = check_supply_adequacy(fleet, TimeSeries(v, 1.0));
  EXPECT_FALSE(bad.adequate);
  EXPECT_EQ(bad.first_violation, 2);
}

TEST(BetterSolution, Ordering) {
  SizingSolution a, b;
  a.feasible = true;
  a.total_annualized_cost = 10.0;
  b.feasible = false;
  b.total_annualized_cost = 1.0;
  EXPECT_TRUE(better_solution(a, b));
  b.feasible = true;
  EXPECT_TRUE(better_solution(b, a));
  b.total_annualized_cost = 10.0;
  b.fleet.genset_total_nominal_kw = 1.0;
  EXPECT_TRUE(better_solution(a, b));
  EXPECT_LT(penalized_objective(a), penalized_objective(SizingSolution{}));
}

TEST(Planner, TwoRoundSchedule) {
  PlannerConfig c = weekly();
  c.largest_genset_step_kw = c.load.peak_load_kw - 2.0 * c.biomass_kw;
  const Planner planner(c);
  const auto schedule = planner.largest_ng_schedule();
  ASSERT_EQ(schedule.size(), 2U);
  EXPECT_DOUBLE_EQ(schedule[0], c.load.peak_load_kw - c.biomass_kw);
  EXPECT_DOUBLE_EQ(schedule[1], c.biomass_kw);
  EXPECT_EQ(planner.plan().rounds.size(), 2U);
}

TEST(Planner, FullScheduleSteps) {
  const Planner planner(weekly());
  const auto schedule = planner.largest_ng_schedule();
  ASSERT_EQ(schedule.size(), 31U);
  for (std::size_t i = 1; i < schedule.size(); ++i) EXPECT_NEAR(schedule[i - 1] - schedule[i], 100.0, 1e-9);
  EXPECT_NEAR(schedule.back(), 500.0, 1e-9);
}

TEST(Planner, NyquistCutoffWithoutRenewablesNeedsNoBess) {
  const Planner planner(weekly(0.0));
  const SizingSolution s = planner.evaluate_candidate(nyquist_frequency(1.0), 1000.0);
  EXPECT_EQ(s.fleet.bess_power_kw, 0.0);
  EXPECT_EQ(s.fleet.bess_energy_kwh, 0.0);
  EXPECT_EQ(s.cost_breakdown.bess.total, 0.0);
}

TEST(Planner, PlgAboveReserveMarginIsInfeasible) {
  const Planner planner(weekly(0.8, 365.0));
  const SizingSolution s = planner.evaluate_bin(5, 3500.0);
  EXPECT_EQ(s.prm_used, 0.0);
  EXPECT_GT(s.plg, s.prm_used);
  EXPECT_FALSE(s.feasible);
  EXPECT_NE(s.diagnostic.find("PLG"), std::string::npos);
  EXPECT_GT(s.violation, 0.0);
}

TEST(Planner, CostBreakdownAddsUp) {
  const Planner planner(weekly());
  for (Index bin : {0, 3, 10, 40, 84}) {
    const SizingSolution s = planner.evaluate_bin(bin, 800.0);
    const auto& b = s.cost_breakdown;
    EXPECT_DOUBLE_EQ(s.total_annualized_cost, b.pv.total + b.wind.total + b.biomass.total + b.natural_gas.total +
                                                  b.bess.total);
    EXPECT_NEAR(s.fleet.biomass_kw + s.fleet.ng_total_kw(), s.fleet.genset_total_nominal_kw,
                1e-9 * s.fleet.genset_total_nominal_kw);
    for (double u : s.fleet.ng_units_kw) EXPECT_LE(u, 800.0);
  }
}

TEST(Planner, GensetTotalCoversShareWithMargin) {
  const Planner planner(weekly());
  const SizingSolution s = planner.evaluate_bin(7, 1000.0);
  const double share_peak = planner.splitter().split_at_bin(7).genset_share.peak();
  EXPECT_GE(s.fleet.genset_total_nominal_kw, share_peak * (1.0 + s.prm_used) * (1.0 - 1e-12));
}

TEST(Planner, PlanReturnsAReproducibleCandidate) {
  const PlanResult& r = weekly_plan();
  ASSERT_TRUE(r.best.feasible) << r.best.diagnostic;
  const Planner planner(weekly());
  const SizingSolution again = planner.evaluate_bin(r.best.cutoff_bin, r.best.largest_ng_limit_kw);
  EXPECT_EQ(again.total_annualized_cost, r.best.total_annualized_cost);
  EXPECT_EQ(again.fleet.genset_total_nominal_kw, r.best.fleet.genset_total_nominal_kw);
  EXPECT_EQ(again.fleet.bess_energy_kwh, r.best.fleet.bess_energy_kwh);
}

TEST(Planner, BestDominatesEveryLoggedFeasibleCandidate) {
  const PlanResult& r = weekly_plan();
  std::size_t feasible = 0;
  for (const auto& round : r.rounds) {
    for (const auto& candidate : round.candidates) {
      if (!candidate.feasible) continue;
      ++feasible;
      EXPECT_LE(r.best.total_annualized_cost, candidate.total_annualized_cost);
    }
  }
  EXPECT_GT(feasible, 0U);
}

TEST(Planner, FeasibleCandidatesRespectReliability) {
  const PlannerConfig c = weekly();
  const Planner planner(c);
  const RoundLog round = planner.run_round(0, 1500.0);
  for (const auto& candidate : round.candidates) {
    const SizingSolution s = planner.evaluate_bin(candidate.cutoff_bin, 1500.0);
    EXPECT_EQ(s.feasible, candidate.feasible);
    if (!s.feasible) continue;
    EXPECT_LE(s.plg, s.prm_used);
    EXPECT_LE(s.achieved.lole_days_per_year, c.lole_threshold);
    EXPECT_TRUE(s.supply_adequate);
  }
}

TEST(Planner, CandidatesAreAscendingAndDistinct) {
  for (const auto& round : weekly_plan().rounds) {
    for (std::size_t i = 1; i < round.candidates.size(); ++i) {
      EXPECT_LT(round.candidates[i - 1].cutoff_bin, round.candidates[i].cutoff_bin);
    }
  }
}

TEST(Planner, ThreadCountDoesNotChangePlan) {
  PlannerConfig c = weekly();
  c.threads = 3;
  const PlanResult threaded = Planner(c).plan();
  const PlanResult& serial = weekly_plan();
  EXPECT_EQ(threaded.best.total_annualized_cost, serial.best.total_annualized_cost);
  EXPECT_EQ(threaded.best.cutoff_bin, serial.best.cutoff_bin);
  ASSERT_EQ(threaded.rounds.size(), serial.rounds.size());
  for (std::size_t i = 0; i < serial.rounds.size(); ++i) {
    EXPECT_EQ(threaded.rounds[i].pso.convergence_trace, serial.rounds[i].pso.convergence_trace);
  }
}

TEST(Planner, RequiredPrmIsMonotoneInPlg) {
  const Planner planner(weekly());
  double previous = -1.0;
  for (double plg_value : {0.05, 0.1, 0.15, 0.2, 0.3}) {
    const PrmSearchResult r = planner.required_prm(plg_value);
    if (!r.reachable) break;
    EXPECT_GE(r.prm, previous);
    previous = r.prm;
  }
}

TEST(Planner, RejectsBadConfig) {
  PlannerConfig c = weekly();
  c.counted_renewable_fraction = 1.5;
  EXPECT_THROW(Planner{c}, std::invalid_argument);
  c = weekly();
  c.lole_threshold = 0.0;
  EXPECT_THROW(Planner{c}, std::invalid_argument);
  const Planner planner(weekly());
  EXPECT_THROW(planner.evaluate_bin(1, 0.0), std::invalid_argument);
}

TEST(ScenarioLabel, Formats) {
  EXPECT_EQ(scenario_label(0.0), "No Renewables");
  EXPECT_EQ(scenario_label(0.8), "80% Renewables");
  EXPECT_EQ(scenario_label(1.0), "100% Renewables");
  EXPECT_EQ(scenario_label(0.125), "12.5% Renewables");
}

TEST(TableCsv, Schema) {
  std::ostringstream out;
  write_table_header(out);
  SizingSolution s;
  s.total_annualized_cost = 1234.5;
  s.fleet.genset_total_nominal_kw = 5500.0;
  s.fleet.ng_units_kw = {500.0};
  write_table_row(out, scenario_label(0.5), s);
  EXPECT_EQ(out.str(),
            "scenario,annualized_cost,genset_total_mw,bess_power_mw,bess_energy_mwh,largest_ng_mw\n"
            "50% Renewables,1234.5,5.5,0,0,0.5\n");
}

TEST(SensitivitySweep, RejectsUnsortedFractions) {
  EXPECT_THROW(sensitivity_sweep(weekly(), {0.5, 0.2}), std::invalid_argument);
  EXPECT_THROW(sensitivity_sweep(weekly(), {}), std::invalid_argument);
}
