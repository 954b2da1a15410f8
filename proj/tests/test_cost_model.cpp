#include "dersizer/cost_model.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace dersizer;

namespace {

TimeSeries constant_year(double kw) { return TimeSeries(Eigen::VectorXd::Constant(8760, kw), 1.0); }

CostParameters fuel_unit() {
  CostParameters p;
  p.is_fuel_powered = true;
  p.fuel_price = 1.0;
  p.heat_rate = 1.0;
  p.leveling_factor = 1.0;
  p.efficiency = 0.5;
  return p;
}

}  // namespace

TEST(CapitalRecoveryFactor, OnePeriodIsPrincipalPlusInterest) {
  EXPECT_NEAR(capital_recovery_factor(0.05, 1), 1.05, 1e-15);
}

TEST(CapitalRecoveryFactor, MatchesAmortizationSchedule) {
  EXPECT_NEAR(capital_recovery_factor(0.05, 20), oracle::level_payment(0.05, 20), 1e-13);
  EXPECT_NEAR(capital_recovery_factor(0.05, 20), 0.080243, 5e-7);
  EXPECT_NEAR(capital_recovery_factor(0.10, 2), oracle::level_payment(0.10, 2), 1e-13);
  EXPECT_NEAR(capital_recovery_factor(0.10, 2), 0.576190, 5e-7);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rate(0.001, 0.3);
  std::uniform_int_distribution<int> years(1, 60);
  for (int i = 0; i < 200; ++i) {
    const double r = rate(rng);
    const int y = years(rng);
    EXPECT_NEAR(capital_recovery_factor(r, y), oracle::level_payment(r, y), 1e-10);
  }
}

TEST(CapitalRecoveryFactor, ConvergesToRateFromAbove) {
  const double crf = capital_recovery_factor(0.05, 500);
  EXPECT_GT(crf, 0.05);
  EXPECT_LT(crf - 0.05, 1e-9);
}

TEST(CapitalRecoveryFactor, RejectsSingularInputs) {
  EXPECT_THROW(capital_recovery_factor(0.0, 20), std::domain_error);
  EXPECT_THROW(capital_recovery_factor(-0.01, 20), std::domain_error);
  EXPECT_THROW(capital_recovery_factor(0.05, 0), std::domain_error);
}

TEST(AnnualizeCosts, RenewableWithZeroOutput) {
  CostParameters p;
  p.is_renewable = true;
  p.overnight_capital_cost = 2000.0;
  p.fixed_om_cost = 25.0;
  p.ptc_rate = 0.023;
  const AnnualizedCost c = annualize_costs(p, 100.0, constant_year(0.0));
  EXPECT_EQ(c.fuel, 0.0);
  EXPECT_EQ(c.tax_credit, 0.0);
  EXPECT_DOUBLE_EQ(c.total, c.capital + c.om);
  EXPECT_DOUBLE_EQ(c.om, 2500.0);
  EXPECT_DOUBLE_EQ(c.capital, 2000.0 * 100.0 * capital_recovery_factor(0.05, 20));
}

TEST(AnnualizeCosts, FuelHandSum) {
  const AnnualizedCost c = annualize_costs(fuel_unit(), 1000.0, constant_year(1000.0));
  EXPECT_NEAR(c.fuel, 17'520'000.0, 1e-6);
  EXPECT_EQ(c.tax_credit, 0.0);
}

TEST(AnnualizeCosts, PerSampleEfficiencyProfile) {
  Eigen::VectorXd eta = Eigen::VectorXd::Constant(8760, 0.5);
  eta.head(4380).setConstant(0.25);
  const AnnualizedCost c = annualize_costs(fuel_unit(), 1000.0, constant_year(1000.0), eta);
  EXPECT_NEAR(c.fuel, 1000.0 * 4380 / 0.25 + 1000.0 * 4380 / 0.5, 1e-6);
}

TEST(AnnualizeCosts, TaxCreditHandSum) {
  CostParameters p;
  p.is_renewable = true;
  p.ptc_rate = 0.023;
  const AnnualizedCost c = annualize_costs(p, 100.0, constant_year(100.0));
  EXPECT_NEAR(c.tax_credit, 20'148.0, 1e-6);
  EXPECT_EQ(c.fuel, 0.0);
}

TEST(AnnualizeCosts, ShortHorizonIsScaledToAYear) {
  CostParameters p = fuel_unit();
  p.variable_om_cost = 0.01;
  const TimeSeries week(Eigen::VectorXd::Constant(168, 1000.0), 1.0);
  const AnnualizedCost weekly = annualize_costs(p, 1000.0, week);
  const AnnualizedCost yearly = annualize_costs(p, 1000.0, constant_year(1000.0));
  EXPECT_NEAR(weekly.fuel, yearly.fuel, 1e-6 * yearly.fuel);
  EXPECT_NEAR(weekly.om, yearly.om, 1e-9 * yearly.om);
}

TEST(AnnualizeCosts, Errors) {
  const CostParameters p = fuel_unit();
  EXPECT_THROW(annualize_costs(p, 100.0, constant_year(1.0), Eigen::VectorXd::Ones(10)), std::invalid_argument);
  Eigen::VectorXd bad = Eigen::VectorXd::Ones(8760);
  bad[5] = -1.0;
  EXPECT_THROW(annualize_costs(p, 100.0, TimeSeries(bad, 1.0)), std::invalid_argument);
  EXPECT_THROW(annualize_costs(p, 0.0, constant_year(1.0)), std::invalid_argument);
  CostParameters both = p;
  both.is_renewable = true;
  EXPECT_THROW(validate(both), std::invalid_argument);
  CostParameters zero_rate;
  zero_rate.discount_rate = 0.0;
  EXPECT_THROW(validate(zero_rate), std::invalid_argument);
}

TEST(AnnualizeCosts, Storage) {
  CostParameters p;
  p.overnight_capital_cost = 400.0;
  p.energy_capital_cost = 300.0;
  p.fixed_om_cost = 10.0;
  p.lifetime_years = 10;
  const AnnualizedCost c = annualize_storage_costs(p, 100.0, 400.0);
  const double crf = capital_recovery_factor(0.05, 10);
  EXPECT_DOUBLE_EQ(c.capital, (400.0 * 100.0 + 300.0 * 400.0) * crf);
  EXPECT_DOUBLE_EQ(c.om, 1000.0);
  EXPECT_EQ(c.fuel, 0.0);
  EXPECT_EQ(c.tax_credit, 0.0);
  EXPECT_DOUBLE_EQ(c.total, c.capital + c.om);
}

TEST(Lcoe, UnitNormalization) {
  AnnualizedCost a;
  a.total = 8760.0;
  EXPECT_DOUBLE_EQ(lcoe(CostParameters{}, 1.0, 1.0, a), 1.0);
}

TEST(Lcoe, HalvingCapacityFactorDoublesLcoe) {
  AnnualizedCost a;
  a.total = 12345.0;
  EXPECT_DOUBLE_EQ(lcoe(CostParameters{}, 10.0, 0.2, a), 2.0 * lcoe(CostParameters{}, 10.0, 0.4, a));
}

TEST(Lcoe, TaxCreditLowersLcoe) {
  CostParameters p;
  p.is_renewable = true;
  p.overnight_capital_cost = 2000.0;
  const TimeSeries out = constant_year(30.0);
  const double without = lcoe(p, 100.0, 0.3, annualize_costs(p, 100.0, out));
  p.ptc_rate = 0.023;
  const double with = lcoe(p, 100.0, 0.3, annualize_costs(p, 100.0, out));
  EXPECT_LT(with, without);
}

TEST(Lcoe, RejectsCapacityFactorOutsideUnitInterval) {
  EXPECT_THROW(lcoe(CostParameters{}, 1.0, 0.0, AnnualizedCost{}), std::domain_error);
  EXPECT_THROW(lcoe(CostParameters{}, 1.0, 1.5, AnnualizedCost{}), std::domain_error);
}

TEST(Lcoe, RealizedCapacityFactor) {
  EXPECT_DOUBLE_EQ(realized_capacity_factor(100.0, constant_year(25.0)), 0.25);
}

TEST(LcoeCurve, SinglePointMatchesLcoe) {
  CostParameters p = fuel_unit();
  p.overnight_capital_cost = 900.0;
  p.fixed_om_cost = 12.0;
  const auto curve = lcoe_vs_cf_curve(p, 200.0, {0.6});
  ASSERT_EQ(curve.size(), 1U);
  const double direct = lcoe(p, 200.0, 0.6, annualize_costs(p, 200.0, constant_year(120.0)));
  EXPECT_NEAR(curve[0].lcoe, direct, 1e-12 * direct);
}

TEST(LcoeCurve, CapitalOnlyScalesAsInverseCapacityFactor) {
  CostParameters p;
  p.overnight_capital_cost = 1500.0;
  const auto curve = lcoe_vs_cf_curve(p, 100.0, {0.25, 0.5});
  EXPECT_NEAR(curve[1].lcoe, 0.5 * curve[0].lcoe, 1e-12 * curve[0].lcoe);
}

TEST(LcoeCurve, FuelOnlyIsFlat) {
  const auto curve = lcoe_vs_cf_curve(fuel_unit(), 100.0, {0.1, 0.3, 0.7, 1.0});
  for (const auto& pt : curve) EXPECT_NEAR(pt.lcoe, curve.front().lcoe, 1e-9 * curve.front().lcoe);
}

TEST(LcoeCurve, DecreasingWithFixedCosts) {
  CostParameters p = fuel_unit();
  p.overnight_capital_cost = 1000.0;
  p.variable_om_cost = 0.01;
  const auto curve = lcoe_vs_cf_curve(p, 100.0, {0.1, 0.2, 0.5, 0.9});
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LT(curve[i].lcoe, curve[i - 1].lcoe);
}

TEST(LcoeCurve, Errors) {
  EXPECT_THROW(lcoe_vs_cf_curve(CostParameters{}, 1.0, {}), std::invalid_argument);
  EXPECT_THROW(lcoe_vs_cf_curve(CostParameters{}, 1.0, {0.5, 0.2}), std::invalid_argument);
}

TEST(LcoeCurve, CsvSchema) {
  std::ostringstream out;
  write_lcoe_csv(out, lcoe_vs_cf_curve(fuel_unit(), 1.0, {0.5}));
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "capacity_factor,lcoe");
}

TEST(Qfd, PublishedAbsoluteTargets) {
  const Eigen::VectorXi score = qfd_score(default_qfd_matrix());
  ASSERT_EQ(score.size(), 6);
  EXPECT_EQ(score[0], 131);
  EXPECT_EQ(score[1], 131);
  EXPECT_EQ(score[2], 153);
  EXPECT_EQ(score[3], 107);
  EXPECT_EQ(score[4], 49);
  EXPECT_EQ(score[5], 33);
}

TEST(Qfd, PvColumnByHand) {
  const int importance[] = {5, 5, 4, 5, 4, 3, 5};
  const int pv[] = {9, 3, 9, -3, -1, 3, 9};
  int total = 0;
  for (int i = 0; i < 7; ++i) total += importance[i] * pv[i];
  EXPECT_EQ(total, 131);
  EXPECT_EQ(qfd_score(default_qfd_matrix())[0], total);
}

TEST(Qfd, RejectsMalformedMatrix) {
  QfdMatrix m = default_qfd_matrix();
  m.importance[0] = 6;
  EXPECT_THROW(qfd_score(m), std::invalid_argument);
  m = default_qfd_matrix();
  m.scores.conservativeResize(6, 6);
  EXPECT_THROW(qfd_score(m), std::invalid_argument);
}
