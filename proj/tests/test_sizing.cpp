#include "dersizer/sizing.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace dersizer;

namespace {

TimeSeries series(std::initializer_list<double> values, double interval = 1.0) {
  Eigen::VectorXd v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return TimeSeries(v, interval);
}

TimeSeries random_dc(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> power(0.0, 300.0);
  Eigen::VectorXd v(n);
  for (Index k = 0; k < n; ++k) v[k] = power(rng);
  return TimeSeries(v, 0.5);
}

}  // namespace

TEST(SizeGensets, PeakTimesMargin) {
  EXPECT_DOUBLE_EQ(size_gensets(TimeSeries(Eigen::VectorXd::Constant(24, 1000.0), 1.0), 0.2), 1200.0);
  const TimeSeries s = series({100.0, 750.0, 300.0});
  EXPECT_EQ(size_gensets(s, 0.0), 750.0);
  EXPECT_THROW(size_gensets(series({-1.0, 2.0}), 0.1), std::invalid_argument);
  EXPECT_THROW(size_gensets(TimeSeries(), 0.1), std::invalid_argument);
}

TEST(BessDcPower, UnitEfficiencyIsIdentity) {
  const TimeSeries ac = series({10.0, -20.0, 0.0, 5.5});
  EXPECT_TRUE(bess_dc_power(ac, 1.0).samples == ac.samples);
}

TEST(BessDcPower, DischargeAndCharge) {
  const TimeSeries dc = bess_dc_power(series({100.0, -100.0}), 0.9);
  EXPECT_NEAR(dc[0], 111.111111111, 1e-8);
  EXPECT_NEAR(dc[1], -90.0, 1e-12);
  EXPECT_THROW(bess_dc_power(series({1.0}), 0.0), std::invalid_argument);
  EXPECT_THROW(bess_dc_power(series({1.0}), 1.1), std::invalid_argument);
}

TEST(BessDcPower, WorksOnPlainEigenArrays) {
  Eigen::ArrayXd ac(3);
  ac << 50.0, -50.0, 0.0;
  const Eigen::ArrayXd dc = bess_dc_power(ac, 0.5);
  EXPECT_EQ(dc[0], 100.0);
  EXPECT_EQ(dc[1], -25.0);
  EXPECT_EQ(size_bess_power(dc), 100.0);
}

TEST(SizeBessPower, AbsoluteMaximum) {
  EXPECT_EQ(size_bess_power(TimeSeries(Eigen::VectorXd::Zero(10), 1.0)), 0.0);
  EXPECT_EQ(size_bess_power(series({50.0, -80.0})), 80.0);
}

TEST(SizeBessPower, TriangleWaveMatchesScan) {
  Eigen::VectorXd v(40);
  for (Index k = 0; k < 40; ++k) v[k] = 10.0 * static_cast<double>(std::abs((k % 20) - 10)) - 45.0;
  double expected = 0.0;
  for (Index k = 0; k < 40; ++k) expected = std::max(expected, std::abs(v[k]));
  EXPECT_EQ(size_bess_power(TimeSeries(v, 1.0)), expected);
}

TEST(SizeBessPower, EfficiencyPenaltyOnDischargePeak) {
  const TimeSeries ac = series({400.0, -150.0, 120.0, -390.0});
  EXPECT_GE(size_bess_power(bess_dc_power(ac, 0.9)), size_bess_power(ac));
}

TEST(SizeBessEnergy, ZeroSeries) {
  EXPECT_EQ(size_bess_energy(TimeSeries(Eigen::VectorXd::Zero(10), 1.0), BessParameters{}), 0.0);
}

TEST(SizeBessEnergy, SquareWaveHandCase) {
  BessParameters p;
  p.soc_min = 0.2;
  p.soc_max = 0.8;
  EXPECT_NEAR(size_bess_energy(series({100.0, 100.0, -100.0, -100.0}), p), 200.0 / 0.6, 1e-9);
  EXPECT_NEAR(size_bess_energy(series({100.0, 100.0, -100.0, -100.0}), p), 333.33, 0.004);
}

TEST(SizeBessEnergy, MatchesBruteForceExactly) {
  std::mt19937_64 rng(2024);
  BessParameters p;
  for (int trial = 0; trial < 200; ++trial) {
    const TimeSeries dc = random_dc(rng, 1 + static_cast<Index>(rng() % 500));
    const std::vector<double> raw(dc.samples.data(), dc.samples.data() + dc.size());
    EXPECT_EQ(size_bess_energy(dc, p), oracle::brute_force_energy(raw, dc.interval_hours, p.soc_max, p.soc_min));
  }
}

TEST(SizeBessEnergy, OffsetInvariance) {
  std::mt19937_64 rng(7);
  const TimeSeries dc = random_dc(rng, 300);
  BessParameters p;
  const double base = size_bess_energy(dc, p);
  for (double offset : {-5000.0, 12.5, 1e6}) {
    p.initial_energy_offset_kwh = offset;
    EXPECT_NEAR(size_bess_energy(dc, p), base, 1e-9 * std::max(base, std::abs(offset)));
  }
}

TEST(SizeBessEnergy, Homogeneity) {
  std::mt19937_64 rng(8);
  const TimeSeries dc = random_dc(rng, 300);
  const BessParameters p;
  for (double c : {0.5, 3.0}) {
    const TimeSeries scaled(dc.samples * c, dc.interval_hours);
    EXPECT_NEAR(size_bess_energy(scaled, p), c * size_bess_energy(dc, p), 1e-9 * c * size_bess_energy(dc, p));
    EXPECT_NEAR(size_bess_power(scaled), c * size_bess_power(dc), 1e-12 * c * size_bess_power(dc));
  }
}

TEST(SizeBessEnergy, RejectsEmptySocWindow) {
  BessParameters p;
  p.soc_min = p.soc_max = 0.5;
  EXPECT_THROW(size_bess_energy(series({1.0}), p), std::invalid_argument);
}

TEST(CumulativeEnergy, StartsAtFirstSample) {
  const Eigen::VectorXd e = cumulative_energy(series({10.0, -4.0, 1.0}, 2.0));
  EXPECT_EQ(e[0], 20.0);
  EXPECT_EQ(e[1], 12.0);
  EXPECT_EQ(e[2], 14.0);
}

TEST(AllocateNgUnits, PartitionExample) {
  const auto units = allocate_ng_units(3301.9, 500.0, 500.0);
  ASSERT_EQ(units.size(), 6U);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(units[i], 500.0);
  EXPECT_NEAR(units[5], 301.9, 1e-9);
}

TEST(AllocateNgUnits, EdgeCases) {
  EXPECT_TRUE(allocate_ng_units(500.0, 500.0, 500.0).empty());
  const auto single = allocate_ng_units(999.0, 500.0, 500.0);
  ASSERT_EQ(single.size(), 1U);
  EXPECT_EQ(single[0], 499.0);
  EXPECT_THROW(allocate_ng_units(400.0, 500.0, 500.0), std::invalid_argument);
  EXPECT_THROW(allocate_ng_units(1000.0, 500.0, 0.0), std::invalid_argument);
}

TEST(AllocateNgUnits, SumAndCapProperty) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> total(500.0, 9000.0), largest(50.0, 4000.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = total(rng);
    const double l = largest(rng);
    const auto units = allocate_ng_units(t, 500.0, l);
    const double sum = std::accumulate(units.begin(), units.end(), 0.0);
    EXPECT_NEAR(sum, t - 500.0, 1e-9 * t);
    for (double u : units) {
      EXPECT_LE(u, l);
      EXPECT_GT(u, 0.0);
    }
  }
}

TEST(FleetDesign, Totals) {
  FleetDesign f;
  f.biomass_kw = 500.0;
  f.ng_units_kw = {500.0, 500.0, 301.9};
  EXPECT_NEAR(f.ng_total_kw(), 1301.9, 1e-9);
  EXPECT_EQ(f.largest_ng_kw(), 500.0);
  EXPECT_EQ(f.largest_dispatchable_kw(), 500.0);
  f.ng_units_kw.clear();
  EXPECT_EQ(f.largest_ng_kw(), 0.0);
}
