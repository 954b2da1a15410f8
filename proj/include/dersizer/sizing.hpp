#pragma once

#include "dersizer/time_series.hpp"

#include <stdexcept>
#include <vector>

namespace dersizer {

struct BessParameters {
  double conversion_efficiency = 0.95;
  double soc_max = 0.9;
  double soc_min = 0.1;
  double initial_energy_offset_kwh = 0.0;
};

void validate(const BessParameters& params);

/// Dispatchable capacity of one design.
struct FleetDesign {
  double pv_kw = 0.0;
  double wt_kw = 0.0;
  double biomass_kw = 0.0;
  std::vector<double> ng_units_kw;
  double genset_total_nominal_kw = 0.0;
  double bess_power_kw = 0.0;
  double bess_energy_kwh = 0.0;

  double ng_total_kw() const;
  double largest_ng_kw() const;
  /// Largest of the biomass genset and the natural-gas units.
  double largest_dispatchable_kw() const;
};

/// Peak genset share times (1 + prm).
double size_gensets(const TimeSeries& genset_share, double prm);

/// AC-to-DC battery power: discharging (>= 0) divided by eta, charging
/// multiplied by eta.
template <typename Derived>
auto bess_dc_power(const Eigen::DenseBase<Derived>& ac, typename Derived::Scalar eta) {
  using Scalar = typename Derived::Scalar;
  if (!(eta > Scalar(0)) || eta > Scalar(1)) {
    throw std::invalid_argument("bess_dc_power: conversion efficiency must be in (0, 1]");
  }
  const auto& a = ac.derived().array();
  return (a >= Scalar(0)).select(a / eta, a * eta).eval();
}

TimeSeries bess_dc_power(const TimeSeries& ac, double eta);

/// Largest |DC power|.
template <typename Derived>
typename Derived::Scalar size_bess_power(const Eigen::DenseBase<Derived>& dc) {
  if (dc.size() == 0) throw std::invalid_argument("size_bess_power: empty series");
  return dc.derived().array().abs().maxCoeff();
}

double size_bess_power(const TimeSeries& dc);

/// Running energy E[i] = offset + sum_{k <= i} P_dc[k] * T, i = 0..N-1.
Eigen::VectorXd cumulative_energy(const TimeSeries& dc, double offset_kwh = 0.0);

/// Energy swing of the cumulative energy divided by the usable SOC window.
double size_bess_energy(const TimeSeries& dc, const BessParameters& params);

/// Splits the natural-gas block (genset_total - biomass) into full units of
/// `largest_ng_kw` plus one remainder unit.
std::vector<double> allocate_ng_units(double genset_total_kw, double biomass_kw, double largest_ng_kw);

}  // namespace dersizer
