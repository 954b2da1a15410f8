#include "dersizer/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dersizer {

void validate(const BessParameters& p) {
  if (!(p.conversion_efficiency > 0.0) || p.conversion_efficiency > 1.0) {
    throw std::invalid_argument("bess: conversion_efficiency must be in (0, 1]");
  }
  if (!(p.soc_min >= 0.0 && p.soc_min < p.soc_max && p.soc_max <= 1.0)) {
    throw std::invalid_argument("bess: need 0 <= soc_min < soc_max <= 1");
  }
}

double FleetDesign::ng_total_kw() const { return std::accumulate(ng_units_kw.begin(), ng_units_kw.end(), 0.0); }

double FleetDesign::largest_ng_kw() const {
  return ng_units_kw.empty() ? 0.0 : *std::max_element(ng_units_kw.begin(), ng_units_kw.end());
}

double FleetDesign::largest_dispatchable_kw() const { return std::max(biomass_kw, largest_ng_kw()); }

double size_gensets(const TimeSeries& genset_share, double prm) {
  if (genset_share.empty()) throw std::invalid_argument("size_gensets: empty series");
  if (!(prm >= 0.0)) throw std::invalid_argument("size_gensets: prm must be >= 0");
  if ((genset_share.samples.array() < 0.0).any()) {
    throw std::invalid_argument("size_gensets: genset share must be >= 0");
  }
  return genset_share.peak() * (1.0 + prm);
}

TimeSeries bess_dc_power(const TimeSeries& ac, double eta) {
  return TimeSeries(bess_dc_power(ac.samples, eta).matrix(), ac.interval_hours);
}

double size_bess_power(const TimeSeries& dc) { return size_bess_power(dc.samples); }

Eigen::VectorXd cumulative_energy(const TimeSeries& dc, double offset_kwh) {
  Eigen::VectorXd energy(dc.size());
  double running = offset_kwh;
  for (Index i = 0; i < dc.size(); ++i) {
    running += dc[i] * dc.interval_hours;
    energy[i] = running;
  }
  return energy;
}

double size_bess_energy(const TimeSeries& dc, const BessParameters& params) {
  validate(params);
  if (dc.empty()) throw std::invalid_argument("size_bess_energy: empty series");
  const Eigen::VectorXd energy = cumulative_energy(dc, params.initial_energy_offset_kwh);
  return (energy.maxCoeff() - energy.minCoeff()) / (params.soc_max - params.soc_min);
}

std::vector<double> allocate_ng_units(double genset_total_kw, double biomass_kw, double largest_ng_kw) {
  if (!(largest_ng_kw > 0.0)) throw std::invalid_argument("allocate_ng_units: largest unit must be > 0");
  if (biomass_kw < 0.0) throw std::invalid_argument("allocate_ng_units: biomass capacity must be >= 0");
  const double block = genset_total_kw - biomass_kw;
  const double tolerance = 1e-9 * std::max(1.0, genset_total_kw);
  if (block < -tolerance) {
    throw std::invalid_argument("allocate_ng_units: biomass capacity exceeds genset total");
  }
  std::vector<double> units;
  if (block <= tolerance) return units;
  const auto full = static_cast<std::size_t>(std::floor(block / largest_ng_kw + 1e-12));
  units.assign(full, largest_ng_kw);
  const double remainder = block - static_cast<double>(full) * largest_ng_kw;
  if (remainder > tolerance) units.push_back(remainder);
  return units;
}

}  // namespace dersizer
