#pragma once

#include "dersizer/time_series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace dersizer {

/// Economic inputs for one technology.
///
/// Units: currency per kW installed for capital, currency per kW-year for
/// fixed O&M, currency per kWh for variable O&M and PTC, fuel units per kWh
/// for the heat rate.
struct CostParameters {
  double overnight_capital_cost = 0.0;
  double fixed_om_cost = 0.0;
  double variable_om_cost = 0.0;
  double fuel_price = 0.0;
  double heat_rate = 0.0;
  double leveling_factor = 1.0;
  double ptc_rate = 0.0;
  double discount_rate = 0.05;
  int lifetime_years = 20;
  bool is_renewable = false;
  bool is_fuel_powered = false;
  /// Constant conversion efficiency used when no per-sample profile is given.
  double efficiency = 1.0;
  /// Storage only: capital per kWh of energy capacity.
  double energy_capital_cost = 0.0;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const CostParameters& params);

struct AnnualizedCost {
  double capital = 0.0;
  double om = 0.0;
  double fuel = 0.0;
  double tax_credit = 0.0;
  double total = 0.0;
};

AnnualizedCost operator+(const AnnualizedCost& a, const AnnualizedCost& b);

/// Level annual payment that retires a unit loan over `years` periods.
template <typename Scalar>
Scalar capital_recovery_factor(Scalar rate, int years) {
  if (!(rate > Scalar(0)) || years < 1) {
    throw std::domain_error("capital_recovery_factor: requires rate > 0 and years >= 1");
  }
  using std::pow;
  const Scalar growth = pow(Scalar(1) + rate, years);
  return rate * growth / (growth - Scalar(1));
}

/// Annualized capital, O&M, fuel and tax-credit terms for one technology.
///
/// `energy_profile` is the output power of the unit; when it covers less
/// than a year the energy terms are scaled up to a year. `efficiency` holds
/// one conversion efficiency per sample and is used only for fuel.
AnnualizedCost annualize_costs(const CostParameters& params, double rated_power_kw, const TimeSeries& energy_profile,
                               const Eigen::VectorXd& efficiency);

/// Same, with the constant `params.efficiency`.
AnnualizedCost annualize_costs(const CostParameters& params, double rated_power_kw, const TimeSeries& energy_profile);

/// Storage: capital on both power and energy ratings plus fixed O&M.
AnnualizedCost annualize_storage_costs(const CostParameters& params, double power_kw, double energy_kwh);

/// Annualized cost per kWh of annual output.
double lcoe(const CostParameters& params, double rated_power_kw, double capacity_factor,
            const AnnualizedCost& annualized);

/// Annual energy over rated power times 8760 h.
double realized_capacity_factor(double rated_power_kw, const TimeSeries& output);

struct LcoePoint {
  double capacity_factor = 0.0;
  double lcoe = 0.0;
};

/// LCOE over a grid of capacity factors with the design held fixed. Each
/// point runs the unit flat at `cf * rated_power_kw` for a year.
std::vector<LcoePoint> lcoe_vs_cf_curve(const CostParameters& params, double rated_power_kw,
                                        const std::vector<double>& cf_grid);

void write_lcoe_csv(std::ostream& out, const std::vector<LcoePoint>& curve);

/// Importance-weighted technology scoring matrix.
struct QfdMatrix {
  std::vector<std::string> criteria;
  Eigen::VectorXi importance;       // one weight in [1, 5] per criterion
  std::vector<std::string> technologies;
  Eigen::MatrixXi scores;           // criteria x technologies
};

void validate(const QfdMatrix& matrix);

/// Absolute target per technology: importance-weighted column sums.
Eigen::VectorXi qfd_score(const QfdMatrix& matrix);

/// Community-microgrid screening matrix for six candidate technologies.
QfdMatrix default_qfd_matrix();

}  // namespace dersizer
