#include "dersizer/cost_model.hpp"

#include <ostream>

namespace dersizer {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool nonnegative(double v) { return v >= 0.0 && std::isfinite(v); }

}  // namespace

void validate(const CostParameters& p) {
  require(nonnegative(p.overnight_capital_cost), "overnight_capital_cost must be >= 0");
  require(nonnegative(p.fixed_om_cost), "fixed_om_cost must be >= 0");
  require(nonnegative(p.variable_om_cost), "variable_om_cost must be >= 0");
  require(nonnegative(p.fuel_price), "fuel_price must be >= 0");
  require(nonnegative(p.heat_rate), "heat_rate must be >= 0");
  require(nonnegative(p.leveling_factor), "leveling_factor must be >= 0");
  require(nonnegative(p.ptc_rate), "ptc_rate must be >= 0");
  require(nonnegative(p.energy_capital_cost), "energy_capital_cost must be >= 0");
  require(p.discount_rate > 0.0 && std::isfinite(p.discount_rate), "discount_rate must be > 0");
  require(p.lifetime_years >= 1, "lifetime_years must be >= 1");
  require(p.efficiency > 0.0 && p.efficiency <= 1.0, "efficiency must be in (0, 1]");
  require(!(p.is_renewable && p.is_fuel_powered), "is_renewable and is_fuel_powered are mutually exclusive");
}

AnnualizedCost operator+(const AnnualizedCost& a, const AnnualizedCost& b) {
  AnnualizedCost sum;
  sum.capital = a.capital + b.capital;
  sum.om = a.om + b.om;
  sum.fuel = a.fuel + b.fuel;
  sum.tax_credit = a.tax_credit + b.tax_credit;
  sum.total = a.total + b.total;
  return sum;
}

AnnualizedCost annualize_costs(const CostParameters& params, double rated_power_kw, const TimeSeries& energy_profile,
                               const Eigen::VectorXd& efficiency) {
  validate(params);
  require(rated_power_kw > 0.0, "annualize_costs: rated power must be > 0");
  require(!energy_profile.empty(), "annualize_costs: empty energy profile");
  require(efficiency.size() == energy_profile.size(), "annualize_costs: efficiency/profile length mismatch");
  require((energy_profile.samples.array() >= 0.0).all(), "annualize_costs: negative power sample");
  require((efficiency.array() > 0.0).all() && (efficiency.array() <= 1.0).all(),
          "annualize_costs: efficiency samples must be in (0, 1]");

  const double T = energy_profile.interval_hours;
  const double to_year = energy_profile.annualization_factor();
  const double annual_energy = energy_profile.samples.sum() * T * to_year;

  AnnualizedCost cost;
  cost.capital = params.overnight_capital_cost * rated_power_kw *
                 capital_recovery_factor(params.discount_rate, params.lifetime_years);
  cost.om = params.fixed_om_cost * rated_power_kw + params.variable_om_cost * annual_energy;
  if (params.is_fuel_powered) {
    const double input_energy = (energy_profile.samples.array() / efficiency.array()).sum() * T * to_year;
    cost.fuel = params.fuel_price * input_energy * params.heat_rate * params.leveling_factor;
  }
  if (params.is_renewable) {
    cost.tax_credit = params.ptc_rate * annual_energy;
  }
  cost.total = cost.capital + cost.om + cost.fuel - cost.tax_credit;
  return cost;
}

AnnualizedCost annualize_costs(const CostParameters& params, double rated_power_kw, const TimeSeries& energy_profile) {
  return annualize_costs(params, rated_power_kw, energy_profile,
                         Eigen::VectorXd::Constant(energy_profile.size(), params.efficiency));
}

AnnualizedCost annualize_storage_costs(const CostParameters& params, double power_kw, double energy_kwh) {
  validate(params);
  require(power_kw >= 0.0 && energy_kwh >= 0.0, "annualize_storage_costs: ratings must be >= 0");
  AnnualizedCost cost;
  const double crf = capital_recovery_factor(params.discount_rate, params.lifetime_years);
  cost.capital = (params.overnight_capital_cost * power_kw + params.energy_capital_cost * energy_kwh) * crf;
  cost.om = params.fixed_om_cost * power_kw;
  cost.total = cost.capital + cost.om;
  return cost;
}

double lcoe(const CostParameters& params, double rated_power_kw, double capacity_factor,
            const AnnualizedCost& annualized) {
  validate(params);
  require(rated_power_kw > 0.0, "lcoe: rated power must be > 0");
  if (!(capacity_factor > 0.0) || capacity_factor > 1.0) {
    throw std::domain_error("lcoe: capacity factor must be in (0, 1]");
  }
  return annualized.total / (rated_power_kw * kHoursPerYear * capacity_factor);
}

double realized_capacity_factor(double rated_power_kw, const TimeSeries& output) {
  require(rated_power_kw > 0.0, "realized_capacity_factor: rated power must be > 0");
  return output.energy_kwh() * output.annualization_factor() / (rated_power_kw * kHoursPerYear);
}

std::vector<LcoePoint> lcoe_vs_cf_curve(const CostParameters& params, double rated_power_kw,
                                        const std::vector<double>& cf_grid) {
  require(!cf_grid.empty(), "lcoe_vs_cf_curve: empty capacity-factor grid");
  std::vector<LcoePoint> curve;
  curve.reserve(cf_grid.size());
  double previous = 0.0;
  for (double cf : cf_grid) {
    if (!(cf > 0.0) || cf > 1.0) throw std::domain_error("lcoe_vs_cf_curve: capacity factor must be in (0, 1]");
    require(curve.empty() || cf > previous, "lcoe_vs_cf_curve: grid must be ascending");
    previous = cf;
    const TimeSeries flat(Eigen::VectorXd::Constant(static_cast<Index>(kHoursPerYear), rated_power_kw * cf), 1.0);
    const AnnualizedCost cost = annualize_costs(params, rated_power_kw, flat);
    curve.push_back({cf, lcoe(params, rated_power_kw, cf, cost)});
  }
  return curve;
}

void write_lcoe_csv(std::ostream& out, const std::vector<LcoePoint>& curve) {
  out << "capacity_factor,lcoe\n";
  for (const auto& p : curve) out << format_number(p.capacity_factor) << ',' << format_number(p.lcoe) << '\n';
}

void validate(const QfdMatrix& m) {
  const auto n_criteria = static_cast<Index>(m.criteria.size());
  const auto n_tech = static_cast<Index>(m.technologies.size());
  require(n_criteria > 0 && n_tech > 0, "qfd: matrix needs at least one criterion and one technology");
  require(m.importance.size() == n_criteria, "qfd: one importance weight per criterion required");
  require(m.scores.rows() == n_criteria && m.scores.cols() == n_tech,
          "qfd: every technology needs exactly one score per criterion");
  require((m.importance.array() >= 1).all() && (m.importance.array() <= 5).all(),
          "qfd: importance weights must be in [1, 5]");
}

Eigen::VectorXi qfd_score(const QfdMatrix& matrix) {
  validate(matrix);
  return matrix.scores.transpose() * matrix.importance;
}

QfdMatrix default_qfd_matrix() {
  QfdMatrix m;
  m.criteria = {"LCOE",
                "CO2 Emission Reduction",
                "Fuel Consumption Savings",
                "Outage Time Reduction",
                "Dispatchability",
                "Equipment Lifetime",
                "Comply with the U.S. DOE Target"};
  m.technologies = {"PV Panel",
                    "Wind Turbine",
                    "Biomass Genset",
                    "Natural Gas Genset",
                    "Natural Gas Combustion Turbine",
                    "Coal-Fired Power Plant"};
  m.importance.resize(7);
  m.importance << 5, 5, 4, 5, 4, 3, 5;
  m.scores.resize(7, 6);
  // clang-format off
  m.scores <<  9,  9, 3, 3, 1, 1,
               3,  3, 9, 9, 1, 0,
               9,  9, 9, 3, 1, 0,
              -3, -3, 1, 3, 3, 3,
              -1, -1, 1, 3, 3, 1,
               3,  3, 1, 1, 1, 3,
               9,  9, 9, 1, 1, 0;
  // clang-format on
  return m;
}

}  // namespace dersizer
