#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>

namespace dersizer {

using Index = Eigen::Index;

inline constexpr double kHoursPerYear = 8760.0;
inline constexpr double kHoursPerDay = 24.0;

/// Uniformly sampled power profile in kW.
///
/// The sample interval is in hours, so `samples[i] * interval_hours` is the
/// energy of sample i in kWh.
struct TimeSeries {
  Eigen::VectorXd samples;
  double interval_hours = 1.0;

  TimeSeries() = default;
  TimeSeries(Eigen::VectorXd values, double interval);

  Index size() const { return samples.size(); }
  bool empty() const { return samples.size() == 0; }
  double operator[](Index i) const { return samples[i]; }
  double duration_hours() const { return static_cast<double>(size()) * interval_hours; }
  /// Factor that scales a horizon total to a per-year total.
  double annualization_factor() const { return kHoursPerYear / duration_hours(); }
  /// Total energy over the horizon in kWh.
  double energy_kwh() const { return samples.sum() * interval_hours; }
  double peak() const { return samples.maxCoeff(); }
};

/// Throws std::invalid_argument unless both series share length and interval.
void require_compatible(const TimeSeries& a, const TimeSeries& b, const std::string& what);

/// Reads a `timestamp,power_kw` CSV.
///
/// Timestamps are either plain numbers (hours) or ISO-8601 date-times
/// (`YYYY-MM-DD HH:MM[:SS]` or with a `T` separator). Spacing must be
/// uniform; the interval is taken from the first two rows.
TimeSeries read_series_csv(std::istream& in);
TimeSeries read_series_csv(const std::string& path);

/// Writes a `timestamp,power_kw` CSV with ISO timestamps starting at
/// 2001-01-01T00:00:00.
void write_series_csv(std::ostream& out, const TimeSeries& series);

/// Shortest round-trip text for a double; locale independent.
std::string format_number(double value);

}  // namespace dersizer
