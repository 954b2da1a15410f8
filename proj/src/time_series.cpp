#include "dersizer/time_series.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dersizer {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
long days_from_civil(long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, long& y, unsigned& m, unsigned& d) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, std::size_t line) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::runtime_error("series csv line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return value;
}

// Hours since the Unix epoch, or the plain number when the field is numeric.
double parse_timestamp_hours(const std::string& field, std::size_t line) {
  if (field.find('-') == std::string::npos || field.size() < 10 || field[4] != '-') {
    return parse_double(field, line);
  }
  long year = 0;
  unsigned month = 0, day = 0, hour = 0, minute = 0;
  double second = 0.0;
  char sep = 0;
  const int n = std::sscanf(field.c_str(), "%ld-%u-%u%c%u:%u:%lf", &year, &month, &day, &sep, &hour,
                            &minute, &second);
  if (n < 3 || (n >= 4 && sep != 'T' && sep != ' ') || (n > 3 && n < 6) || month < 1 || month > 12 ||
      day < 1 || day > 31) {
    throw std::runtime_error("series csv line " + std::to_string(line) + ": bad timestamp '" + field + "'");
  }
  return static_cast<double>(days_from_civil(year, month, day)) * kHoursPerDay + hour + minute / 60.0 +
         second / 3600.0;
}

}  // namespace

TimeSeries::TimeSeries(Eigen::VectorXd values, double interval)
    : samples(std::move(values)), interval_hours(interval) {
  if (!(interval_hours > 0.0) || !std::isfinite(interval_hours)) {
    throw std::invalid_argument("time series: sample interval must be > 0");
  }
}

void require_compatible(const TimeSeries& a, const TimeSeries& b, const std::string& what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(what + ": series length mismatch (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  if (std::abs(a.interval_hours - b.interval_hours) > 1e-12 * a.interval_hours) {
    throw std::invalid_argument(what + ": sample interval mismatch");
  }
}

TimeSeries read_series_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error("series csv: empty input");
  ++line_no;
  if (trim(line) != "timestamp,power_kw") {
    throw std::runtime_error("series csv: expected header 'timestamp,power_kw'");
  }
  std::vector<double> stamps;
  std::vector<double> power;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("series csv line " + std::to_string(line_no) + ": expected two fields");
    }
    stamps.push_back(parse_timestamp_hours(trim(row.substr(0, comma)), line_no));
    power.push_back(parse_double(trim(row.substr(comma + 1)), line_no));
  }
  if (power.empty()) throw std::runtime_error("series csv: no samples");
  double interval = 1.0;
  if (stamps.size() >= 2) {
    interval = stamps[1] - stamps[0];
    if (!(interval > 0.0)) throw std::runtime_error("series csv: timestamps must increase");
    for (std::size_t i = 2; i < stamps.size(); ++i) {
      const double step = stamps[i] - stamps[i - 1];
      if (std::abs(step - interval) > 1e-6 * interval) {
        throw std::runtime_error("series csv: non-uniform spacing at row " + std::to_string(i + 2));
      }
    }
  }
  Eigen::VectorXd values = Eigen::Map<const Eigen::VectorXd>(power.data(), static_cast<Index>(power.size()));
  return TimeSeries(std::move(values), interval);
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open series csv '" + path + "'");
  return read_series_csv(in);
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
  const double origin_hours = static_cast<double>(days_from_civil(2001, 1, 1)) * kHoursPerDay;
  out << "timestamp,power_kw\n";
  for (Index i = 0; i < series.size(); ++i) {
    const double seconds_total = std::round((origin_hours + static_cast<double>(i) * series.interval_hours) * 3600.0);
    const long whole = static_cast<long>(seconds_total);
    const long days = whole / 86400;
    const long rem = whole % 86400;
    long y = 0;
    unsigned m = 0, d = 0;
    civil_from_days(days, y, m, d);
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "%04ld-%02u-%02uT%02ld:%02ld:%02ld", y, m, d, rem / 3600, (rem / 60) % 60,
                  rem % 60);
    out << stamp << ',' << format_number(series[i]) << '\n';
  }
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buffer, ptr);
}

}  // namespace dersizer
