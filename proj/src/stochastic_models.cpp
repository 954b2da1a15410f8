#include "dersizer/stochastic_models.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace dersizer {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_horizon(Index horizon, Index period, const char* who) {
  require(horizon >= 1, std::string(who) + ": horizon must be >= 1");
  require(period >= 1, std::string(who) + ": empty profile");
  require(horizon % period == 0, std::string(who) + ": horizon must be a multiple of the profile period");
}

double bump(double hour, double centre, double width) {
  double d = std::fmod(std::abs(hour - centre), kHoursPerDay);
  d = std::min(d, kHoursPerDay - d);
  return std::exp(-0.5 * (d / width) * (d / width));
}

}  // namespace

void validate(const LoadModel& model) {
  require(model.base_profile.size() >= 1, "load model: empty base profile");
  require(model.peak_load_kw > 0.0, "load model: peak_load must be > 0");
  require((model.base_profile.array() >= 0.0).all(), "load model: base profile must be >= 0");
  require(std::abs(model.base_profile.maxCoeff() - model.peak_load_kw) <= 1e-9 * model.peak_load_kw,
          "load model: base profile peak must equal peak_load");
  require(model.noise_std_fraction >= 0.0 && model.noise_std_fraction <= 0.5,
          "load model: noise_std_fraction must be in [0, 0.5]");
  require(model.interval_hours > 0.0, "load model: interval must be > 0");
}

TimeSeries generate_load(const LoadModel& model, Index horizon) {
  validate(model);
  const Index period = model.base_profile.size();
  require_horizon(horizon, period, "generate_load");
  Eigen::VectorXd out(horizon);
  std::mt19937_64 rng(model.rng_seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (Index i = 0; i < horizon; ++i) {
    const double base = model.base_profile[i % period];
    if (model.noise_std_fraction == 0.0) {
      out[i] = base;
    } else {
      out[i] = base * std::max(0.0, 1.0 + model.noise_std_fraction * noise(rng));
    }
  }
  return TimeSeries(std::move(out), model.interval_hours);
}

Eigen::VectorXd synthetic_load_shape(double peak_kw, Index samples, double interval_hours,
                                     const LoadShapeOptions& o) {
  require(peak_kw > 0.0, "synthetic_load_shape: peak must be > 0");
  require(samples >= 1 && interval_hours > 0.0, "synthetic_load_shape: bad sampling");
  Eigen::VectorXd shape(samples);
  for (Index i = 0; i < samples; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * interval_hours;
    const double hour = std::fmod(t, kHoursPerDay);
    const double day = std::floor(t / kHoursPerDay);
    const double season = std::cos(2.0 * std::numbers::pi * (day - 200.0) / 365.0);
    const double summer = std::max(0.0, season);
    const double winter = std::max(0.0, -season);
    const bool weekend = static_cast<long>(day) % 7 >= 5;
    double v = o.base_fraction + o.morning_fraction * bump(hour, 8.0, 2.0) +
               o.evening_fraction * bump(hour, 19.0, 2.5) +
               o.summer_cooling_fraction * summer * bump(hour, o.cooling_peak_hour, 3.0) +
               o.winter_heating_fraction * winter * (bump(hour, 7.5, 2.0) + bump(hour, 19.5, 2.5));
    v *= 0.9 + 0.1 * std::max(0.0, std::sin(std::numbers::pi * hour / kHoursPerDay));
    if (weekend) v *= o.weekend_factor;
    shape[i] = v;
  }
  shape *= peak_kw / shape.maxCoeff();
  return shape;
}

void validate(const RenewableModel& model) {
  require(model.rated_power_kw >= 0.0, "renewable model: rated_power must be >= 0");
  require(model.shape.size() >= 1, "renewable model: empty availability shape");
  require((model.shape.array() >= 0.0).all() && (model.shape.array() <= 1.0).all(),
          "renewable model: availability shape must be in [0, 1]");
  require(model.interval_hours > 0.0, "renewable model: interval must be > 0");
  if (model.technology == RenewableTechnology::pv) {
    require(model.cloud.alpha > 0.0 && model.cloud.beta >= 0.0,
            "renewable model: cloud attenuation needs alpha > 0 and beta >= 0");
  } else {
    const auto& w = model.wind;
    require(w.weibull_shape > 0.0 && w.weibull_scale_ms > 0.0,
            "renewable model: Weibull shape and scale must be > 0");
    require(w.persistence >= 0.0 && w.persistence < 1.0, "renewable model: persistence must be in [0, 1)");
    require(w.cut_in_ms >= 0.0 && w.cut_in_ms < w.rated_speed_ms && w.rated_speed_ms <= w.cut_out_ms,
            "renewable model: need 0 <= cut_in < rated_speed <= cut_out");
  }
}

double wind_power_fraction(const WindRegime& w, double v) {
  if (v < w.cut_in_ms || v >= w.cut_out_ms) return 0.0;
  if (v >= w.rated_speed_ms) return 1.0;
  const double ci3 = w.cut_in_ms * w.cut_in_ms * w.cut_in_ms;
  const double vr3 = w.rated_speed_ms * w.rated_speed_ms * w.rated_speed_ms;
  return (v * v * v - ci3) / (vr3 - ci3);
}

TimeSeries generate_renewable(const RenewableModel& model, Index horizon) {
  validate(model);
  const Index period = model.shape.size();
  require_horizon(horizon, period, "generate_renewable");
  Eigen::VectorXd out(horizon);
  std::mt19937_64 rng(model.rng_seed);

  if (model.technology == RenewableTechnology::pv) {
    const bool degenerate = model.cloud.beta == 0.0;
    std::gamma_distribution<double> gamma_a(model.cloud.alpha, 1.0);
    std::gamma_distribution<double> gamma_b(degenerate ? 1.0 : model.cloud.beta, 1.0);
    for (Index i = 0; i < horizon; ++i) {
      double attenuation = 1.0;
      if (!degenerate) {
        const double x = gamma_a(rng);
        const double y = gamma_b(rng);
        attenuation = x / (x + y);
      }
      out[i] = model.rated_power_kw * model.shape[i % period] * attenuation;
    }
  } else {
    const auto& w = model.wind;
    std::normal_distribution<double> normal(0.0, 1.0);
    const double innovation = std::sqrt(1.0 - w.persistence * w.persistence);
    double z = normal(rng);
    for (Index i = 0; i < horizon; ++i) {
      if (i > 0) z = w.persistence * z + innovation * normal(rng);
      // Gaussian copula to a Weibull marginal; survival form keeps the tail accurate.
      const double survival = 0.5 * std::erfc(z / std::numbers::sqrt2);
      const double speed = w.weibull_scale_ms * std::pow(-std::log(std::max(survival, 1e-300)), 1.0 / w.weibull_shape);
      out[i] = model.rated_power_kw * model.shape[i % period] * wind_power_fraction(w, speed);
    }
  }
  out = out.cwiseMax(0.0).cwiseMin(model.rated_power_kw);
  return TimeSeries(std::move(out), model.interval_hours);
}

Eigen::VectorXd clear_sky_shape(Index samples, double interval_hours, double latitude_deg) {
  require(samples >= 1 && interval_hours > 0.0, "clear_sky_shape: bad sampling");
  constexpr double deg = std::numbers::pi / 180.0;
  const double phi = latitude_deg * deg;
  Eigen::VectorXd shape(samples);
  for (Index i = 0; i < samples; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * interval_hours;
    const double hour = std::fmod(t, kHoursPerDay);
    const double day = std::floor(t / kHoursPerDay);
    const double declination = 23.45 * deg * std::sin(2.0 * std::numbers::pi * (284.0 + day + 1.0) / 365.0);
    const double hour_angle = 15.0 * deg * (hour - 12.0);
    const double cos_zenith = std::sin(phi) * std::sin(declination) +
                              std::cos(phi) * std::cos(declination) * std::cos(hour_angle);
    shape[i] = std::clamp(cos_zenith, 0.0, 1.0);
  }
  return shape;
}

TimeSeries net_load(const TimeSeries& load, std::span<const TimeSeries> renewables, double counted_fraction) {
  require(counted_fraction >= 0.0 && counted_fraction <= 1.0, "net_load: counted fraction must be in [0, 1]");
  TimeSeries out = load;
  for (const auto& re : renewables) {
    require_compatible(load, re, "net_load");
    out.samples -= counted_fraction * re.samples;
  }
  return out;
}

}  // namespace dersizer
