#pragma once

#include "dersizer/time_series.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dersizer {

/// Deterministic load shape plus multiplicative Gaussian forecast error.
struct LoadModel {
  Eigen::VectorXd base_profile;  // one period, kW; its maximum is peak_load_kw
  double peak_load_kw = 0.0;
  double noise_std_fraction = 0.0;
  std::uint64_t rng_seed = 0;
  double interval_hours = 1.0;
};

void validate(const LoadModel& model);

/// Tiles the base profile over `horizon` samples and applies
/// `max(0, 1 + eps)` with eps ~ N(0, noise_std_fraction^2) per sample.
TimeSeries generate_load(const LoadModel& model, Index horizon);

/// Parameters of the synthetic community load shape (fractions of peak).
struct LoadShapeOptions {
  double base_fraction = 0.52;
  double morning_fraction = 0.12;
  double evening_fraction = 0.22;
  double summer_cooling_fraction = 0.32;
  double winter_heating_fraction = 0.12;
  double cooling_peak_hour = 16.0;
  double weekend_factor = 0.94;
};

/// Daily and seasonal load shape over `samples` samples, scaled so its
/// maximum is exactly `peak_kw`. Sample 0 is midnight on January 1.
Eigen::VectorXd synthetic_load_shape(double peak_kw, Index samples, double interval_hours,
                                     const LoadShapeOptions& options = {});

enum class RenewableTechnology { pv, wind };

/// Beta(alpha, beta) cloud attenuation; beta == 0 is the point mass at 1.
struct CloudAttenuation {
  double alpha = 5.0;
  double beta = 1.5;
};

/// Wind-speed process with Weibull marginals and AR(1) Gaussian-copula
/// persistence, mapped through a cut-in/rated/cut-out power curve.
struct WindRegime {
  double weibull_shape = 2.0;
  double weibull_scale_ms = 7.0;
  double persistence = 0.9;
  double cut_in_ms = 3.0;
  double rated_speed_ms = 12.0;
  double cut_out_ms = 25.0;
};

struct RenewableModel {
  RenewableTechnology technology = RenewableTechnology::pv;
  double rated_power_kw = 0.0;
  /// Deterministic availability fraction per sample of one period, in [0, 1].
  Eigen::VectorXd shape;
  CloudAttenuation cloud;
  WindRegime wind;
  std::uint64_t rng_seed = 0;
  double interval_hours = 1.0;
};

void validate(const RenewableModel& model);

/// rated * shape * attenuation per sample, clamped to [0, rated].
TimeSeries generate_renewable(const RenewableModel& model, Index horizon);

/// Normalized power of the wind-turbine curve at speed `v` (m/s).
double wind_power_fraction(const WindRegime& regime, double speed_ms);

/// Clear-sky irradiance fraction (cosine of the solar zenith angle, clipped
/// at 0) at the sample midpoints; sample 0 starts at local solar midnight
/// on January 1.
Eigen::VectorXd clear_sky_shape(Index samples, double interval_hours, double latitude_deg = 40.0);

/// load - counted_fraction * sum(renewables), sample-wise. Negative samples
/// are kept.
TimeSeries net_load(const TimeSeries& load, std::span<const TimeSeries> renewables, double counted_fraction);

}  // namespace dersizer
