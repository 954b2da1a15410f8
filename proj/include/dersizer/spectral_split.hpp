#pragma once

#include "dersizer/time_series.hpp"

#include <complex>
#include <iosfwd>
#include <memory>

namespace dersizer {

/// Unnormalized DFT of a real series: X[m] = sum_k x[k] exp(-2 pi i m k / N).
struct FrequencySpectrum {
  Eigen::VectorXcd coefficients;
  double interval_hours = 1.0;

  Index size() const { return coefficients.size(); }
  /// Bin spacing in cycles per hour.
  double resolution() const { return 1.0 / (static_cast<double>(size()) * interval_hours); }
  /// Highest non-negative bin index, floor(N / 2).
  Index highest_bin() const { return size() / 2; }
  /// |frequency| of bin m in cycles per hour, folding negative frequencies.
  double frequency(Index bin) const { return static_cast<double>(std::min(bin, size() - bin)) * resolution(); }
};

FrequencySpectrum forward_transform(const TimeSeries& series);
/// Real part of the inverse transform.
TimeSeries inverse_transform(const FrequencySpectrum& spectrum);

inline double nyquist_frequency(double interval_hours) { return 0.5 / interval_hours; }

/// Nearest bin edge to `cutoff` (cycles/hour), clamped to [0, N/2].
/// Throws std::invalid_argument if cutoff is outside [0, Nyquist].
Index cutoff_bin(double cutoff, Index samples, double interval_hours);

/// Keeps bins whose folded index is <= `bin`; everything else is zeroed.
FrequencySpectrum lowpass_mask(const FrequencySpectrum& spectrum, Index bin);

struct SplitResult {
  TimeSeries genset_share;   // clamped low-frequency part, >= 0
  TimeSeries bess_share_ac;  // series - genset_share, signed
  double cutoff_frequency = 0.0;
  Index cutoff_bin = 0;
};

/// Splits a net-load series at a cut-off frequency and clamps the low-pass
/// part at zero. Reuses one forward transform across many cut-offs.
class SpectralSplitter {
 public:
  explicit SpectralSplitter(TimeSeries series);
  ~SpectralSplitter();
  SpectralSplitter(SpectralSplitter&&) noexcept;
  SpectralSplitter& operator=(SpectralSplitter&&) noexcept;

  const TimeSeries& series() const;
  const FrequencySpectrum& spectrum() const;
  Index highest_bin() const;

  /// Low-pass reconstruction before the clamp.
  TimeSeries raw_lowpass(Index bin) const;
  SplitResult split_at_bin(Index bin) const;
  SplitResult split(double cutoff) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SplitResult lowpass_split(const TimeSeries& series, double cutoff);

/// `bin,frequency_cph,re,im,magnitude` for the non-negative bins.
void write_spectrum_csv(std::ostream& out, const FrequencySpectrum& spectrum);

}  // namespace dersizer
