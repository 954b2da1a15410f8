#include "dersizer/spectral_split.hpp"

#define EIGEN_FFTW_DEFAULT
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dersizer {

namespace {

using Complex = std::complex<double>;

Eigen::VectorXcd fft_forward(Eigen::FFT<double>& fft, const Eigen::VectorXd& x) {
  const std::vector<Complex> in(x.data(), x.data() + x.size());
  std::vector<Complex> out(in.size());
  fft.fwd(out.data(), in.data(), static_cast<int>(in.size()));
  return Eigen::Map<Eigen::VectorXcd>(out.data(), x.size());
}

Eigen::VectorXd fft_inverse_real(Eigen::FFT<double>& fft, const Eigen::VectorXcd& X) {
  const std::vector<Complex> in(X.data(), X.data() + X.size());
  std::vector<Complex> out(in.size());
  fft.inv(out.data(), in.data(), static_cast<int>(in.size()));
  Eigen::VectorXd x(X.size());
  for (Index i = 0; i < X.size(); ++i) x[i] = out[static_cast<std::size_t>(i)].real();
  return x;
}

}  // namespace

FrequencySpectrum forward_transform(const TimeSeries& series) {
  if (series.size() < 1) throw std::invalid_argument("forward_transform: empty series");
  Eigen::FFT<double> fft;
  return {fft_forward(fft, series.samples), series.interval_hours};
}

TimeSeries inverse_transform(const FrequencySpectrum& spectrum) {
  if (spectrum.size() < 1) throw std::invalid_argument("inverse_transform: empty spectrum");
  Eigen::FFT<double> fft;
  return TimeSeries(fft_inverse_real(fft, spectrum.coefficients), spectrum.interval_hours);
}

Index cutoff_bin(double cutoff, Index samples, double interval_hours) {
  const double nyquist = nyquist_frequency(interval_hours);
  if (!(cutoff >= 0.0) || cutoff > nyquist * (1.0 + 1e-12)) {
    throw std::invalid_argument("cutoff frequency " + format_number(cutoff) + " outside [0, " +
                                format_number(nyquist) + "]");
  }
  const double resolution = 1.0 / (static_cast<double>(samples) * interval_hours);
  const auto bin = static_cast<Index>(std::llround(cutoff / resolution));
  return std::clamp<Index>(bin, 0, samples / 2);
}

FrequencySpectrum lowpass_mask(const FrequencySpectrum& spectrum, Index bin) {
  FrequencySpectrum out = spectrum;
  const Index n = spectrum.size();
  for (Index m = 0; m < n; ++m) {
    if (std::min(m, n - m) > bin) out.coefficients[m] = Complex(0.0, 0.0);
  }
  return out;
}

struct SpectralSplitter::Impl {
  TimeSeries series;
  FrequencySpectrum spectrum;
  mutable Eigen::FFT<double> fft;
  mutable std::mutex fft_mutex;  // the backend caches plans on first use
};

SpectralSplitter::SpectralSplitter(TimeSeries series) : impl_(std::make_unique<Impl>()) {
  if (series.size() < 2) throw std::invalid_argument("spectral split: series needs at least 2 samples");
  impl_->series = std::move(series);
  impl_->spectrum = {fft_forward(impl_->fft, impl_->series.samples), impl_->series.interval_hours};
}

SpectralSplitter::~SpectralSplitter() = default;
SpectralSplitter::SpectralSplitter(SpectralSplitter&&) noexcept = default;
SpectralSplitter& SpectralSplitter::operator=(SpectralSplitter&&) noexcept = default;

const TimeSeries& SpectralSplitter::series() const { return impl_->series; }
const FrequencySpectrum& SpectralSplitter::spectrum() const { return impl_->spectrum; }
Index SpectralSplitter::highest_bin() const { return impl_->spectrum.highest_bin(); }

TimeSeries SpectralSplitter::raw_lowpass(Index bin) const {
  if (bin < 0) throw std::invalid_argument("spectral split: negative cut-off bin");
  // Full band keeps every bin; skip the round trip so the share is exact.
  if (bin >= highest_bin()) return impl_->series;
  const FrequencySpectrum masked = lowpass_mask(impl_->spectrum, bin);
  const std::lock_guard lock(impl_->fft_mutex);
  return TimeSeries(fft_inverse_real(impl_->fft, masked.coefficients), impl_->series.interval_hours);
}

SplitResult SpectralSplitter::split_at_bin(Index bin) const {
  bin = std::min(bin, highest_bin());
  SplitResult out;
  out.genset_share = raw_lowpass(bin);
  // Gensets cannot absorb power.
  out.genset_share.samples = out.genset_share.samples.cwiseMax(0.0);
  out.bess_share_ac = TimeSeries(impl_->series.samples - out.genset_share.samples, impl_->series.interval_hours);
  out.cutoff_bin = bin;
  out.cutoff_frequency = static_cast<double>(bin) * impl_->spectrum.resolution();
  return out;
}

SplitResult SpectralSplitter::split(double cutoff) const {
  return split_at_bin(cutoff_bin(cutoff, impl_->series.size(), impl_->series.interval_hours));
}

SplitResult lowpass_split(const TimeSeries& series, double cutoff) {
  return SpectralSplitter(series).split(cutoff);
}

void write_spectrum_csv(std::ostream& out, const FrequencySpectrum& spectrum) {
  out << "bin,frequency_cph,re,im,magnitude\n";
  for (Index m = 0; m <= spectrum.highest_bin(); ++m) {
    const Complex c = spectrum.coefficients[m];
    out << m << ',' << format_number(spectrum.frequency(m)) << ',' << format_number(c.real()) << ','
        << format_number(c.imag()) << ',' << format_number(std::abs(c)) << '\n';
  }
}

}  // namespace dersizer
