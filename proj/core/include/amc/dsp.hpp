#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace amc::dsp {

using cd = std::complex<double>;

/// Kaiser-windowed sinc low-pass. cutoff is the -6 dB point in cycles/sample
/// (0, 0.5); taps sum to 1.
std::vector<double> kaiser_lowpass(std::size_t num_taps, double cutoff, double beta);

/// Kaiser beta for a target stopband attenuation in dB.
double kaiser_beta(double attenuation_db);

/// Root-raised-cosine taps sampled at samples_per_symbol, spanning
/// span_symbols symbols, normalized to unit energy.
std::vector<double> rrc_taps(double rolloff, int span_symbols, int samples_per_symbol);

/// Linear convolution trimmed to the input length with the filter's group
/// delay ((taps-1)/2) removed.
std::vector<cd> filter_same(std::span<const cd> x, std::span<const double> taps);

/// Zero-stuffs by `factor` and filters with `taps` (full convolution, no trim).
std::vector<cd> upsample_filter(std::span<const cd> x, int factor, std::span<const double> taps);

/// Rational resampler by up/down using a polyphase decomposition of
/// `prototype` (designed at the upsampled rate, unit DC gain per phase after
/// the internal x`up` scaling). Group delay is compensated; the output has
/// ceil(len * up / down) samples.
std::vector<cd> resample_rational(std::span<const cd> x, int up, int down,
                                  std::span<const double> prototype);

/// Default anti-imaging/anti-aliasing prototype for resample_rational.
std::vector<double> resampler_prototype(int up, int down, int taps_per_phase = 24,
                                        double attenuation_db = 80.0);

/// Welch power spectral density: Hann window, 50% overlap, `nfft` points.
/// Returned in FFT bin order (DC first), scaled as a density in power/Hz.
std::vector<double> welch_psd(std::span<const cd> x, std::size_t nfft, double sample_rate);

/// Signed bin frequency in Hz for FFT-ordered bin k.
double bin_frequency(std::size_t k, std::size_t nfft, double sample_rate) noexcept;

double mean_power(std::span<const cd> x) noexcept;

double peak_power(std::span<const cd> x) noexcept;

/// Multiplies in place so that mean power becomes 1. Returns the applied gain.
double normalize_power(std::span<cd> x);

}  // namespace amc::dsp
