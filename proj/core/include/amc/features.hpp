#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "amc/waveform.hpp"

namespace amc {

inline constexpr std::size_t kNumFeatures = 12;

/// The twelve classification features, in canonical column order.
struct FeatureVector {
  double snr_est = 0.0;      // blind in-band SNR, linear
  double sigma_aa = 0.0;     // std of |CN amplitude|
  double sigma_a = 0.0;      // std of CN amplitude over non-weak samples
  double sigma_af = 0.0;     // std of |CN inst. frequency| over non-weak samples
  double n_c = 0.0;          // fraction of non-weak samples
  double c42_tilde = 0.0;    // noise-corrected normalized C42
  double c63_tilde = 0.0;    // noise-corrected normalized C63
  double gamma2_max = 0.0;   // spectral peak of the squared CN amplitude
  double gamma4_max = 0.0;   // spectral peak of the 4th-power CN amplitude
  double mu42_f = 0.0;       // kurtosis of CN inst. frequency over non-weak samples
  double rxx_max = 0.0;      // max normalized autocorrelation, lag >= 1
  double papr = 0.0;

  /// True when snr_est <= 0 and the cumulants were only power-normalized.
  bool cumulant_correction_skipped = false;

  std::array<double, kNumFeatures> to_array() const noexcept;
  static FeatureVector from_array(const std::array<double, kNumFeatures>& values) noexcept;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Column names matching FeatureVector::to_array() order.
const std::array<std::string_view, kNumFeatures>& feature_names() noexcept;

/// Index of a feature by column name; throws ParameterError if unknown.
std::size_t feature_index(std::string_view name);

/// Blind receiver front-end settings.
struct ReceiverConfig {
  /// Two-sided width of the signal band B centred on DC. The noise band N
  /// takes the same number of Welch bins closest to +-fs/2.
  double signal_bandwidth_hz = 20e6;
  double weak_threshold = 1.0;
  /// Two-sided low-pass bandwidth applied before feature extraction.
  double lowpass_bandwidth_hz = 20e6;
  std::size_t welch_nfft = 4096;
  /// Normalization of the instantaneous frequency.
  double symbol_rate_hz = 10e6;
  /// Low-pass transition width and stopband attenuation.
  double lowpass_transition_hz = 3e6;
  double lowpass_attenuation_db = 60.0;
};

/// Lower clamp of the blind SNR estimate (linear).
inline constexpr double kSnrFloor = -0.99;
/// Upper clamp, reached only for practically noiseless input.
inline constexpr double kSnrCeiling = 1e9;

/// (P_B - P_N) / P_N from a Welch periodogram, clamped to [kSnrFloor, kSnrCeiling].
double estimate_snr(const IqSegment& seg, const ReceiverConfig& cfg = {});

/// Linear-phase FIR low-pass of width cfg.lowpass_bandwidth_hz; length preserved.
IqSegment lowpass(const IqSegment& seg, const ReceiverConfig& cfg = {});

/// a_cn[n] = |s[n]| / mean|s| - 1.
std::vector<double> cn_amplitude(const IqSegment& seg);

/// Instantaneous frequency divided by norm_rate_hz; element i belongs to
/// sample i+1. Mean-removed unless `centered` is false.
std::vector<double> inst_frequency(const IqSegment& seg, double norm_rate_hz = 10e6,
                                   bool centered = true);

struct NonweakMask {
  std::vector<unsigned char> mask;  // 1 where |s| / mean|s| > threshold
  std::size_t count = 0;
  double fraction = 0.0;
};

NonweakMask nonweak_mask(const IqSegment& seg, double threshold = 1.0);

struct Cumulants {
  double c42_tilde = 0.0;
  double c63_tilde = 0.0;
  double c42 = 0.0;      // raw
  double c63 = 0.0;      // raw
  double power = 0.0;    // M21
  bool corrected = true;
};

/// Sample C42/C63 with the (1+snr)/(P snr) noise correction. snr_est <= 0
/// skips the correction and divides by powers of P instead.
Cumulants cumulants(std::span<const cd> samples, double snr_est);
Cumulants cumulants(const IqSegment& seg, double snr_est);

/// max_k |DFT(a_cn^power)[k]|^2 / N over k != 0.
double gamma_max(std::span<const double> a_cn, int power);
double gamma_max(const IqSegment& seg, int power);

struct AmplitudeStats {
  double sigma_aa = 0.0;
  double sigma_a = 0.0;
};

AmplitudeStats amplitude_stats(std::span<const double> a_cn, const NonweakMask& mask);

struct FrequencyStats {
  double sigma_af = 0.0;
  double mu42_f = 0.0;
};

/// `f_cn` as returned by inst_frequency (one shorter than the mask).
FrequencyStats frequency_stats(std::span<const double> f_cn, const NonweakMask& mask);

/// max over lags 1..N/2 of |R[lag]| / R[0] with the biased estimator.
double autocorr_max(const IqSegment& seg);

/// Biased autocorrelation R[0..max_lag].
std::vector<cd> autocorrelation(std::span<const cd> x, std::size_t max_lag);

double papr(const IqSegment& seg);

/// Blind receiver pipeline: SNR estimate on the raw segment, low-pass, then
/// every other feature on the filtered segment.
FeatureVector featurize(const IqSegment& seg, const ReceiverConfig& cfg = {});

}  // namespace amc
