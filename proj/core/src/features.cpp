#include "amc/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "amc/dsp.hpp"
#include "amc/error.hpp"
#include "amc/fft.hpp"

namespace amc {

using std::numbers::pi;

namespace {

constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "snr_est",   "sigma_aa",  "sigma_a",    "sigma_af", "n_c",     "c42_tilde",
    "c63_tilde", "gamma2_max", "gamma4_max", "mu42_f",  "rxx_max", "papr"};

double mean_amplitude(std::span<const cd> x) {
  double s = 0.0;
  for (const cd& v : x) s += std::sqrt(std::norm(v));
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

}  // namespace

std::array<double, kNumFeatures> FeatureVector::to_array() const noexcept {
  return {snr_est,   sigma_aa,   sigma_a,    sigma_af, n_c,     c42_tilde,
          c63_tilde, gamma2_max, gamma4_max, mu42_f,   rxx_max, papr};
}

FeatureVector FeatureVector::from_array(const std::array<double, kNumFeatures>& v) noexcept {
  FeatureVector f;
  f.snr_est = v[0];
  f.sigma_aa = v[1];
  f.sigma_a = v[2];
  f.sigma_af = v[3];
  f.n_c = v[4];
  f.c42_tilde = v[5];
  f.c63_tilde = v[6];
  f.gamma2_max = v[7];
  f.gamma4_max = v[8];
  f.mu42_f = v[9];
  f.rxx_max = v[10];
  f.papr = v[11];
  return f;
}

const std::array<std::string_view, kNumFeatures>& feature_names() noexcept { return kFeatureNames; }

std::size_t feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i)
    if (kFeatureNames[i] == name) return i;
  throw ParameterError("unknown feature '" + std::string(name) + "'");
}

double estimate_snr(const IqSegment& seg, const ReceiverConfig& cfg) {
  const std::size_t nfft = cfg.welch_nfft;
  if (seg.size() < nfft)
    throw ParameterError("estimate_snr: segment shorter than the periodogram length");
  if (!(dsp::mean_power(seg.samples) > 0.0))
    throw DegenerateInputError("snr_est", "zero-power segment");

  const auto psd = dsp::welch_psd(seg.samples, nfft, seg.sample_rate);
  std::vector<std::size_t> order(nfft);
  std::iota(order.begin(), order.end(), 0);
  auto freq = [&](std::size_t k) { return std::abs(dsp::bin_frequency(k, nfft, seg.sample_rate)); };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return freq(a) < freq(b); });

  const double half_band = cfg.signal_bandwidth_hz / 2.0;
  std::size_t band_bins = 0;
  while (band_bins < nfft && freq(order[band_bins]) < half_band) ++band_bins;
  if (band_bins == 0 || 2 * band_bins > nfft)
    throw ParameterError("estimate_snr: no disjoint noise band of equal width fits the sample rate");

  double p_band = 0.0, p_noise = 0.0;
  for (std::size_t i = 0; i < band_bins; ++i) p_band += psd[order[i]];
  for (std::size_t i = nfft - band_bins; i < nfft; ++i) p_noise += psd[order[i]];

  if (!(p_noise > 0.0)) return kSnrCeiling;
  return std::clamp((p_band - p_noise) / p_noise, kSnrFloor, kSnrCeiling);
}

IqSegment lowpass(const IqSegment& seg, const ReceiverConfig& cfg) {
  if (!(cfg.lowpass_bandwidth_hz < seg.sample_rate))
    throw ParameterError("lowpass: bandwidth must be below the sample rate");
  const double transition = cfg.lowpass_transition_hz / seg.sample_rate;
  const double cutoff = cfg.lowpass_bandwidth_hz / 2.0 / seg.sample_rate;
  const auto n = static_cast<std::size_t>(
      std::ceil((cfg.lowpass_attenuation_db - 8.0) / (2.285 * 2.0 * pi * transition))) | 1U;
  const auto taps = dsp::kaiser_lowpass(n, cutoff, dsp::kaiser_beta(cfg.lowpass_attenuation_db));
  return IqSegment{dsp::filter_same(seg.samples, taps), seg.sample_rate};
}

std::vector<double> cn_amplitude(const IqSegment& seg) {
  const double mu = mean_amplitude(seg.samples);
  if (!(mu > 0.0)) throw DegenerateInputError("a_cn", "zero-power segment");
  std::vector<double> a(seg.size());
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = std::sqrt(std::norm(seg.samples[n])) / mu - 1.0;
  return a;
}

std::vector<double> inst_frequency(const IqSegment& seg, double norm_rate_hz, bool centered) {
  if (seg.size() < 2) return {};
  const double scale = seg.sample_rate / (2.0 * pi * norm_rate_hz);
  std::vector<double> f(seg.size() - 1);
  for (std::size_t n = 0; n + 1 < seg.size(); ++n)
    f[n] = std::arg(seg.samples[n + 1] * std::conj(seg.samples[n])) * scale;
  if (centered) {
    const double mean = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
    for (double& v : f) v -= mean;
  }
  return f;
}

NonweakMask nonweak_mask(const IqSegment& seg, double threshold) {
  const double mu = mean_amplitude(seg.samples);
  if (!(mu > 0.0)) throw DegenerateInputError("n_c", "zero-power segment");
  NonweakMask m;
  m.mask.resize(seg.size());
  for (std::size_t n = 0; n < seg.size(); ++n) {
    const bool strong = std::sqrt(std::norm(seg.samples[n])) / mu > threshold;
    m.mask[n] = strong ? 1 : 0;
    m.count += strong;
  }
  m.fraction = seg.size() ? static_cast<double>(m.count) / static_cast<double>(seg.size()) : 0.0;
  return m;
}

Cumulants cumulants(std::span<const cd> x, double snr_est) {
  if (x.empty()) throw DegenerateInputError("c42_tilde", "empty segment");
  cd m20{}, m41{};
  double m21 = 0.0, m42 = 0.0, m63 = 0.0;
  for (const cd& s : x) {
    const double p = std::norm(s);
    const cd s2 = s * s;
    m20 += s2;
    m41 += s2 * p;
    m21 += p;
    m42 += p * p;
    m63 += p * p * p;
  }
  const double n = static_cast<double>(x.size());
  m20 /= n;
  m41 /= n;
  m21 /= n;
  m42 /= n;
  m63 /= n;
  if (!(m21 > 0.0)) throw DegenerateInputError("c42_tilde", "zero-power segment");

  const double m20_sq = std::norm(m20);
  Cumulants c;
  c.power = m21;
  c.c42 = m42 - m20_sq - 2.0 * m21 * m21;
  c.c63 = m63 - 6.0 * std::real(m20 * std::conj(m41)) - 9.0 * m42 * m21 +
          12.0 * m21 * m21 * m21 + 18.0 * m20_sq * m21;
  double factor;
  if (snr_est > 0.0) {
    factor = (1.0 + snr_est) / (m21 * snr_est);
  } else {
    factor = 1.0 / m21;
    c.corrected = false;
  }
  c.c42_tilde = c.c42 * factor * factor;
  c.c63_tilde = c.c63 * factor * factor * factor;
  return c;
}

Cumulants cumulants(const IqSegment& seg, double snr_est) { return cumulants(seg.samples, snr_est); }

double gamma_max(std::span<const double> a_cn, int power) {
  if (a_cn.size() < 64) throw ParameterError("gamma_max: need at least 64 samples");
  if (power < 1) throw ParameterError("gamma_max: power must be positive");
  std::vector<double> y(a_cn.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    double v = 1.0;
    for (int k = 0; k < power; ++k) v *= a_cn[n];
    y[n] = v;
  }
  const auto spectrum = fft::forward_real(y);
  double peak = 0.0;
  for (std::size_t k = 1; k < spectrum.size(); ++k) peak = std::max(peak, std::norm(spectrum[k]));
  return peak / static_cast<double>(a_cn.size());
}

double gamma_max(const IqSegment& seg, int power) { return gamma_max(cn_amplitude(seg), power); }

AmplitudeStats amplitude_stats(std::span<const double> a_cn, const NonweakMask& mask) {
  if (a_cn.empty()) throw DegenerateInputError("sigma_aa", "empty segment");
  double sum_sq = 0.0, sum_abs = 0.0;
  for (double a : a_cn) {
    sum_sq += a * a;
    sum_abs += std::abs(a);
  }
  const double n = static_cast<double>(a_cn.size());
  AmplitudeStats st;
  st.sigma_aa = std::sqrt(std::max(0.0, sum_sq / n - (sum_abs / n) * (sum_abs / n)));

  double s1 = 0.0, s2 = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < a_cn.size() && i < mask.mask.size(); ++i) {
    if (!mask.mask[i]) continue;
    s1 += a_cn[i];
    s2 += a_cn[i] * a_cn[i];
    ++c;
  }
  if (c == 0) throw DegenerateInputError("sigma_a", "no non-weak samples");
  const double cn = static_cast<double>(c);
  st.sigma_a = std::sqrt(std::max(0.0, s2 / cn - (s1 / cn) * (s1 / cn)));
  return st;
}

FrequencyStats frequency_stats(std::span<const double> f_cn, const NonweakMask& mask) {
  double s_abs = 0.0, s2 = 0.0, s4 = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < f_cn.size() && i + 1 < mask.mask.size(); ++i) {
    if (!mask.mask[i + 1]) continue;
    const double f = f_cn[i];
    const double f2 = f * f;
    s_abs += std::abs(f);
    s2 += f2;
    s4 += f2 * f2;
    ++c;
  }
  if (c < 4) throw DegenerateInputError("sigma_af", "fewer than 4 non-weak samples");
  const double n = static_cast<double>(c);
  const double m2 = s2 / n;
  // An RMS below 1e-9 (about 0.01 Hz at the default normalization) is a pure tone.
  if (!(m2 > 1e-18)) throw DegenerateInputError("mu42_f", "instantaneous frequency has zero variance");
  FrequencyStats st;
  st.sigma_af = std::sqrt(std::max(0.0, m2 - (s_abs / n) * (s_abs / n)));
  st.mu42_f = (s4 / n) / (m2 * m2);
  return st;
}

std::vector<cd> autocorrelation(std::span<const cd> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  max_lag = std::min(max_lag, n ? n - 1 : 0);
  std::vector<cd> padded(2 * n, cd{});
  std::copy(x.begin(), x.end(), padded.begin());
  auto spectrum = fft::forward(padded);
  for (cd& v : spectrum) v = std::norm(v);
  const auto r = fft::inverse(spectrum);
  std::vector<cd> out(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) out[k] = r[k] / static_cast<double>(n);
  return out;
}

double autocorr_max(const IqSegment& seg) {
  if (seg.size() < 2) throw ParameterError("autocorr_max: need at least 2 samples");
  const double p = dsp::mean_power(seg.samples);
  if (!(p > 0.0)) throw DegenerateInputError("rxx_max", "zero-power segment");
  const auto r = autocorrelation(seg.samples, seg.size() / 2);
  const double r0 = r[0].real();
  double best = 0.0;
  for (std::size_t k = 1; k < r.size(); ++k) best = std::max(best, std::abs(r[k]));
  return best / r0;
}

double papr(const IqSegment& seg) {
  const double p = dsp::mean_power(seg.samples);
  if (!(p > 0.0)) throw DegenerateInputError("papr", "zero-power segment");
  return dsp::peak_power(seg.samples) / p;
}

FeatureVector featurize(const IqSegment& seg, const ReceiverConfig& cfg) {
  FeatureVector fv;
  fv.snr_est = estimate_snr(seg, cfg);

  const IqSegment filtered = lowpass(seg, cfg);
  const auto a_cn = cn_amplitude(filtered);
  const auto mask = nonweak_mask(filtered, cfg.weak_threshold);
  const auto amp = amplitude_stats(a_cn, mask);
  const auto f_cn = inst_frequency(filtered, cfg.symbol_rate_hz);
  const auto freq = frequency_stats(f_cn, mask);
  const auto cum = cumulants(filtered, fv.snr_est);

  fv.sigma_aa = amp.sigma_aa;
  fv.sigma_a = amp.sigma_a;
  fv.sigma_af = freq.sigma_af;
  fv.n_c = mask.fraction;
  fv.c42_tilde = cum.c42_tilde;
  fv.c63_tilde = cum.c63_tilde;
  fv.cumulant_correction_skipped = !cum.corrected;
  fv.gamma2_max = gamma_max(a_cn, 2);
  fv.gamma4_max = gamma_max(a_cn, 4);
  fv.mu42_f = freq.mu42_f;
  fv.rxx_max = autocorr_max(filtered);
  fv.papr = papr(filtered);

  for (double v : fv.to_array())
    if (!std::isfinite(v)) throw DegenerateInputError("featurize", "non-finite feature value");
  return fv;
}

}  // namespace amc
