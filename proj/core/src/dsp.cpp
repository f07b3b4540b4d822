#include "amc/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "amc/error.hpp"
#include "amc/fft.hpp"

namespace amc::dsp {

using std::numbers::pi;

double kaiser_beta(double attenuation_db) {
  if (attenuation_db > 50.0) return 0.1102 * (attenuation_db - 8.7);
  if (attenuation_db >= 21.0)
    return 0.5842 * std::pow(attenuation_db - 21.0, 0.4) + 0.07886 * (attenuation_db - 21.0);
  return 0.0;
}

std::vector<double> kaiser_lowpass(std::size_t num_taps, double cutoff, double beta) {
  if (num_taps == 0) throw ParameterError("kaiser_lowpass: num_taps must be positive");
  if (!(cutoff > 0.0 && cutoff < 0.5))
    throw ParameterError("kaiser_lowpass: cutoff must be in (0, 0.5) cycles/sample");
  std::vector<double> h(num_taps);
  const double m = static_cast<double>(num_taps - 1);
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  for (std::size_t n = 0; n < num_taps; ++n) {
    const double t = static_cast<double>(n) - m / 2.0;
    const double arg = 2.0 * cutoff * t;
    const double sinc = t == 0.0 ? 1.0 : std::sin(pi * arg) / (pi * arg);
    const double r = m > 0.0 ? 2.0 * static_cast<double>(n) / m - 1.0 : 0.0;
    const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
    h[n] = 2.0 * cutoff * sinc * w;
  }
  double sum = 0.0;
  for (double v : h) sum += v;
  for (double& v : h) v /= sum;
  return h;
}

std::vector<double> rrc_taps(double rolloff, int span_symbols, int samples_per_symbol) {
  if (!(rolloff > 0.0 && rolloff <= 1.0))
    throw ParameterError("rrc_taps: rolloff must be in (0, 1]");
  if (span_symbols <= 0 || samples_per_symbol <= 0)
    throw ParameterError("rrc_taps: span and samples per symbol must be positive");
  const int n_taps = span_symbols * samples_per_symbol + 1;
  const double b = rolloff;
  std::vector<double> h(static_cast<std::size_t>(n_taps));
  for (int i = 0; i < n_taps; ++i) {
    const double t = static_cast<double>(i - n_taps / 2) / samples_per_symbol;
    double v;
    if (t == 0.0) {
      v = 1.0 - b + 4.0 * b / pi;
    } else if (std::abs(std::abs(4.0 * b * t) - 1.0) < 1e-12) {
      v = b / std::sqrt(2.0) *
          ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * b)) + (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * b)));
    } else {
      const double num = std::sin(pi * t * (1.0 - b)) + 4.0 * b * t * std::cos(pi * t * (1.0 + b));
      const double den = pi * t * (1.0 - (4.0 * b * t) * (4.0 * b * t));
      v = num / den;
    }
    h[static_cast<std::size_t>(i)] = v;
  }
  double energy = 0.0;
  for (double v : h) energy += v * v;
  const double g = 1.0 / std::sqrt(energy);
  for (double& v : h) v *= g;
  return h;
}

std::vector<cd> filter_same(std::span<const cd> x, std::span<const double> taps) {
  const std::size_t n = x.size();
  const std::size_t m = taps.size();
  if (n == 0 || m == 0) return std::vector<cd>(n);
  const std::size_t delay = (m - 1) / 2;
  // y[i] = sum_j taps[m-1-j] * xp[i + j], xp = x zero-padded by m-1-delay in front.
  const std::size_t front = m - 1 - delay;
  std::vector<double> re(n + m - 1, 0.0), im(n + m - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    re[front + i] = x[i].real();
    im[front + i] = x[i].imag();
  }
  std::vector<double> yr(n, 0.0), yi(n, 0.0);
  constexpr std::size_t kBlock = 1024;
  for (std::size_t b = 0; b < n; b += kBlock) {
    const std::size_t e = std::min(n, b + kBlock);
    for (std::size_t j = 0; j < m; ++j) {
      const double h = taps[m - 1 - j];
      const double* pr = re.data() + j;
      const double* pi = im.data() + j;
      for (std::size_t i = b; i < e; ++i) {
        yr[i] += h * pr[i];
        yi[i] += h * pi[i];
      }
    }
  }
  std::vector<cd> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = {yr[i], yi[i]};
  return y;
}

std::vector<cd> upsample_filter(std::span<const cd> x, int factor, std::span<const double> taps) {
  if (factor <= 0) throw ParameterError("upsample_filter: factor must be positive");
  if (x.empty()) return {};
  const std::size_t f = static_cast<std::size_t>(factor);
  std::vector<cd> y(x.size() * f + taps.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const cd s = x[i];
    cd* out = y.data() + i * f;
    for (std::size_t k = 0; k < taps.size(); ++k) out[k] += taps[k] * s;
  }
  return y;
}

std::vector<double> resampler_prototype(int up, int down, int taps_per_phase,
                                        double attenuation_db) {
  if (up <= 0 || down <= 0) throw ParameterError("resampler_prototype: factors must be positive");
  const int rate = std::max(up, down);
  const std::size_t n = static_cast<std::size_t>(taps_per_phase * up) | 1U;
  return kaiser_lowpass(n, 0.5 / rate, kaiser_beta(attenuation_db));
}

std::vector<cd> resample_rational(std::span<const cd> x, int up, int down,
                                  std::span<const double> prototype) {
  if (up <= 0 || down <= 0) throw ParameterError("resample_rational: factors must be positive");
  if (x.empty()) return {};
  const std::int64_t len = static_cast<std::int64_t>(x.size());
  const std::int64_t u = up, d = down;
  const std::int64_t n_taps = static_cast<std::int64_t>(prototype.size());
  const std::int64_t delay = (n_taps - 1) / 2;
  const std::int64_t n_out = (len * u + d - 1) / d;
  const double gain = static_cast<double>(up);
  std::vector<cd> y(static_cast<std::size_t>(n_out));
  for (std::int64_t m = 0; m < n_out; ++m) {
    // Position on the upsampled grid, shifted by the prototype's group delay.
    const std::int64_t t = m * d + delay;
    std::int64_t i = std::min(t / u, len - 1);
    double re = 0.0, im = 0.0;
    for (; i >= 0; --i) {
      const std::int64_t k = t - i * u;
      if (k >= n_taps) break;
      const double h = prototype[static_cast<std::size_t>(k)];
      re += h * x[static_cast<std::size_t>(i)].real();
      im += h * x[static_cast<std::size_t>(i)].imag();
    }
    y[static_cast<std::size_t>(m)] = {gain * re, gain * im};
  }
  return y;
}

std::vector<double> welch_psd(std::span<const cd> x, std::size_t nfft, double sample_rate) {
  if (nfft < 2 || x.size() < nfft)
    throw ParameterError("welch_psd: segment shorter than the FFT length");
  std::vector<double> window(nfft);
  double u = 0.0;
  for (std::size_t n = 0; n < nfft; ++n) {
    window[n] = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(n) / static_cast<double>(nfft));
    u += window[n] * window[n];
  }
  const std::size_t step = nfft / 2;
  const std::size_t segments = (x.size() - nfft) / step + 1;
  std::vector<double> psd(nfft, 0.0);
  std::vector<cd> frame(nfft);
  for (std::size_t s = 0; s < segments; ++s) {
    const cd* src = x.data() + s * step;
    for (std::size_t n = 0; n < nfft; ++n) frame[n] = src[n] * window[n];
    const auto spectrum = fft::forward(frame);
    for (std::size_t k = 0; k < nfft; ++k) psd[k] += std::norm(spectrum[k]);
  }
  const double scale = 1.0 / (sample_rate * u * static_cast<double>(segments));
  for (double& p : psd) p *= scale;
  return psd;
}

double bin_frequency(std::size_t k, std::size_t nfft, double sample_rate) noexcept {
  const double df = sample_rate / static_cast<double>(nfft);
  return k < nfft / 2 ? static_cast<double>(k) * df
                      : (static_cast<double>(k) - static_cast<double>(nfft)) * df;
}

double mean_power(std::span<const cd> x) noexcept {
  if (x.empty()) return 0.0;
  double p = 0.0;
  for (const cd& v : x) p += std::norm(v);
  return p / static_cast<double>(x.size());
}

double peak_power(std::span<const cd> x) noexcept {
  double p = 0.0;
  for (const cd& v : x) p = std::max(p, std::norm(v));
  return p;
}

double normalize_power(std::span<cd> x) {
  const double p = mean_power(x);
  if (!(p > 0.0)) throw ParameterError("normalize_power: zero-power signal");
  const double g = 1.0 / std::sqrt(p);
  for (cd& v : x) v *= g;
  return g;
}

}  // namespace amc::dsp
