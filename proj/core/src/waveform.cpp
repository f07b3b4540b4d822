#include "amc/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "amc/dsp.hpp"
#include "amc/error.hpp"
#include "amc/fft.hpp"

namespace amc {
namespace {

unsigned gray_decode(unsigned g) {
  unsigned b = g;
  for (unsigned shift = g >> 1; shift; shift >>= 1) b ^= shift;
  return b;
}

// Amplitude of a Gray-labelled PAM axis with `levels` points.
double pam_level(unsigned bits, unsigned levels) {
  return 2.0 * gray_decode(bits) - (static_cast<double>(levels) - 1.0);
}

struct Ratio {
  int up;
  int down;
};

Ratio rate_ratio(double out_rate, double in_rate) {
  const auto out_hz = std::llround(out_rate);
  const auto in_hz = std::llround(in_rate);
  if (out_hz <= 0 || in_hz <= 0) throw ParameterError("sample rates must be positive");
  const auto g = std::gcd(out_hz, in_hz);
  const auto up = out_hz / g;
  const auto down = in_hz / g;
  if (up > 1000 || down > 1000)
    throw ParameterError("resampling ratio " + std::to_string(up) + "/" + std::to_string(down) +
                         " is not a small rational");
  return {static_cast<int>(up), static_cast<int>(down)};
}

std::vector<cd> resample(const std::vector<cd>& x, Ratio r) {
  if (r.up == r.down) return x;
  const auto proto = dsp::resampler_prototype(r.up, r.down);
  return dsp::resample_rational(x, r.up, r.down, proto);
}

std::size_t output_length(double out_rate, double duration) {
  if (!(duration > 0.0)) throw ParameterError("duration must be positive");
  const auto n = static_cast<std::size_t>(std::llround(out_rate * duration));
  if (n == 0) throw ParameterError("duration shorter than one output sample");
  return n;
}

IqSegment cut(const std::vector<cd>& x, std::size_t start, std::size_t n, double rate) {
  if (start + n > x.size()) throw ParameterError("internal: synthesized stream too short");
  IqSegment seg{std::vector<cd>(x.begin() + static_cast<std::ptrdiff_t>(start),
                                x.begin() + static_cast<std::ptrdiff_t>(start + n)),
                rate};
  dsp::normalize_power(seg.samples);
  return seg;
}

}  // namespace

std::vector<cd> constellation(Order order) {
  switch (order) {
    case Order::BPSK:
      return {cd(1.0, 0.0), cd(-1.0, 0.0)};
    case Order::QPSK:
    case Order::QAM16:
    case Order::QAM64: {
      const int bits = bits_per_symbol(order);
      const unsigned axis_bits = static_cast<unsigned>(bits / 2);
      const unsigned levels = 1U << axis_bits;
      const unsigned m = 1U << bits;
      const double norm = std::sqrt(2.0 * (static_cast<double>(m) - 1.0) / 3.0);
      std::vector<cd> points(m);
      for (unsigned b = 0; b < m; ++b) {
        const unsigned i_bits = b >> axis_bits;
        const unsigned q_bits = b & (levels - 1);
        points[b] = cd(pam_level(i_bits, levels), pam_level(q_bits, levels)) / norm;
      }
      return points;
    }
  }
  return {};
}

std::vector<cd> map_symbols(Order order, std::size_t n, Rng& rng) {
  if (n == 0) throw ParameterError("map_symbols: n must be positive");
  const auto points = constellation(order);
  std::vector<cd> out(n);
  for (auto& s : out) s = points[rng.below(points.size())];
  return out;
}

IqSegment synthesize_sc(Order order, const ScParams& params, double out_rate, double duration,
                        Rng& rng) {
  if (!(params.rrc_rolloff > 0.0 && params.rrc_rolloff <= 1.0))
    throw ParameterError("synthesize_sc: RRC rolloff must be in (0, 1]");
  if (out_rate < params.dac_rate) throw ParameterError("synthesize_sc: out_rate below DAC rate");
  const double sps_real = params.dac_rate / params.symbol_rate;
  const int sps = static_cast<int>(std::lround(sps_real));
  if (sps < 1 || std::abs(sps_real - sps) > 1e-9)
    throw ParameterError("synthesize_sc: DAC rate must be an integer multiple of the symbol rate");

  const std::size_t n_out = output_length(out_rate, duration);
  const Ratio ratio = rate_ratio(out_rate, params.dac_rate);
  const auto taps = dsp::rrc_taps(params.rrc_rolloff, params.rrc_span_symbols, sps);

  // Generate enough symbols that the kept window lies in the filters' steady state.
  const std::size_t transient = static_cast<std::size_t>(params.rrc_span_symbols * sps);
  const std::size_t native_needed =
      (n_out * static_cast<std::size_t>(ratio.down) + ratio.up - 1) / ratio.up;
  const std::size_t n_sym = (native_needed + 2 * transient + 256) / static_cast<std::size_t>(sps) + 1;

  const auto symbols = map_symbols(order, n_sym, rng);
  const auto shaped = dsp::upsample_filter(symbols, sps, taps);
  const auto resampled = resample(shaped, ratio);
  const std::size_t start = ((transient + 64) * static_cast<std::size_t>(ratio.up)) /
                            static_cast<std::size_t>(ratio.down);
  return cut(resampled, start, n_out, out_rate);
}

int OfdmParams::cp_length() const noexcept {
  return static_cast<int>(std::lround(ifft_size() * cp_fraction));
}

std::vector<int> OfdmParams::used_subcarriers() const {
  if (n_subcarriers <= 0 || n_guards < 0 || n_guards >= n_subcarriers)
    throw ParameterError("OfdmParams: invalid subcarrier/guard counts");
  const int low_guards = (n_guards + 1) / 2;
  const int lowest = -n_subcarriers / 2 + low_guards;
  const int highest = n_subcarriers / 2 - 1 - (n_guards - low_guards);
  std::vector<int> used;
  for (int k = lowest; k <= highest; ++k) {
    if (k == 0 && dc_null) continue;
    used.push_back(k);
  }
  return used;
}

std::vector<cd> ofdm_symbol(Order order, const OfdmParams& params, Rng& rng) {
  const auto used = params.used_subcarriers();
  for (int p : params.pilot_indices)
    if (std::find(used.begin(), used.end(), p) == used.end())
      throw ParameterError("OfdmParams: pilot index " + std::to_string(p) +
                           " outside the used subcarrier set");
  if (params.ifft_oversample < 1) throw ParameterError("OfdmParams: ifft_oversample must be >= 1");

  const int n_fft = params.ifft_size();
  std::vector<int> data;
  for (int k : used)
    if (std::find(params.pilot_indices.begin(), params.pilot_indices.end(), k) ==
        params.pilot_indices.end())
      data.push_back(k);

  std::vector<cd> bins(static_cast<std::size_t>(n_fft), cd{});
  auto bin = [n_fft](int k) { return static_cast<std::size_t>((k % n_fft + n_fft) % n_fft); };
  const auto symbols = map_symbols(order, data.size(), rng);
  for (std::size_t i = 0; i < data.size(); ++i) bins[bin(data[i])] = symbols[i];
  for (int p : params.pilot_indices) bins[bin(p)] = (rng.next() & 1U) ? cd(1.0, 0.0) : cd(-1.0, 0.0);

  const auto body = fft::inverse(bins);
  const auto cp = static_cast<std::size_t>(params.cp_length());
  std::vector<cd> out;
  out.reserve(body.size() + cp);
  out.insert(out.end(), body.end() - static_cast<std::ptrdiff_t>(cp), body.end());
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

IqSegment synthesize_ofdm(Order order, const OfdmParams& params, double out_rate,
                          double duration, Rng& rng) {
  const std::size_t n_out = output_length(out_rate, duration);
  const auto sym_len = static_cast<std::size_t>(params.symbol_length());
  if (duration * params.native_rate + 1e-9 < static_cast<double>(sym_len))
    throw ParameterError("synthesize_ofdm: duration shorter than one OFDM symbol");
  const Ratio ratio = rate_ratio(out_rate, params.native_rate);

  const std::size_t native_needed =
      (n_out * static_cast<std::size_t>(ratio.down) + ratio.up - 1) / ratio.up;
  const std::size_t n_symbols = (native_needed + 256) / sym_len + 2;
  std::vector<cd> stream;
  stream.reserve(n_symbols * sym_len);
  for (std::size_t s = 0; s < n_symbols; ++s) {
    const auto sym = ofdm_symbol(order, params, rng);
    stream.insert(stream.end(), sym.begin(), sym.end());
  }
  const auto resampled = resample(stream, ratio);
  // No preamble: the segment starts at an arbitrary point of the symbol stream.
  const std::size_t sym_out = sym_len * static_cast<std::size_t>(ratio.up) /
                              static_cast<std::size_t>(ratio.down);
  const std::size_t start = 64 + rng.below(std::max<std::size_t>(sym_out, 1));
  return cut(resampled, start, n_out, out_rate);
}

IqSegment synthesize(const ModulationScheme& scheme, double out_rate, double duration, Rng& rng) {
  if (scheme.family == Family::SC) return synthesize_sc(scheme.order, ScParams{}, out_rate, duration, rng);
  return synthesize_ofdm(scheme.order, OfdmParams{}, out_rate, duration, rng);
}

}  // namespace amc
