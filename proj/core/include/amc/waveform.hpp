#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "amc/modulation.hpp"
#include "amc/rng.hpp"

namespace amc {

using cd = std::complex<double>;

/// A fixed-length complex baseband recording; the unit of classification.
struct IqSegment {
  std::vector<cd> samples;
  double sample_rate = 0.0;  // Hz

  std::size_t size() const noexcept { return samples.size(); }
  double duration() const noexcept { return static_cast<double>(samples.size()) / sample_rate; }
};

struct ScParams {
  double symbol_rate = 10e6;
  double dac_rate = 40e6;
  double rrc_rolloff = 1.0;
  int rrc_span_symbols = 12;
};

struct OfdmParams {
  int n_subcarriers = 64;
  int n_guards = 11;
  bool dc_null = true;
  double cp_fraction = 0.25;
  int ifft_oversample = 2;
  /// Signed subcarrier indices carrying +-1 pilots.
  std::vector<int> pilot_indices = {-21, -7, 7, 21};
  double native_rate = 40e6;

  int ifft_size() const noexcept { return n_subcarriers * ifft_oversample; }
  int cp_length() const noexcept;
  int symbol_length() const noexcept { return ifft_size() + cp_length(); }
  /// Signed indices of the used (data + pilot) subcarriers, ascending.
  std::vector<int> used_subcarriers() const;
};

inline constexpr double kDefaultSampleRate = 50e6;
inline constexpr double kDefaultDuration = 1e-3;

/// The ideal unit-power constellation of `order`, indexed by Gray-coded bit
/// pattern.
std::vector<cd> constellation(Order order);

/// Draws n symbols uniformly from the Gray-mapped unit-power constellation.
std::vector<cd> map_symbols(Order order, std::size_t n, Rng& rng);

/// RRC-shaped single-carrier segment at out_rate, unit mean power.
IqSegment synthesize_sc(Order order, const ScParams& params, double out_rate, double duration,
                        Rng& rng);

/// One OFDM symbol at the native rate: cyclic prefix followed by the IFFT body.
std::vector<cd> ofdm_symbol(Order order, const OfdmParams& params, Rng& rng);

/// Concatenated OFDM symbols resampled to out_rate, unit mean power.
IqSegment synthesize_ofdm(Order order, const OfdmParams& params, double out_rate,
                          double duration, Rng& rng);

/// Dispatches on scheme.family using default parameters.
IqSegment synthesize(const ModulationScheme& scheme, double out_rate, double duration, Rng& rng);

}  // namespace amc
