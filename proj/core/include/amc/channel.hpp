#pragma once

#include <limits>
#include <optional>
#include <string>

#include "amc/modulation.hpp"
#include "amc/rng.hpp"
#include "amc/waveform.hpp"

namespace amc {

/// Parametric transceiver impairments standing in for a hardware class.
///
/// The numbers are modelling choices, not measurements of any device.
struct HardwareProfile {
  std::string name = "LAB";
  double cfo_std_hz = 0.0;
  cd dc_offset{0.0, 0.0};            // fraction of the input RMS amplitude
  double iq_gain_imbalance_db = 0.0;
  double iq_phase_imbalance_deg = 0.0;
  /// Input backoff of the Rapp saturation curve; nullopt disables it.
  std::optional<double> nonlinearity_backoff_db;
  /// Std. dev. of the random-walk phase increment per block.
  double phase_noise_step_deg = 0.0;
  std::size_t phase_noise_block = 50;

  friend bool operator==(const HardwareProfile&, const HardwareProfile&) = default;

  static HardwareProfile lab();
  static HardwareProfile sdr();
};

/// Looks up a built-in profile by name ("LAB" or "SDR").
HardwareProfile builtin_profile(const std::string& name);

inline constexpr double kInfiniteDb = std::numeric_limits<double>::infinity();

struct Interferer {
  ModulationScheme scheme;
  HardwareProfile profile = HardwareProfile::lab();
};

struct ChannelConfig {
  double snr_db = kInfiniteDb;
  std::optional<double> sir_db;
  std::optional<Interferer> interferer;
  HardwareProfile tx_profile = HardwareProfile::lab();
  HardwareProfile rx_profile = HardwareProfile::lab();
  double residual_cfo_max_hz = 100.0;
  double interferer_cfo_ppm = 5.0;
  double carrier_hz = 5.75e9;
  double signal_bandwidth_hz = 20e6;
};

/// Rotates the segment by a constant frequency offset.
IqSegment apply_cfo(const IqSegment& seg, double cfo_hz);

/// Applies IQ imbalance, Rapp saturation, DC offset, random-walk phase noise
/// and a residual CFO (Gaussian with cfo_std_hz, redrawn until within
/// +-residual_cfo_max_hz), in that order.
IqSegment apply_hardware_profile(const IqSegment& seg, const HardwareProfile& profile, Rng& rng,
                                 double residual_cfo_max_hz = 100.0);

/// Amplitude factor that puts `interferer` at sir_db below `signal`.
double interference_scale(const IqSegment& signal, const IqSegment& interferer, double sir_db);

/// signal + interference_scale(...) * interferer. sir_db = +inf returns the signal.
IqSegment mix_interference(const IqSegment& signal, const IqSegment& interferer, double sir_db);

/// Adds circular white Gaussian noise so that the in-band SNR equals snr_db.
/// In-band noise is the total noise power scaled by signal_bandwidth/sample_rate.
/// `reference_power` defaults to the mean power of `seg`.
IqSegment add_awgn(const IqSegment& seg, double snr_db, double signal_bandwidth_hz, Rng& rng,
                   std::optional<double> reference_power = std::nullopt);

/// Full link: tx impairments on the signal, interferer (own profile and
/// +-ppm CFO) mixed at the configured SIR, AWGN referenced to the signal
/// power, then receiver impairments. The link CFO is drawn once, from the
/// transmitter profile.
IqSegment apply_channel(const IqSegment& signal, const std::optional<IqSegment>& interferer,
                        const ChannelConfig& config, Rng& rng);

}  // namespace amc
