#include "amc/channel.hpp"

#include <cmath>
#include <numbers>

#include "amc/dsp.hpp"
#include "amc/error.hpp"

namespace amc {

using std::numbers::pi;

HardwareProfile HardwareProfile::lab() { return HardwareProfile{}; }

HardwareProfile HardwareProfile::sdr() {
  HardwareProfile p;
  p.name = "SDR";
  p.cfo_std_hz = 50.0;
  p.dc_offset = {0.02, 0.0};
  p.iq_gain_imbalance_db = 0.5;
  p.iq_phase_imbalance_deg = 2.0;
  p.nonlinearity_backoff_db = 8.0;
  p.phase_noise_step_deg = 0.5;
  p.phase_noise_block = 50;
  return p;
}

HardwareProfile builtin_profile(const std::string& name) {
  if (name == "LAB") return HardwareProfile::lab();
  if (name == "SDR") return HardwareProfile::sdr();
  throw ParameterError("unknown hardware profile '" + name + "'");
}

IqSegment apply_cfo(const IqSegment& seg, double cfo_hz) {
  if (cfo_hz == 0.0) return seg;
  if (!(std::abs(cfo_hz) < seg.sample_rate / 2.0))
    throw ParameterError("apply_cfo: |cfo| must be below half the sample rate");
  IqSegment out = seg;
  const double w = 2.0 * pi * cfo_hz / seg.sample_rate;
  const cd step = std::polar(1.0, w);
  cd rot{1.0, 0.0};
  for (std::size_t n = 0; n < out.samples.size(); ++n) {
    if (n % 256 == 0) rot = std::polar(1.0, w * static_cast<double>(n));
    out.samples[n] *= rot;
    rot *= step;
  }
  return out;
}

IqSegment apply_hardware_profile(const IqSegment& seg, const HardwareProfile& profile, Rng& rng,
                                 double residual_cfo_max_hz) {
  IqSegment out = seg;
  auto& x = out.samples;

  if (profile.iq_gain_imbalance_db != 0.0 || profile.iq_phase_imbalance_deg != 0.0) {
    const double g = std::pow(10.0, profile.iq_gain_imbalance_db / 20.0);
    const double phi = profile.iq_phase_imbalance_deg * pi / 180.0;
    const cd mu = (1.0 + g * std::polar(1.0, -phi)) / 2.0;
    const cd nu = (1.0 - g * std::polar(1.0, phi)) / 2.0;
    for (cd& v : x) v = mu * v + nu * std::conj(v);
  }

  if (profile.nonlinearity_backoff_db) {
    // Rapp AM/AM with smoothness 2; saturation amplitude set by the input backoff.
    // Rapp AM/AM, smoothness 2; saturation set by the input backoff.
    const double p_sat = dsp::mean_power(x) * std::pow(10.0, *profile.nonlinearity_backoff_db / 10.0);
    if (p_sat > 0.0) {
      for (cd& v : x) {
        const double r2 = std::norm(v) / p_sat;  // (a / a_sat)^2
        v *= 1.0 / std::sqrt(std::sqrt(1.0 + r2 * r2));
      }
    }
  }

  if (profile.dc_offset != cd{}) {
    const cd dc = profile.dc_offset * std::sqrt(dsp::mean_power(x));
    for (cd& v : x) v += dc;
  }

  if (profile.phase_noise_step_deg > 0.0 && profile.phase_noise_block > 0) {
    const double sigma = profile.phase_noise_step_deg * pi / 180.0;
    double phase = 0.0;
    for (std::size_t start = 0; start < x.size(); start += profile.phase_noise_block) {
      phase += sigma * rng.normal();
      const cd rot = std::polar(1.0, phase);
      const std::size_t end = std::min(x.size(), start + profile.phase_noise_block);
      for (std::size_t n = start; n < end; ++n) x[n] *= rot;
    }
  }

  if (profile.cfo_std_hz > 0.0 && residual_cfo_max_hz > 0.0) {
    double cfo;
    do {
      cfo = profile.cfo_std_hz * rng.normal();
    } while (std::abs(cfo) > residual_cfo_max_hz);
    out = apply_cfo(out, cfo);
  }
  return out;
}

double interference_scale(const IqSegment& signal, const IqSegment& interferer, double sir_db) {
  const double ps = dsp::mean_power(signal.samples);
  const double pi_ = dsp::mean_power(interferer.samples);
  if (!(pi_ > 0.0)) throw ParameterError("mix_interference: interferer has zero power");
  return std::sqrt(ps / (pi_ * std::pow(10.0, sir_db / 10.0)));
}

IqSegment mix_interference(const IqSegment& signal, const IqSegment& interferer, double sir_db) {
  if (std::isinf(sir_db) && sir_db > 0) return signal;
  if (signal.size() != interferer.size() || signal.sample_rate != interferer.sample_rate)
    throw ParameterError("mix_interference: signal and interferer differ in length or rate");
  const double k = interference_scale(signal, interferer, sir_db);
  IqSegment out = signal;
  for (std::size_t n = 0; n < out.samples.size(); ++n) out.samples[n] += k * interferer.samples[n];
  return out;
}

IqSegment add_awgn(const IqSegment& seg, double snr_db, double signal_bandwidth_hz, Rng& rng,
                   std::optional<double> reference_power) {
  if (std::isinf(snr_db) && snr_db > 0) return seg;
  if (!(signal_bandwidth_hz > 0.0 && signal_bandwidth_hz < seg.sample_rate))
    throw ParameterError("add_awgn: signal bandwidth must lie in (0, sample_rate)");
  const double p_sig = reference_power ? *reference_power : dsp::mean_power(seg.samples);
  if (!(p_sig > 0.0)) throw ParameterError("add_awgn: SNR undefined for a zero-power signal");
  const double in_band_noise = p_sig / std::pow(10.0, snr_db / 10.0);
  const double total_noise = in_band_noise * seg.sample_rate / signal_bandwidth_hz;
  IqSegment out = seg;
  for (cd& v : out.samples) v += rng.complex_normal(total_noise);
  return out;
}

IqSegment apply_channel(const IqSegment& signal, const std::optional<IqSegment>& interferer,
                        const ChannelConfig& config, Rng& rng) {
  IqSegment tx = apply_hardware_profile(signal, config.tx_profile, rng, config.residual_cfo_max_hz);
  const double p_signal = dsp::mean_power(tx.samples);

  IqSegment rx = tx;
  if (config.interferer && config.sir_db && interferer) {
    IqSegment intf = apply_hardware_profile(*interferer, config.interferer->profile, rng, 0.0);
    const double max_cfo = config.interferer_cfo_ppm * 1e-6 * config.carrier_hz;
    intf = apply_cfo(intf, rng.uniform(-max_cfo, max_cfo));
    rx = mix_interference(tx, intf, *config.sir_db);
  }
  rx = add_awgn(rx, config.snr_db, config.signal_bandwidth_hz, rng, p_signal);
  return apply_hardware_profile(rx, config.rx_profile, rng, 0.0);
}

}  // namespace amc
