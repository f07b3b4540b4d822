#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "amc/modulation.hpp"
#include "amc/waveform.hpp"

namespace amc {

/// Sidecar metadata stored next to a raw IQ file.
struct IqMetadata {
  std::uint64_t segment_id = 0;
  double sample_rate = 0.0;
  ModulationScheme scheme;
  std::uint64_t seed = 0;
  double snr_class_db = 0.0;
  std::optional<double> sir_class_db;
  std::optional<ModulationScheme> interferer;
  std::string tx_profile = "LAB";
  std::string rx_profile = "LAB";

  friend bool operator==(const IqMetadata&, const IqMetadata&) = default;
};

/// Writes `<stem>.cf32` (little-endian interleaved float32 I,Q) and
/// `<stem>.json` (metadata). Returns the path of the sample file.
std::filesystem::path write_iq(const std::filesystem::path& stem, const IqSegment& segment,
                               const IqMetadata& meta);

struct IqRecording {
  IqSegment segment;
  IqMetadata meta;
};

/// Reads a `.cf32` file and its `.json` sidecar. The sidecar sample rate is
/// authoritative.
IqRecording read_iq(const std::filesystem::path& samples_path);

std::string to_json(const IqMetadata& meta);
IqMetadata iq_metadata_from_json(const std::string& text);

}  // namespace amc
