#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amc/channel.hpp"
#include "amc/dataset.hpp"
#include "amc/features.hpp"

namespace amc {

/// One recording condition: a cell of the scenario grid (per class).
struct Condition {
  double snr_db = 10.0;
  std::optional<double> sir_db;
  std::optional<ModulationScheme> interferer;
  std::string tx_profile = "LAB";
  std::string rx_profile = "LAB";

  friend bool operator==(const Condition&, const Condition&) = default;

  /// Stable textual key, e.g. "snr=10|sir=5|intf=SC-16QAM|tx=SDR|rx=SDR".
  std::string key() const;
  bool matches(const FeatureRecord& r) const;
};

/// Grid of conditions. A nullopt interferer yields an interference-free
/// cell; every concrete interferer is crossed with every SIR.
struct ConditionSet {
  std::vector<double> snr_db;
  std::vector<double> sir_db;
  std::vector<std::optional<ModulationScheme>> interferers = {std::nullopt};
  std::string tx_profile = "LAB";
  std::string rx_profile = "LAB";

  std::vector<Condition> expand() const;
  bool matches(const FeatureRecord& r) const;
  /// Same expanded cells, irrespective of order.
  bool same_cells(const ConditionSet& other) const;
};

enum class Axis { Snr, Sir };
std::string to_string(Axis axis);
Axis parse_axis(std::string_view text);

/// One train/test protocol evaluated by cross-validation.
struct Experiment {
  std::string label;
  ConditionSet train;
  ConditionSet test;
  Axis breakdown = Axis::Snr;
  std::optional<std::size_t> train_n;
  std::optional<std::size_t> test_n;
};

enum class ScenarioKind {
  Baseline,
  BaselineSingleSnrTrain,
  HardwareCross,
  InterferenceTrained,
  InterferenceUntrained,
};

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view name);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Baseline;
  std::size_t segments_per_cell = 200;
  std::uint64_t seed = 1;
  double sample_rate = kDefaultSampleRate;
  double duration = kDefaultDuration;
  double residual_cfo_max_hz = 100.0;
  double interferer_cfo_ppm = 5.0;
  double carrier_hz = 5.75e9;
  std::string interferer_profile = "LAB";
  /// Extra or overriding hardware profiles, by name.
  std::map<std::string, HardwareProfile> profiles;
  std::size_t train_n = 2000;
  std::size_t test_n = 2000;
  std::size_t folds = 10;
  std::vector<Experiment> experiments;

  /// Union of all experiment cells, in order of first appearance.
  std::vector<Condition> cells() const;
  HardwareProfile profile(const std::string& name) const;
};

/// The built-in desk-scale scenarios.
ScenarioSpec builtin_scenario(ScenarioKind kind);
ScenarioSpec builtin_scenario(std::string_view name);

std::string to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const std::string& text);
/// A built-in name or a path to a JSON scenario file.
ScenarioSpec load_scenario(const std::string& name_or_path);

struct GenerateOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  std::optional<std::filesystem::path> raw_iq_dir;
  ReceiverConfig receiver;
};

struct GeneratedDataset {
  std::vector<FeatureRecord> records;
  /// Segments whose blind SNR was <= 0, so the cumulants were not noise-corrected.
  std::vector<std::uint64_t> correction_skipped;
};

/// Synthesizes, impairs and featurizes segments_per_cell segments for every
/// (class x cell). Output order and content depend only on the spec.
GeneratedDataset generate_scenario(const ScenarioSpec& spec, const GenerateOptions& options = {});

/// Scheme used for the i-th segment of a class (OFDM cycles through orders).
ModulationScheme scheme_for(ClassLabel label, std::size_t index);

/// Per-segment seed; depends only on the spec seed, the condition, the class and the index.
std::uint64_t segment_seed(std::uint64_t spec_seed, const Condition& cell, ClassLabel label,
                           std::size_t index);

/// The impaired segment for one grid point.
IqSegment simulate_segment(const ScenarioSpec& spec, const Condition& cell,
                           const ModulationScheme& scheme, std::uint64_t seed);

/// Writes features.csv and manifest.json into `dir`.
void write_dataset(const std::filesystem::path& dir, const ScenarioSpec& spec,
                   const GeneratedDataset& data);

}  // namespace amc
