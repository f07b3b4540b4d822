#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amc/features.hpp"
#include "amc/modulation.hpp"

namespace amc {

/// A featurized segment with its ground truth and scenario metadata.
struct FeatureRecord {
  std::uint64_t segment_id = 0;
  ModulationScheme scheme;
  double snr_class_db = 0.0;
  std::optional<double> sir_class_db;
  std::optional<ModulationScheme> interferer;
  std::string tx_profile = "LAB";
  std::string rx_profile = "LAB";
  std::uint64_t seed = 0;
  FeatureVector features;

  ClassLabel label() const noexcept { return class_of(scheme); }

  friend bool operator==(const FeatureRecord& a, const FeatureRecord& b) {
    return a.segment_id == b.segment_id && a.scheme == b.scheme &&
           a.snr_class_db == b.snr_class_db && a.sir_class_db == b.sir_class_db &&
           a.interferer == b.interferer && a.tx_profile == b.tx_profile &&
           a.rx_profile == b.rx_profile && a.seed == b.seed &&
           a.features.to_array() == b.features.to_array();
  }
};

/// The exact CSV header line (without newline).
std::string csv_header();

void write_csv(std::ostream& out, const std::vector<FeatureRecord>& records);
void save_csv(const std::vector<FeatureRecord>& records, const std::filesystem::path& path);

/// Parses CSV text; errors carry the 1-based line number.
std::vector<FeatureRecord> parse_csv(std::string_view text);
/// Loads a CSV file, transparently gunzipping it when compressed.
std::vector<FeatureRecord> load_csv(const std::filesystem::path& path);

/// Conjunction of optional predicates. For sir_db and interferer an inner
/// nullopt selects records without interference.
struct RecordFilter {
  std::optional<ClassLabel> label;
  std::optional<Family> family;
  std::optional<double> snr_db;
  std::optional<std::optional<double>> sir_db;
  std::optional<std::optional<ModulationScheme>> interferer;
  std::optional<std::string> tx_profile;
  std::optional<std::string> rx_profile;

  bool matches(const FeatureRecord& r) const;
};

/// Parses "snr=10,interferer=SC-16QAM,tx=SDR". Clauses may be separated by
/// ',', '&&' or ' and '. Keys: class, family, snr, sir, interferer, tx, rx;
/// "none" selects the absence of interference. Empty text matches all.
RecordFilter parse_filter(std::string_view expr);

using RecordPredicate = std::function<bool(const FeatureRecord&)>;

/// Matching records, ordered by segment_id (stable).
std::vector<FeatureRecord> filter(const std::vector<FeatureRecord>& records, const RecordPredicate& pred);
std::vector<FeatureRecord> filter(const std::vector<FeatureRecord>& records, const RecordFilter& f);

struct SplitSpec {
  std::size_t train_n = 10000;
  std::size_t test_n = 10000;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
};

/// Row indices of one cross-validation fold.
struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Independent random disjoint train/test draws from one pool of n records.
std::vector<Fold> shuffle_split(std::size_t n, const SplitSpec& spec);

/// Train indices address `train_pool`, test indices `test_pool`. Records
/// appearing in both pools (same segment_id) never land on both sides.
std::vector<Fold> shuffle_split(const std::vector<FeatureRecord>& train_pool,
                                const std::vector<FeatureRecord>& test_pool, const SplitSpec& spec);

std::array<std::size_t, kNumClasses> class_counts(const std::vector<FeatureRecord>& records,
                                                  const std::vector<std::size_t>& rows);

}  // namespace amc
