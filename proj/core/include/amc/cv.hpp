#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amc/classifier.hpp"
#include "amc/dataset.hpp"
#include "amc/scenario.hpp"

namespace amc {

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};

  std::uint64_t total() const;
  std::uint64_t correct() const;
  std::uint64_t row_sum(std::size_t truth) const;
  double accuracy() const;
  /// Fraction of the true-class row; positive on the diagonal, negative off it.
  double signed_score(std::size_t truth, std::size_t predicted) const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const ClassLabel> predicted, std::span<const ClassLabel> truth);
/// Integer class indices; anything outside [0, 5) is rejected.
ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> truth);

/// Accuracy for one level of the breakdown axis. A missing axis value
/// (interference-free records on the SIR axis) is stored as +inf.
struct BreakdownCell {
  double level = 0.0;
  std::vector<double> fold_accuracy;
  std::vector<std::uint64_t> fold_count;
  double mean = 0.0;
  double std = 0.0;
  /// Summed over folds.
  ConfusionMatrix confusion;

  friend bool operator==(const BreakdownCell&, const BreakdownCell&) = default;
};

struct CvReport {
  std::string label;
  Axis axis = Axis::Snr;
  std::size_t train_n = 0;
  std::size_t test_n = 0;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::vector<double> fold_accuracy;
  double mean = 0.0;
  double std = 0.0;  // population std over folds
  std::vector<BreakdownCell> breakdown;
  std::vector<ConfusionMatrix> confusion;
  std::vector<std::array<std::size_t, kNumClasses>> train_class_counts;
  std::vector<std::array<std::size_t, kNumClasses>> test_class_counts;

  ConfusionMatrix total_confusion() const;
  const BreakdownCell* cell(double level) const;

  friend bool operator==(const CvReport&, const CvReport&) = default;
};

struct ScenarioReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<CvReport> experiments;

  friend bool operator==(const ScenarioReport&, const ScenarioReport&) = default;
};

/// Feature rows of the selected records as a matrix (one record per row).
Eigen::MatrixXd design_matrix(const std::vector<FeatureRecord>& records, const std::vector<std::size_t>& rows);
std::vector<ClassLabel> labels_of(const std::vector<FeatureRecord>& records, const std::vector<std::size_t>& rows);

struct CvOptions {
  SvmOptions svm;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Shuffle-split cross-validation of one experiment over `records`.
CvReport run_cv(const std::vector<FeatureRecord>& records, const Experiment& experiment, const SplitSpec& split,
                const CvOptions& options = {});

/// Explicit pools. `same_pool` draws disjoint train/test rows from train_pool.
CvReport run_cv(const std::vector<FeatureRecord>& train_pool, const std::vector<FeatureRecord>& test_pool,
                bool same_pool, Axis axis, const SplitSpec& split, const CvOptions& options = {});

/// All experiments of a scenario, with the scenario's split sizes.
ScenarioReport evaluate_scenario(const ScenarioSpec& spec, const std::vector<FeatureRecord>& records,
                                 const CvOptions& options = {});

}  // namespace amc
