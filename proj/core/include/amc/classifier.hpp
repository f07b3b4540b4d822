#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "amc/modulation.hpp"

namespace amc {

/// Per-column standardization learned from a training matrix.
struct StandardScaler {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;
  /// Columns with zero training variance; their std is replaced by 1.
  std::vector<bool> constant;

  static StandardScaler fit(const Eigen::MatrixXd& X);

  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd transform(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& Z) const;

  Eigen::Index dims() const noexcept { return means.size(); }
};

struct SvmOptions {
  double c = 10.0;
  /// Stop when the projected-gradient spread over a full pass is below this.
  double tolerance = 1e-4;
  int max_epochs = 10000;
  std::uint64_t seed = 1;
  /// Value of the constant feature appended to every sample to carry the bias.
  double bias_feature = 1.0;
  bool shrinking = true;
  /// Record the dual objective after every epoch.
  bool record_trace = false;
};

/// One separating hyperplane w.x + b.
struct BinaryModel {
  Eigen::VectorXd w;
  double b = 0.0;
  int epochs = 0;
  bool converged = false;
  /// 0.5 (|w|^2 + b^2) + C sum hinge.
  double primal_objective = 0.0;
  /// sum alpha - 0.5 (|w|^2 + b^2).
  double dual_objective = 0.0;
  /// Minimized dual objective 0.5 a'Qa - e'a after each epoch (if recorded).
  std::vector<double> dual_trace;

  double decision(const Eigen::VectorXd& x) const { return w.dot(x) + b; }
  double relative_gap() const noexcept;
};

/// Soft-margin linear SVM (hinge loss, bias carried as a regularized
/// constant feature) solved by dual coordinate descent with shrinking.
/// y must contain only -1 and +1, with both present.
BinaryModel train_binary(const Eigen::MatrixXd& X, std::span<const int> y,
                         const SvmOptions& options = {});

/// 0.5 (|w|^2 + b^2) + C sum max(0, 1 - y (w.x + b)).
double svm_primal_objective(const Eigen::MatrixXd& X, std::span<const int> y,
                            const Eigen::VectorXd& w, double b, double c);

struct ClassSolverInfo {
  int epochs = 0;
  bool converged = false;
  double primal_objective = 0.0;
  double relative_gap = 0.0;
};

/// One-vs-rest linear SVM over standardized features.
struct LinearSvmModel {
  std::vector<ClassLabel> classes;
  Eigen::MatrixXd weights;  // one row per class, standardized feature space
  Eigen::VectorXd biases;
  StandardScaler scaler;
  double slack_c = 10.0;
  double tolerance = 1e-4;
  std::vector<ClassSolverInfo> solver;

  /// Decision values for a raw (unstandardized) feature vector.
  Eigen::VectorXd decision_values(const Eigen::VectorXd& raw) const;
};

/// Fits the scaler on X, then one binary problem per present class. Classes
/// absent from `labels` are reported with a warning and left out.
LinearSvmModel train_multiclass(const Eigen::MatrixXd& X, std::span<const ClassLabel> labels,
                                const SvmOptions& options = {});

struct Prediction {
  ClassLabel label = ClassLabel::ScBpsk;
  Eigen::VectorXd decision;
};

/// argmax over class decision values; ties go to the earlier class.
Prediction predict(const LinearSvmModel& model, const Eigen::VectorXd& raw);
std::vector<ClassLabel> predict(const LinearSvmModel& model, const Eigen::MatrixXd& raw);

std::string to_json(const LinearSvmModel& model);
LinearSvmModel model_from_json(const std::string& text);
void save_model(const LinearSvmModel& model, const std::filesystem::path& path);
LinearSvmModel load_model(const std::filesystem::path& path);

}  // namespace amc
