#include "amc/classifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "amc/error.hpp"
#include "amc/log.hpp"
#include "amc/rng.hpp"
#include "json.hpp"

namespace amc {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

StandardScaler StandardScaler::fit(const Eigen::MatrixXd& X) {
  if (X.rows() < 2) throw ParameterError("fit_scaler: need at least 2 rows");
  if (!X.allFinite()) throw InputError("fit_scaler: non-finite feature value");
  StandardScaler s;
  const auto n = static_cast<double>(X.rows());
  s.means = X.colwise().mean().transpose();
  s.stds.resize(X.cols());
  s.constant.assign(static_cast<std::size_t>(X.cols()), false);
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto col = X.col(j);
    const double var = (col.array() - s.means(j)).square().sum() / n;
    const double sd = std::sqrt(var);
    const bool flat = col.maxCoeff() == col.minCoeff() || sd <= 1e-12 * std::abs(s.means(j));
    s.stds(j) = flat ? 1.0 : sd;
    s.constant[static_cast<std::size_t>(j)] = flat;
  }
  return s;
}

Eigen::MatrixXd StandardScaler::transform(const Eigen::MatrixXd& X) const {
  if (X.cols() != means.size()) throw InputError("scaler: feature count mismatch");
  return (X.rowwise() - means.transpose()).array().rowwise() / stds.transpose().array();
}

Eigen::VectorXd StandardScaler::transform(const Eigen::VectorXd& x) const {
  if (x.size() != means.size()) throw InputError("scaler: feature count mismatch");
  return (x - means).cwiseQuotient(stds);
}

Eigen::MatrixXd StandardScaler::inverse_transform(const Eigen::MatrixXd& Z) const {
  if (Z.cols() != means.size()) throw InputError("scaler: feature count mismatch");
  return (Z.array().rowwise() * stds.transpose().array()).rowwise() + means.transpose().array();
}

double BinaryModel::relative_gap() const noexcept {
  const double scale = std::max(std::abs(primal_objective), 1e-12);
  return (primal_objective - dual_objective) / scale;
}

double svm_primal_objective(const Eigen::MatrixXd& X, std::span<const int> y,
                            const Eigen::VectorXd& w, double b, double c) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double margin = y[static_cast<std::size_t>(i)] * (X.row(i).dot(w) + b);
    loss += std::max(0.0, 1.0 - margin);
  }
  return 0.5 * (w.squaredNorm() + b * b) + c * loss;
}

// Dual coordinate descent for the L1-loss SVM (Hsieh et al. 2008), with the
// shrinking heuristic of LIBLINEAR:
//   min_a 0.5 a'Qa - e'a,  0 <= a_i <= C,  Q_ij = y_i y_j x~_i.x~_j
BinaryModel train_binary(const Eigen::MatrixXd& X, std::span<const int> y,
                         const SvmOptions& options) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (static_cast<std::size_t>(n) != y.size()) throw ParameterError("train_binary: X/y size mismatch");
  if (!(options.c > 0.0)) throw ParameterError("train_binary: C must be positive");
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    if (v == 1) has_pos = true;
    else if (v == -1) has_neg = true;
    else throw ParameterError("train_binary: labels must be -1 or +1");
  }
  if (!has_pos || !has_neg) throw ParameterError("train_binary: both classes must be present");

  RowMatrix xa(n, d + 1);
  xa.leftCols(d) = X;
  xa.col(d).setConstant(options.bias_feature);

  const double c = options.c;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
  std::vector<double> qd(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> index(static_cast<std::size_t>(n));
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    qd[static_cast<std::size_t>(i)] = xa.row(i).squaredNorm();
    index[static_cast<std::size_t>(i)] = i;
  }

  Rng rng(options.seed);
  BinaryModel model;
  Eigen::Index active = n;
  double pg_max_old = kInf, pg_min_old = -kInf;
  int epoch = 0;
  while (epoch < options.max_epochs) {
    double pg_max_new = -kInf, pg_min_new = kInf;
    for (Eigen::Index i = 0; i < active; ++i) {
      const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(active - i)));
      std::swap(index[static_cast<std::size_t>(i)], index[static_cast<std::size_t>(j)]);
    }
    for (Eigen::Index s = 0; s < active; ++s) {
      const Eigen::Index i = index[static_cast<std::size_t>(s)];
      const auto iu = static_cast<std::size_t>(i);
      const double yi = y[iu];
      const double g = yi * xa.row(i).dot(w) - 1.0;
      double pg = 0.0;
      if (alpha[iu] == 0.0) {
        if (options.shrinking && g > pg_max_old) {
          --active;
          std::swap(index[static_cast<std::size_t>(s)], index[static_cast<std::size_t>(active)]);
          --s;
          continue;
        }
        if (g < 0.0) pg = g;
      } else if (alpha[iu] == c) {
        if (options.shrinking && g < pg_min_old) {
          --active;
          std::swap(index[static_cast<std::size_t>(s)], index[static_cast<std::size_t>(active)]);
          --s;
          continue;
        }
        if (g > 0.0) pg = g;
      } else {
        pg = g;
      }
      pg_max_new = std::max(pg_max_new, pg);
      pg_min_new = std::min(pg_min_new, pg);
      if (std::abs(pg) > 1e-12 && qd[iu] > 0.0) {
        const double old = alpha[iu];
        alpha[iu] = std::min(std::max(old - g / qd[iu], 0.0), c);
        w += ((alpha[iu] - old) * yi) * xa.row(i).transpose();
      }
    }
    ++epoch;
    if (options.record_trace) {
      const double sum_alpha = std::accumulate(alpha.begin(), alpha.end(), 0.0);
      model.dual_trace.push_back(0.5 * w.squaredNorm() - sum_alpha);
    }
    if (pg_max_new - pg_min_new <= options.tolerance) {
      if (active == n) {
        model.converged = true;
        break;
      }
      active = n;
      pg_max_old = kInf;
      pg_min_old = -kInf;
      continue;
    }
    pg_max_old = pg_max_new <= 0.0 ? kInf : pg_max_new;
    pg_min_old = pg_min_new >= 0.0 ? -kInf : pg_min_new;
  }

  model.epochs = epoch;
  model.w = w.head(d);
  model.b = w(d) * options.bias_feature;
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    hinge += std::max(0.0, 1.0 - y[static_cast<std::size_t>(i)] * xa.row(i).dot(w));
  const double sum_alpha = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  model.primal_objective = 0.5 * w.squaredNorm() + c * hinge;
  model.dual_objective = sum_alpha - 0.5 * w.squaredNorm();
  return model;
}

Eigen::VectorXd LinearSvmModel::decision_values(const Eigen::VectorXd& raw) const {
  for (Eigen::Index j = 0; j < raw.size(); ++j)
    if (!std::isfinite(raw(j))) throw InputError("predict: feature " + std::to_string(j) + " is not finite");
  return weights * scaler.transform(raw) + biases;
}

LinearSvmModel train_multiclass(const Eigen::MatrixXd& X, std::span<const ClassLabel> labels,
                                const SvmOptions& options) {
  if (static_cast<std::size_t>(X.rows()) != labels.size())
    throw ParameterError("train_multiclass: X/labels size mismatch");
  std::array<bool, kNumClasses> present{};
  for (ClassLabel l : labels) present[class_index(l)] = true;

  LinearSvmModel model;
  for (ClassLabel c : kAllClasses) {
    if (present[class_index(c)]) model.classes.push_back(c);
    else log::warn("train_multiclass: class " + to_string(c) + " absent from training data");
  }
  if (model.classes.size() < 2) throw ParameterError("train_multiclass: need at least 2 classes");

  model.scaler = StandardScaler::fit(X);
  model.slack_c = options.c;
  model.tolerance = options.tolerance;
  const Eigen::MatrixXd Z = model.scaler.transform(X);
  const auto k = static_cast<Eigen::Index>(model.classes.size());
  model.weights.resize(k, X.cols());
  model.biases.resize(k);

  auto solve = [&](ClassLabel positive, std::size_t slot) {
    std::vector<int> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == positive ? 1 : -1;
    SvmOptions opt = options;
    opt.seed = derive_seed(options.seed, {slot});
    return train_binary(Z, y, opt);
  };
  auto info = [](const BinaryModel& m) {
    return ClassSolverInfo{m.epochs, m.converged, m.primal_objective, m.relative_gap()};
  };

  if (k == 2) {
    // Both one-vs-rest problems are the same hyperplane with opposite sign.
    const BinaryModel m = solve(model.classes[1], 1);
    model.weights.row(0) = -m.w.transpose();
    model.weights.row(1) = m.w.transpose();
    model.biases << -m.b, m.b;
    model.solver = {info(m), info(m)};
    return model;
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    const BinaryModel m = solve(model.classes[static_cast<std::size_t>(c)], static_cast<std::size_t>(c));
    model.weights.row(c) = m.w.transpose();
    model.biases(c) = m.b;
    model.solver.push_back(info(m));
    if (!m.converged)
      log::warn("train_multiclass: solver hit the epoch limit for class " +
                to_string(model.classes[static_cast<std::size_t>(c)]));
  }
  return model;
}

Prediction predict(const LinearSvmModel& model, const Eigen::VectorXd& raw) {
  Prediction p;
  p.decision = model.decision_values(raw);
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < p.decision.size(); ++c)
    if (p.decision(c) > p.decision(best)) best = c;
  p.label = model.classes[static_cast<std::size_t>(best)];
  return p;
}

std::vector<ClassLabel> predict(const LinearSvmModel& model, const Eigen::MatrixXd& raw) {
  std::vector<ClassLabel> out(static_cast<std::size_t>(raw.rows()));
  for (Eigen::Index i = 0; i < raw.rows(); ++i)
    out[static_cast<std::size_t>(i)] = predict(model, Eigen::VectorXd(raw.row(i).transpose())).label;
  return out;
}

namespace {

using nlohmann::json;

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd json_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string to_json(const LinearSvmModel& model) {
  json j;
  j["format"] = "amc-linear-svm";
  j["version"] = 1;
  json classes = json::array();
  for (ClassLabel c : model.classes) classes.push_back(to_string(c));
  j["classes"] = classes;
  j["scaler"] = {{"means", vec_json(model.scaler.means)},
                 {"stds", vec_json(model.scaler.stds)},
                 {"constant", model.scaler.constant}};
  json weights = json::array();
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r)
    weights.push_back(vec_json(model.weights.row(r).transpose()));
  j["weights"] = weights;
  j["biases"] = vec_json(model.biases);
  j["slack_c"] = model.slack_c;
  json solver = json::array();
  for (const auto& s : model.solver)
    solver.push_back({{"epochs", s.epochs},
                      {"converged", s.converged},
                      {"primal_objective", s.primal_objective},
                      {"relative_gap", s.relative_gap}});
  j["solver"] = {{"method", "dual-coordinate-descent"},
                 {"tolerance", model.tolerance},
                 {"per_class", solver}};
  return j.dump(2);
}

LinearSvmModel model_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "amc-linear-svm") throw FormatError("not an amc-linear-svm model");
    LinearSvmModel m;
    for (const auto& c : j.at("classes")) m.classes.push_back(parse_class(c.get<std::string>()));
    m.scaler.means = json_vec(j.at("scaler").at("means"));
    m.scaler.stds = json_vec(j.at("scaler").at("stds"));
    m.scaler.constant = j.at("scaler").at("constant").get<std::vector<bool>>();
    const auto& w = j.at("weights");
    const auto k = static_cast<Eigen::Index>(w.size());
    const Eigen::Index d = m.scaler.means.size();
    if (k != static_cast<Eigen::Index>(m.classes.size())) throw FormatError("weights/classes count mismatch");
    m.weights.resize(k, d);
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto row = json_vec(w[static_cast<std::size_t>(r)]);
      if (row.size() != d) throw FormatError("weight row has wrong dimension");
      m.weights.row(r) = row.transpose();
    }
    m.biases = json_vec(j.at("biases"));
    if (m.biases.size() != k) throw FormatError("biases/classes count mismatch");
    m.slack_c = j.at("slack_c").get<double>();
    if (j.contains("solver")) {
      m.tolerance = j["solver"].value("tolerance", 1e-4);
      for (const auto& s : j["solver"].value("per_class", json::array()))
        m.solver.push_back({s.at("epochs").get<int>(), s.at("converged").get<bool>(),
                            s.at("primal_objective").get<double>(), s.at("relative_gap").get<double>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
}

void save_model(const LinearSvmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_json(model) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

LinearSvmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace amc
