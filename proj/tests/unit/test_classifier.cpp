#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>

#include "amc/classifier.hpp"
#include "amc/error.hpp"
#include "amc/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using amc::ClassLabel;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Blobs {
  MatrixXd X;
  std::vector<ClassLabel> y;
};

// Five well separated Gaussian blobs in `dims` dimensions.
Blobs blobs(std::size_t per_class, int dims, double spread, std::uint64_t seed) {
  amc::Rng r(seed);
  Blobs b;
  b.X.resize(static_cast<Eigen::Index>(per_class * amc::kNumClasses), dims);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < amc::kNumClasses; ++c) {
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      for (int d = 0; d < dims; ++d) {
        const double centre = (d == static_cast<int>(c % static_cast<std::size_t>(dims))) ? 10.0 : 0.0;
        b.X(row, d) = centre + (c >= static_cast<std::size_t>(dims) ? -10.0 : 0.0) + spread * r.normal();
      }
      b.y.push_back(amc::kAllClasses[c]);
    }
  }
  return b;
}

struct Binary {
  MatrixXd X;
  std::vector<int> y;
};

// Two overlapping Gaussian clouds, so some slack is active.
Binary noisy_binary(int n, int dims, std::uint64_t seed) {
  amc::Rng r(seed);
  Binary b{MatrixXd(n, dims), std::vector<int>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    const int label = (i % 2) ? 1 : -1;
    b.y[static_cast<std::size_t>(i)] = label;
    for (int d = 0; d < dims; ++d) b.X(i, d) = 0.8 * label + r.normal();
  }
  return b;
}

}  // namespace

TEST_CASE("scaler: mean, std and constant columns") {
  MatrixXd X(4, 3);
  X << 1, 5, 2, 2, 5, 4, 3, 5, 6, 4, 5, 8;
  const auto s = amc::StandardScaler::fit(X);
  CHECK(s.means(0) == doctest::Approx(2.5));
  CHECK(s.stds(0) == doctest::Approx(std::sqrt(1.25)));
  CHECK(s.constant[1]);
  CHECK(s.stds(1) == 1.0);
  const MatrixXd Z = s.transform(X);
  CHECK(Z.col(1).isZero());
  for (int j : {0, 2}) {
    CHECK(std::abs(Z.col(j).mean()) < 1e-12);
    CHECK(Z.col(j).squaredNorm() / 4.0 == doctest::Approx(1.0));
  }
  CHECK(s.inverse_transform(Z).isApprox(X, 1e-12));
  CHECK(s.transform(VectorXd(X.row(2).transpose())).isApprox(Z.row(2).transpose()));
  CHECK_THROWS_AS(amc::StandardScaler::fit(MatrixXd(0, 3)), amc::ParameterError);
  MatrixXd bad = X;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(amc::StandardScaler::fit(bad), amc::InputError);
}

TEST_CASE("binary: separable 1-D problem") {
  MatrixXd X(6, 1);
  X << -3, -2, -1, 1, 2, 3;
  const std::vector<int> y = {-1, -1, -1, 1, 1, 1};
  const auto m = amc::train_binary(X, y, {.c = 100.0});
  CHECK(m.converged);
  for (int i = 0; i < 6; ++i) CHECK(m.decision(X.row(i).transpose()) * y[static_cast<std::size_t>(i)] > 0.0);
  // Symmetric data: the regularized bias is zero and the margin sits at +-1.
  CHECK(std::abs(m.b) < 1e-3);
  CHECK(m.w(0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("binary: two points per side put the boundary near zero") {
  MatrixXd X(4, 1);
  X << -2, -1, 1, 2;
  const std::vector<int> y = {-1, -1, 1, 1};
  const auto m = amc::train_binary(X, y);
  for (int i = 0; i < 4; ++i) CHECK(m.decision(X.row(i).transpose()) * y[static_cast<std::size_t>(i)] > 0.0);
  CHECK(std::abs(-m.b / m.w(0)) < 0.5);
}

TEST_CASE("binary: duplicated samples do not change a separable solution") {
  MatrixXd X(6, 1);
  X << -3, -2, -1, 1, 2, 3;
  const std::vector<int> y = {-1, -1, -1, 1, 1, 1};
  MatrixXd X2(12, 1);
  X2 << X, X;
  std::vector<int> y2(y);
  y2.insert(y2.end(), y.begin(), y.end());
  const auto a = amc::train_binary(X, y, {.c = 100.0});
  const auto b = amc::train_binary(X2, y2, {.c = 100.0});
  CHECK(b.w(0) == doctest::Approx(a.w(0)).epsilon(1e-3));
  CHECK(std::abs(b.b - a.b) < 1e-3);
}

TEST_CASE("binary: agrees with an independent dual solver") {
  const auto data = noisy_binary(120, 3, 5);
  const double c = 1.0;
  const auto ref = oracle::reference_svm(data.X, data.y, c, 20000);
  const auto m = amc::train_binary(data.X, data.y, {.c = c, .tolerance = 1e-6});
  const double ours = amc::svm_primal_objective(data.X, data.y, m.w, m.b, c);
  CHECK(std::abs(ours - ref.objective) / ref.objective < 1e-3);
  for (int d = 0; d < 3; ++d) CHECK(std::abs(m.w(d) - ref.w(d)) < 1e-2 * ref.w.norm());
  CHECK(std::abs(m.b - ref.w(3)) < 1e-2 * ref.w.norm());
}

TEST_CASE("binary: dual trace is non-increasing and the gap closes") {
  const auto data = noisy_binary(400, 4, 6);
  amc::SvmOptions opt;
  opt.c = 10.0;
  opt.record_trace = true;
  const auto m = amc::train_binary(data.X, data.y, opt);
  REQUIRE(m.dual_trace.size() >= 2);
  for (std::size_t i = 1; i < m.dual_trace.size(); ++i)
    CHECK(m.dual_trace[i] <= m.dual_trace[i - 1] + 1e-9 * std::abs(m.dual_trace[i - 1]));
  // Heavy overlap at C = 10 is slow for coordinate descent; the duality gap
  // is the contract even when the projected-gradient test is not met.
  CHECK(m.epochs > 0);
  CHECK(m.relative_gap() < 1e-3);
  opt.c = 0.1;
  opt.record_trace = false;
  const auto easy = amc::train_binary(data.X, data.y, opt);
  CHECK(easy.converged);
  CHECK(easy.relative_gap() < 1e-4);
  CHECK(m.primal_objective >= m.dual_objective - 1e-9);
  CHECK(m.primal_objective == doctest::Approx(amc::svm_primal_objective(data.X, data.y, m.w, m.b, 10.0)));
}

TEST_CASE("binary: argument errors") {
  MatrixXd X(3, 1);
  X << 1, 2, 3;
  CHECK_THROWS_AS(amc::train_binary(X, std::vector<int>{1, 1, 1}), amc::ParameterError);
  CHECK_THROWS_AS(amc::train_binary(X, std::vector<int>{1, 0, -1}), amc::ParameterError);
  CHECK_THROWS_AS(amc::train_binary(X, std::vector<int>{1, -1}), amc::ParameterError);
  CHECK_THROWS_AS(amc::train_binary(X, std::vector<int>{1, -1, 1}, {.c = 0.0}), amc::ParameterError);
}

TEST_CASE("multiclass: separable blobs are classified perfectly") {
  const auto train = blobs(60, 3, 0.5, 7);
  const auto test = blobs(60, 3, 0.5, 8);
  const auto m = amc::train_multiclass(train.X, train.y);
  CHECK(m.classes.size() == amc::kNumClasses);
  CHECK(amc::predict(m, test.X) == test.y);
  CHECK(amc::predict(m, train.X) == train.y);
}

TEST_CASE("multiclass: training order does not change the model") {
  const auto data = blobs(40, 4, 2.0, 9);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(data.X.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  MatrixXd Xp(data.X.rows(), data.X.cols());
  std::vector<ClassLabel> yp;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    Xp.row(static_cast<Eigen::Index>(i)) = data.X.row(perm[i]);
    yp.push_back(data.y[static_cast<std::size_t>(perm[i])]);
  }
  amc::SvmOptions opt;
  opt.tolerance = 1e-7;
  opt.max_epochs = 200000;
  const auto a = amc::train_multiclass(data.X, data.y, opt);
  const auto b = amc::train_multiclass(Xp, yp, opt);
  CHECK(amc::predict(a, data.X) == amc::predict(b, data.X));
  CHECK((a.weights - b.weights).norm() < 1e-3 * a.weights.norm());
}

TEST_CASE("multiclass: predictions invariant to per-feature affine maps") {
  const auto data = blobs(40, 4, 3.0, 10);
  MatrixXd Y = data.X;
  const double scale[4] = {1e3, 0.01, 7.0, 2.5};
  const double shift[4] = {-5.0, 100.0, 0.0, 3.3};
  for (int j = 0; j < 4; ++j) Y.col(j) = (Y.col(j).array() * scale[j] + shift[j]).matrix();
  const auto a = amc::train_multiclass(data.X, data.y);
  const auto b = amc::train_multiclass(Y, data.y);
  CHECK(amc::predict(a, data.X) == amc::predict(b, Y));
}

TEST_CASE("multiclass: constant feature, missing class and ties") {
  auto data = blobs(30, 3, 0.5, 11);
  MatrixXd X(data.X.rows(), 4);
  X << data.X, MatrixXd::Constant(data.X.rows(), 1, 4.0);
  const auto m = amc::train_multiclass(X, data.y);
  CHECK(m.scaler.constant[3]);
  CHECK(amc::predict(m, X) == data.y);

  // Only two classes present: the model keeps those two.
  MatrixXd X2 = data.X.topRows(60);
  std::vector<ClassLabel> y2(data.y.begin(), data.y.begin() + 60);
  const auto two = amc::train_multiclass(X2, y2);
  CHECK(two.classes == std::vector<ClassLabel>{ClassLabel::ScBpsk, ClassLabel::ScQpsk});
  CHECK(amc::predict(two, X2) == y2);

  amc::LinearSvmModel tie = m;
  tie.weights.setZero();
  tie.biases.setZero();
  CHECK(amc::predict(tie, VectorXd(X.row(0).transpose())).label == ClassLabel::ScBpsk);
}

TEST_CASE("multiclass: errors") {
  const auto data = blobs(10, 3, 0.5, 12);
  std::vector<ClassLabel> one(data.y.size(), ClassLabel::Ofdm);
  CHECK_THROWS_AS(amc::train_multiclass(data.X, one), amc::ParameterError);
  const auto m = amc::train_multiclass(data.X, data.y);
  VectorXd bad = data.X.row(0).transpose();
  bad(1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(amc::predict(m, bad), amc::InputError);
  CHECK_THROWS_AS(amc::predict(m, VectorXd(VectorXd::Zero(2))), amc::InputError);
}

TEST_CASE("model JSON round-trip is exact") {
  const auto data = blobs(30, 3, 1.5, 13);
  const auto m = amc::train_multiclass(data.X, data.y);
  const auto back = amc::model_from_json(amc::to_json(m));
  CHECK(back.classes == m.classes);
  CHECK(back.weights == m.weights);
  CHECK(back.biases == m.biases);
  CHECK(back.scaler.means == m.scaler.means);
  CHECK(back.scaler.stds == m.scaler.stds);
  CHECK(amc::predict(back, data.X) == amc::predict(m, data.X));
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    const VectorXd x = data.X.row(i).transpose();
    CHECK(back.decision_values(x) == m.decision_values(x));
  }

  const auto path = std::filesystem::temp_directory_path() / "amc_model_roundtrip.json";
  amc::save_model(m, path);
  CHECK(amc::load_model(path).weights == m.weights);
  CHECK_THROWS_AS(amc::model_from_json("{\"format\": 3}"), amc::FormatError);
}
