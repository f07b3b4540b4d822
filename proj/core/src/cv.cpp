#include "amc/cv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "amc/error.hpp"
#include "amc/rng.hpp"

namespace amc {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts)
    for (auto c : row) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::correct() const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < kNumClasses; ++i) t += counts[i][i];
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t t = 0;
  for (auto c : counts.at(truth)) t += c;
  return t;
}

double ConfusionMatrix::accuracy() const {
  const auto t = total();
  return t == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(t);
}

double ConfusionMatrix::signed_score(std::size_t truth, std::size_t predicted) const {
  const auto n = row_sum(truth);
  if (n == 0) return 0.0;
  const double f = static_cast<double>(counts[truth].at(predicted)) / static_cast<double>(n);
  return truth == predicted ? f : -f;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (std::size_t i = 0; i < kNumClasses; ++i)
    for (std::size_t j = 0; j < kNumClasses; ++j) counts[i][j] += other.counts[i][j];
  return *this;
}

ConfusionMatrix confusion(std::span<const ClassLabel> predicted, std::span<const ClassLabel> truth) {
  std::vector<int> p(predicted.size()), t(truth.size());
  std::transform(predicted.begin(), predicted.end(), p.begin(), [](ClassLabel c) { return static_cast<int>(c); });
  std::transform(truth.begin(), truth.end(), t.begin(), [](ClassLabel c) { return static_cast<int>(c); });
  return confusion(std::span<const int>(p), std::span<const int>(t));
}

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size())
    throw ParameterError("confusion: " + std::to_string(predicted.size()) + " predictions for " +
                         std::to_string(truth.size()) + " labels");
  ConfusionMatrix m;
  const int k = static_cast<int>(kNumClasses);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= k || predicted[i] < 0 || predicted[i] >= k)
      throw InputError("confusion: unknown class label at position " + std::to_string(i));
    ++m.counts[truth[i]][predicted[i]];
  }
  return m;
}

ConfusionMatrix CvReport::total_confusion() const {
  ConfusionMatrix m;
  for (const auto& c : confusion) m += c;
  return m;
}

const BreakdownCell* CvReport::cell(double level) const {
  for (const auto& c : breakdown)
    if (c.level == level) return &c;
  return nullptr;
}

Eigen::MatrixXd design_matrix(const std::vector<FeatureRecord>& records, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kNumFeatures));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto a = records.at(rows[i]).features.to_array();
    for (std::size_t j = 0; j < a.size(); ++j) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[j];
  }
  return X;
}

std::vector<ClassLabel> labels_of(const std::vector<FeatureRecord>& records, const std::vector<std::size_t>& rows) {
  std::vector<ClassLabel> y;
  y.reserve(rows.size());
  for (auto r : rows) y.push_back(records.at(r).label());
  return y;
}

namespace {

double level_of(const FeatureRecord& r, Axis axis) {
  if (axis == Axis::Snr) return r.snr_class_db;
  return r.sir_class_db.value_or(std::numeric_limits<double>::infinity());
}

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = sd = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size()));
}

struct FoldResult {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::map<double, ConfusionMatrix> by_level;
  std::array<std::size_t, kNumClasses> train_counts{};
  std::array<std::size_t, kNumClasses> test_counts{};
};

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

CvReport run_cv(const std::vector<FeatureRecord>& train_pool, const std::vector<FeatureRecord>& test_pool,
                bool same_pool, Axis axis, const SplitSpec& split, const CvOptions& options) {
  if (train_pool.empty()) throw InputError("run_cv: training pool is empty");
  if (!same_pool && test_pool.empty()) throw InputError("run_cv: test pool is empty");
  for (ClassLabel c : kAllClasses) {
    const bool present = std::any_of(train_pool.begin(), train_pool.end(),
                                     [c](const FeatureRecord& r) { return r.label() == c; });
    if (!present) throw InputError("run_cv: class " + to_string(c) + " is missing from the training pool");
  }

  const auto& tests = same_pool ? train_pool : test_pool;
  const auto folds = same_pool ? shuffle_split(train_pool.size(), split) : shuffle_split(train_pool, test_pool, split);

  std::vector<FoldResult> results(folds.size());
  parallel_for(folds.size(), options.threads, [&](std::size_t f) {
    const Fold& fold = folds[f];
    SvmOptions svm = options.svm;
    svm.seed = derive_seed(options.svm.seed, {f});
    const auto y = labels_of(train_pool, fold.train);
    const auto model = train_multiclass(design_matrix(train_pool, fold.train), y, svm);
    const auto truth = labels_of(tests, fold.test);
    const auto pred = predict(model, design_matrix(tests, fold.test));
    FoldResult& r = results[f];
    r.confusion = confusion(std::span<const ClassLabel>(pred), std::span<const ClassLabel>(truth));
    r.accuracy = r.confusion.accuracy();
    for (std::size_t i = 0; i < fold.test.size(); ++i) {
      ++r.by_level[level_of(tests[fold.test[i]], axis)].counts[class_index(truth[i])][class_index(pred[i])];
    }
    r.train_counts = class_counts(train_pool, fold.train);
    r.test_counts = class_counts(tests, fold.test);
  });

  CvReport rep;
  rep.axis = axis;
  rep.train_n = split.train_n;
  rep.test_n = split.test_n;
  rep.folds = split.folds;
  rep.seed = split.seed;
  std::vector<double> levels;
  for (const auto& r : tests) levels.push_back(level_of(r, axis));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (double lv : levels) {
    BreakdownCell cell;
    cell.level = lv;
    std::vector<double> seen;
    for (const auto& r : results) {
      auto it = r.by_level.find(lv);
      const std::uint64_t correct = it == r.by_level.end() ? 0 : it->second.correct();
      const std::uint64_t count = it == r.by_level.end() ? 0 : it->second.total();
      if (it != r.by_level.end()) cell.confusion += it->second;
      const double acc = count == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(count);
      cell.fold_accuracy.push_back(acc);
      cell.fold_count.push_back(count);
      if (count > 0) seen.push_back(acc);
    }
    mean_std(seen, cell.mean, cell.std);
    rep.breakdown.push_back(std::move(cell));
  }
  for (const auto& r : results) {
    rep.fold_accuracy.push_back(r.accuracy);
    rep.confusion.push_back(r.confusion);
    rep.train_class_counts.push_back(r.train_counts);
    rep.test_class_counts.push_back(r.test_counts);
  }
  mean_std(rep.fold_accuracy, rep.mean, rep.std);
  return rep;
}

CvReport run_cv(const std::vector<FeatureRecord>& records, const Experiment& experiment, const SplitSpec& split,
                const CvOptions& options) {
  const bool same = experiment.train.same_cells(experiment.test);
  const auto train_pool = filter(records, [&](const FeatureRecord& r) { return experiment.train.matches(r); });
  CvReport rep;
  if (same) {
    rep = run_cv(train_pool, {}, true, experiment.breakdown, split, options);
  } else {
    const auto test_pool = filter(records, [&](const FeatureRecord& r) { return experiment.test.matches(r); });
    rep = run_cv(train_pool, test_pool, false, experiment.breakdown, split, options);
  }
  rep.label = experiment.label;
  return rep;
}

ScenarioReport evaluate_scenario(const ScenarioSpec& spec, const std::vector<FeatureRecord>& records,
                                 const CvOptions& options) {
  ScenarioReport out;
  out.scenario = to_string(spec.kind);
  out.seed = spec.seed;
  for (std::size_t e = 0; e < spec.experiments.size(); ++e) {
    const Experiment& x = spec.experiments[e];
    SplitSpec split{x.train_n.value_or(spec.train_n), x.test_n.value_or(spec.test_n), spec.folds,
                    derive_seed(spec.seed, {0x5eed, e})};
    CvOptions opts = options;
    opts.svm.seed = derive_seed(spec.seed, {0x5f7, e});
    out.experiments.push_back(run_cv(records, x, split, opts));
  }
  return out;
}

}  // namespace amc
