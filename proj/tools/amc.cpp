// amc: generate, featurize, train, evaluate and report from the command line.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "amc/analysis.hpp"
#include "amc/classifier.hpp"
#include "amc/cv.hpp"
#include "amc/dataset.hpp"
#include "amc/error.hpp"
#include "amc/features.hpp"
#include "amc/iq_io.hpp"
#include "amc/report.hpp"
#include "amc/scenario.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct GenerateArgs {
  std::string scenario;
  fs::path out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> segments;
  unsigned threads = 0;
  bool raw_iq = false;
};

struct FeaturizeArgs {
  fs::path iq;
  fs::path out;
};

struct TrainArgs {
  fs::path data;
  std::string filter;
  fs::path model;
  double c = 10.0;
  std::uint64_t seed = 1;
};

struct EvaluateArgs {
  std::string scenario;
  std::size_t folds = 10;
  std::optional<std::size_t> train_n;
  std::optional<std::size_t> test_n;
  fs::path report;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> segments;
  std::optional<fs::path> data;
  unsigned threads = 0;
};

struct ReportArgs {
  fs::path in;
  std::string format = "table";
};

amc::ScenarioSpec scenario_with(const std::string& name, std::optional<std::uint64_t> seed,
                                std::optional<std::size_t> segments) {
  auto spec = amc::load_scenario(name);
  if (seed) spec.seed = *seed;
  if (segments) spec.segments_per_cell = *segments;
  return spec;
}

int run_generate(const GenerateArgs& a) {
  const auto spec = scenario_with(a.scenario, a.seed, a.segments);
  amc::GenerateOptions opts;
  opts.threads = a.threads;
  if (a.raw_iq) opts.raw_iq_dir = a.out / "iq";
  const auto data = amc::generate_scenario(spec, opts);
  amc::write_dataset(a.out, spec, data);
  std::cout << "wrote " << data.records.size() << " records to " << (a.out / "features.csv").string() << '\n';
  if (!data.correction_skipped.empty())
    std::cout << data.correction_skipped.size() << " segments without cumulant noise correction\n";
  return kOk;
}

int run_featurize(const FeaturizeArgs& a) {
  if (!fs::is_directory(a.iq)) throw amc::InputError("not a directory: " + a.iq.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.iq))
    if (e.path().extension() == ".cf32") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw amc::InputError("no .cf32 recordings in " + a.iq.string());
  std::vector<amc::FeatureRecord> records;
  std::size_t skipped = 0;
  for (const auto& f : files) {
    const auto rec = amc::read_iq(f);
    amc::FeatureRecord r;
    r.segment_id = rec.meta.segment_id;
    r.scheme = rec.meta.scheme;
    r.snr_class_db = rec.meta.snr_class_db;
    r.sir_class_db = rec.meta.sir_class_db;
    r.interferer = rec.meta.interferer;
    r.tx_profile = rec.meta.tx_profile;
    r.rx_profile = rec.meta.rx_profile;
    r.seed = rec.meta.seed;
    r.features = amc::featurize(rec.segment);
    skipped += r.features.cumulant_correction_skipped;
    records.push_back(std::move(r));
  }
  amc::save_csv(records, a.out);
  std::cout << "featurized " << records.size() << " segments into " << a.out.string() << '\n';
  if (skipped) std::cout << skipped << " segments without cumulant noise correction\n";
  return kOk;
}

int run_train(const TrainArgs& a) {
  const auto all = amc::load_csv(a.data);
  const auto records = amc::filter(all, amc::parse_filter(a.filter));
  if (records.empty()) throw amc::InputError("filter '" + a.filter + "' selects no records");
  std::vector<std::size_t> rows(records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  amc::SvmOptions opts;
  opts.c = a.c;
  opts.seed = a.seed;
  const auto X = amc::design_matrix(records, rows);
  const auto y = amc::labels_of(records, rows);
  const auto model = amc::train_multiclass(X, y, opts);
  amc::save_model(model, a.model);
  const auto pred = amc::predict(model, X);
  const auto cm = amc::confusion(std::span<const amc::ClassLabel>(pred), std::span<const amc::ClassLabel>(y));
  std::printf("trained on %zu records, training accuracy %.4f\n", records.size(), cm.accuracy());
  return kOk;
}

int run_evaluate(const EvaluateArgs& a) {
  auto spec = scenario_with(a.scenario, a.seed, a.segments);
  spec.folds = a.folds;
  if (a.train_n) {
    spec.train_n = *a.train_n;
    for (auto& e : spec.experiments) e.train_n.reset();
  }
  if (a.test_n) {
    spec.test_n = *a.test_n;
    for (auto& e : spec.experiments) e.test_n.reset();
  }
  std::vector<amc::FeatureRecord> records;
  if (a.data) {
    records = amc::load_csv(*a.data);
  } else {
    amc::GenerateOptions opts;
    opts.threads = a.threads;
    auto data = amc::generate_scenario(spec, opts);
    amc::write_dataset(a.report / "data", spec, data);
    records = std::move(data.records);
  }
  amc::CvOptions cv;
  cv.threads = a.threads;
  const auto report = amc::evaluate_scenario(spec, records, cv);
  amc::emit_report(report, a.report);
  std::cout << amc::render_table(report);
  return kOk;
}

int run_report(const ReportArgs& a) {
  const auto report = amc::load_report(a.in);
  if (a.format == "json")
    std::cout << amc::to_json(report);
  else if (a.format == "csv")
    std::cout << amc::render_breakdown_csv(report);
  else
    std::cout << amc::render_table(report);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automatic modulation classification workbench"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Simulate a scenario and write its feature CSV");
  g->add_option("--scenario", gen.scenario, "Built-in scenario name or JSON file")->required();
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--seed", gen.seed, "Override the scenario seed");
  g->add_option("--segments", gen.segments, "Segments per class and condition");
  g->add_option("--threads", gen.threads, "Worker threads (0: all cores)");
  g->add_flag("--raw-iq", gen.raw_iq, "Also write .cf32 recordings under <out>/iq");

  FeaturizeArgs fea;
  auto* f = app.add_subcommand("featurize", "Extract features from .cf32 recordings");
  f->add_option("--iq", fea.iq, "Directory of .cf32 + .json recordings")->required();
  f->add_option("--out", fea.out, "Output CSV")->required();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a one-vs-rest linear SVM");
  t->add_option("--data", tr.data, "Feature CSV (optionally gzipped)")->required();
  t->add_option("--filter", tr.filter, "Record filter, e.g. snr=10,tx=LAB");
  t->add_option("--model", tr.model, "Output model file")->required();
  t->add_option("--c", tr.c, "Slack penalty")->check(CLI::PositiveNumber);
  t->add_option("--seed", tr.seed, "Solver seed");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Generate a scenario and cross-validate it");
  e->add_option("--scenario", ev.scenario, "Built-in scenario name or JSON file")->required();
  e->add_option("--folds", ev.folds, "Number of shuffle-split folds")->check(CLI::PositiveNumber);
  e->add_option("--train-n", ev.train_n, "Training records per fold");
  e->add_option("--test-n", ev.test_n, "Test records per fold");
  e->add_option("--report", ev.report, "Report output directory")->required();
  e->add_option("--seed", ev.seed, "Override the scenario seed");
  e->add_option("--segments", ev.segments, "Segments per class and condition");
  e->add_option("--data", ev.data, "Use an existing feature CSV instead of generating");
  e->add_option("--threads", ev.threads, "Worker threads (0: all cores)");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "Render a saved report");
  r->add_option("--in", rep.in, "Report directory or report.json")->required();
  r->add_option("--format", rep.format, "Output format")->check(CLI::IsMember({"json", "table", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*f) return run_featurize(fea);
    if (*t) return run_train(tr);
    if (*e) return run_evaluate(ev);
    if (*r) return run_report(rep);
  } catch (const amc::ParameterError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const amc::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kData;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
