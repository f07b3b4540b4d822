#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>

#include "amc/error.hpp"
#include "amc/report.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

amc::ScenarioReport sample_report() {
  amc::CvReport cv;
  cv.label = "SC-16QAM";
  cv.axis = amc::Axis::Sir;
  cv.train_n = 100;
  cv.test_n = 50;
  cv.folds = 2;
  cv.seed = 0xabcdef0123456789ULL;
  cv.fold_accuracy = {0.9, 0.8 + 1e-13};
  cv.mean = 0.85 + 5e-14;
  cv.std = 0.05;
  amc::BreakdownCell five{5.0, {0.8, 0.7}, {25, 25}, 0.75, 0.05, {}};
  five.confusion.counts[2][3] = 4;
  amc::BreakdownCell none{std::numeric_limits<double>::infinity(), {1.0, 0.9}, {25, 25}, 0.95, 0.05, {}};
  cv.breakdown = {five, none};
  amc::ConfusionMatrix m;
  m.counts[0][0] = 20;
  m.counts[0][1] = 5;
  m.counts[4][4] = 25;
  cv.confusion = {m, m};
  cv.train_class_counts = {{20, 20, 20, 20, 20}, {19, 21, 20, 20, 20}};
  cv.test_class_counts = {{10, 10, 10, 10, 10}, {10, 10, 10, 10, 10}};
  return {"INTERFERENCE_TRAINED", 7, {cv}};
}

}  // namespace

TEST_CASE("report JSON round-trip is exact") {
  const auto rep = sample_report();
  const auto text = amc::to_json(rep);
  CHECK(text.back() == '\n');
  const auto back = amc::scenario_report_from_json(text);
  CHECK(back == rep);
  CHECK(amc::to_json(back) == text);
  CHECK_THROWS_AS(amc::scenario_report_from_json("{}"), amc::FormatError);
}

TEST_CASE("report renderers") {
  const auto rep = sample_report();
  const auto table = amc::render_table(rep);
  CHECK(table.find("INTERFERENCE_TRAINED") != std::string::npos);
  CHECK(table.find("sir 5") != std::string::npos);
  CHECK(table.find("Avg.") != std::string::npos);
  CHECK(table.find("75.0 +-  5.0") != std::string::npos);
  CHECK(table.find("85.0") != std::string::npos);

  const auto csv = amc::render_breakdown_csv(rep);
  CHECK(csv.rfind("experiment,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 2);

  const auto conf = amc::render_confusion_csv(rep);
  CHECK(conf.find("\"SC-16QAM\",SC-BPSK,SC-QPSK,10,-0.2") != std::string::npos);
  CHECK(conf.find("\"SC-16QAM\",OFDM,OFDM,50,1\n") != std::string::npos);
}

TEST_CASE("emit and load") {
  const auto dir = fs::temp_directory_path() / "amc_report_emit";
  fs::remove_all(dir);
  const auto rep = sample_report();
  amc::emit_report(rep, dir);
  for (const char* f : {"report.json", "report.txt", "breakdown.csv", "confusion.csv"}) CHECK(fs::exists(dir / f));
  CHECK(amc::load_report(dir) == rep);
  CHECK(amc::load_report(dir / "report.json") == rep);

  const auto empty_dir = fs::temp_directory_path() / "amc_report_empty";
  fs::remove_all(empty_dir);
  CHECK_THROWS_AS(amc::emit_report(amc::ScenarioReport{"X", 1, {}}, empty_dir), amc::InputError);
  CHECK_FALSE(fs::exists(empty_dir / "report.json"));
  CHECK_THROWS_AS(amc::load_report(empty_dir), amc::Error);
}
