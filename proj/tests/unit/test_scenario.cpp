#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "amc/error.hpp"
#include "amc/features.hpp"
#include "amc/log.hpp"
#include "amc/scenario.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using amc::ClassLabel;

namespace {

// Short segments keep the grid tests fast; 5,000 samples still cover one Welch frame.
amc::ScenarioSpec small_baseline(std::size_t per_cell) {
  auto spec = amc::builtin_scenario(amc::ScenarioKind::Baseline);
  spec.segments_per_cell = per_cell;
  spec.duration = 1e-4;
  return spec;
}

}  // namespace

TEST_CASE("built-in scenarios") {
  const auto base = amc::builtin_scenario("BASELINE");
  REQUIRE(base.experiments.size() == 1);
  CHECK(base.cells().size() == 5);
  CHECK(base.train_n == 2000);
  CHECK(base.folds == 10);

  const auto hw = amc::builtin_scenario(amc::ScenarioKind::HardwareCross);
  CHECK(hw.experiments.size() == 4);
  std::set<std::string> pairs;
  for (const auto& c : hw.cells()) pairs.insert(c.tx_profile + "/" + c.rx_profile);
  CHECK(pairs == std::set<std::string>{"LAB/LAB", "SDR/SDR"});

  const auto it = amc::builtin_scenario(amc::ScenarioKind::InterferenceTrained);
  CHECK(it.experiments.size() == 3);
  for (const auto& e : it.experiments) CHECK(e.breakdown == amc::Axis::Sir);
  CHECK(it.cells().size() == 12);

  const auto iu = amc::builtin_scenario(amc::ScenarioKind::InterferenceUntrained);
  for (const auto& e : iu.experiments) {
    for (const auto& c : e.train.expand()) CHECK_FALSE(c.interferer.has_value());
    for (const auto& c : e.test.expand()) CHECK(c.interferer.has_value());
  }
  CHECK(amc::builtin_scenario("BASELINE_SINGLE_SNR_TRAIN").experiments[0].train.expand().size() == 1);
  CHECK_THROWS_AS(amc::builtin_scenario("NOPE"), amc::ParameterError);
}

TEST_CASE("condition keys and grids") {
  amc::Condition c;
  c.snr_db = 10;
  c.sir_db = 5;
  c.interferer = amc::ModulationScheme{amc::Family::SC, amc::Order::QAM16};
  c.tx_profile = c.rx_profile = "SDR";
  CHECK(c.key() == "snr=10|sir=5|intf=SC-16QAM|tx=SDR|rx=SDR");

  amc::ConditionSet set;
  set.snr_db = {0, 10};
  set.sir_db = {5, 15};
  set.interferers = {std::nullopt, amc::ModulationScheme{amc::Family::OFDM, amc::Order::QAM64}};
  CHECK(set.expand().size() == 2 * (1 + 2));
  amc::ConditionSet reordered = set;
  reordered.snr_db = {10, 0};
  CHECK(set.same_cells(reordered));
  reordered.tx_profile = "SDR";
  CHECK_FALSE(set.same_cells(reordered));
}

TEST_CASE("generation: record counts per class and cell") {
  const auto spec = small_baseline(100);
  amc::GenerateOptions opt;
  const auto data = amc::generate_scenario(spec, opt);
  REQUIRE(data.records.size() == 5 * 5 * 100);
  std::map<std::pair<std::size_t, double>, std::size_t> counts;
  std::set<std::uint64_t> ids;
  for (const auto& r : data.records) {
    ++counts[{amc::class_index(r.label()), r.snr_class_db}];
    ids.insert(r.segment_id);
    for (double v : r.features.to_array()) CHECK(std::isfinite(v));
  }
  CHECK(ids.size() == data.records.size());
  CHECK(counts.size() == 25);
  for (const auto& [key, n] : counts) CHECK(n == 100);

  // OFDM segments cycle through all subcarrier orders.
  std::set<amc::Order> ofdm_orders;
  for (const auto& r : data.records)
    if (r.scheme.family == amc::Family::OFDM) ofdm_orders.insert(r.scheme.order);
  CHECK(ofdm_orders.size() == 4);
}

TEST_CASE("generation: deterministic and thread-count independent") {
  const auto spec = small_baseline(4);
  amc::GenerateOptions one;
  one.threads = 1;
  amc::GenerateOptions four;
  four.threads = 4;
  const auto a = amc::generate_scenario(spec, one);
  const auto b = amc::generate_scenario(spec, four);
  CHECK(a.records == b.records);
  CHECK(a.correction_skipped == b.correction_skipped);

  auto other = spec;
  other.seed = 2;
  CHECK_FALSE(amc::generate_scenario(other, one).records == a.records);
}

TEST_CASE("generation: zero segments per cell yields an empty dataset") {
  const bool was = amc::log::set_quiet(true);
  const auto data = amc::generate_scenario(small_baseline(0));
  amc::log::set_quiet(was);
  CHECK(data.records.empty());
}

TEST_CASE("segment seeds depend only on their coordinates") {
  amc::Condition c;
  const auto s = amc::segment_seed(1, c, ClassLabel::ScQpsk, 3);
  CHECK(s == amc::segment_seed(1, c, ClassLabel::ScQpsk, 3));
  CHECK(s != amc::segment_seed(1, c, ClassLabel::ScQpsk, 4));
  CHECK(s != amc::segment_seed(1, c, ClassLabel::Sc16Qam, 3));
  CHECK(s != amc::segment_seed(2, c, ClassLabel::ScQpsk, 3));
  c.snr_db = 5;
  CHECK(s != amc::segment_seed(1, c, ClassLabel::ScQpsk, 3));
}

TEST_CASE("scenario JSON round-trip") {
  for (auto kind : {amc::ScenarioKind::Baseline, amc::ScenarioKind::HardwareCross, amc::ScenarioKind::InterferenceTrained,
                    amc::ScenarioKind::InterferenceUntrained, amc::ScenarioKind::BaselineSingleSnrTrain}) {
    auto spec = amc::builtin_scenario(kind);
    spec.seed = 99;
    spec.profiles["NOISY"] = amc::HardwareProfile::sdr();
    spec.profiles["NOISY"].name = "NOISY";
    const auto back = amc::scenario_from_json(amc::to_json(spec));
    CHECK(amc::to_json(back) == amc::to_json(spec));
    CHECK(back.cells() == spec.cells());
    CHECK(back.profile("NOISY") == spec.profiles["NOISY"]);
  }
  CHECK_THROWS_AS(amc::scenario_from_json("[1,2"), amc::FormatError);
}

TEST_CASE("scenario files") {
  const auto dir = fs::temp_directory_path() / "amc_scenario_files";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto spec = small_baseline(2);
  spec.experiments[0].train.snr_db = {20};
  spec.experiments[0].test.snr_db = {20};
  std::ofstream(dir / "s.json") << amc::to_json(spec);
  const auto loaded = amc::load_scenario((dir / "s.json").string());
  CHECK(loaded.cells().size() == 1);
  CHECK(loaded.duration == 1e-4);
  CHECK(amc::load_scenario("BASELINE").cells().size() == 5);
  CHECK_THROWS_AS(amc::load_scenario((dir / "absent.json").string()), amc::Error);

  const auto data = amc::generate_scenario(loaded);
  amc::write_dataset(dir / "out", loaded, data);
  CHECK(amc::load_csv(dir / "out" / "features.csv") == data.records);
  CHECK(fs::exists(dir / "out" / "manifest.json"));
}
