#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "amc/dataset.hpp"
#include "amc/error.hpp"
#include "amc/rng.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using amc::FeatureRecord;

namespace {

std::vector<FeatureRecord> sample_records(std::size_t n, std::uint64_t seed) {
  amc::Rng r(seed);
  std::vector<FeatureRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureRecord rec;
    rec.segment_id = i;
    rec.scheme = {i % 5 == 4 ? amc::Family::OFDM : amc::Family::SC, amc::kAllOrders[i % 4]};
    rec.snr_class_db = static_cast<double>(5 * (i % 5));
    if (i % 3 == 0) {
      rec.sir_class_db = 10.0;
      rec.interferer = amc::ModulationScheme{amc::Family::SC, amc::Order::QAM16};
    }
    rec.tx_profile = i % 2 ? "SDR" : "LAB";
    rec.rx_profile = "LAB";
    rec.seed = r.next();
    std::array<double, amc::kNumFeatures> f{};
    for (auto& v : f) v = r.normal() * std::pow(10.0, r.uniform(-20.0, 20.0));
    rec.features = amc::FeatureVector::from_array(f);
    out.push_back(rec);
  }
  return out;
}

std::string to_text(const std::vector<FeatureRecord>& records) {
  std::ostringstream os;
  amc::write_csv(os, records);
  return os.str();
}

}  // namespace

TEST_CASE("CSV round-trip is bit-exact") {
  const auto records = sample_records(200, 1);
  const auto text = to_text(records);
  CHECK(text.substr(0, text.find('\n')) == amc::csv_header());
  const auto back = amc::parse_csv(text);
  CHECK(back == records);
  CHECK(to_text(back) == text);
}

TEST_CASE("CSV edge cases") {
  CHECK(amc::parse_csv(amc::csv_header() + "\n").empty());
  CHECK(amc::parse_csv("").empty());
  CHECK(to_text({}) == amc::csv_header() + "\n");

  auto text = to_text(sample_records(3, 2));
  CHECK(amc::parse_csv(text + "\n\n").size() == 3);

  CHECK_THROWS_AS(amc::parse_csv("segment_id,oops\n"), amc::FormatError);

  // Non-finite feature on line 3.
  auto lines = text;
  const auto second = lines.find('\n', lines.find('\n') + 1) + 1;
  const auto last_comma = lines.rfind(',', lines.find('\n', second));
  lines.replace(last_comma + 1, lines.find('\n', second) - last_comma - 1, "nan");
  try {
    amc::parse_csv(lines);
    FAIL("expected a FormatError");
  } catch (const amc::FormatError& e) {
    CHECK(e.line() == 3);
  }

  const auto dup = text + text.substr(text.find('\n') + 1);
  CHECK_THROWS_AS(amc::parse_csv(dup), amc::FormatError);
  CHECK_THROWS_AS(amc::parse_csv(amc::csv_header() + "\n1,2,3\n"), amc::FormatError);
}

TEST_CASE("CSV files, plain and gzip") {
  const auto dir = fs::temp_directory_path() / "amc_dataset_files";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto records = sample_records(50, 3);
  amc::save_csv(records, dir / "plain.csv");
  CHECK(amc::load_csv(dir / "plain.csv") == records);

  const auto text = to_text(records);
  gzFile gz = gzopen((dir / "packed.csv.gz").string().c_str(), "wb");
  REQUIRE(gz);
  gzwrite(gz, text.data(), static_cast<unsigned>(text.size()));
  gzclose(gz);
  CHECK(amc::load_csv(dir / "packed.csv.gz") == records);
  CHECK_THROWS_AS(amc::load_csv(dir / "absent.csv"), amc::IoError);
}

TEST_CASE("filters") {
  const auto records = sample_records(60, 4);
  const auto snr10 = amc::filter(records, amc::parse_filter("snr=10"));
  CHECK(snr10.size() == 12);
  for (const auto& r : snr10) CHECK(r.snr_class_db == 10.0);

  const auto clean = amc::filter(records, amc::parse_filter("interferer=none"));
  CHECK(clean.size() == 40);
  const auto mixed = amc::filter(records, amc::parse_filter("sir=10 and tx=SDR && interferer=SC-16QAM"));
  for (const auto& r : mixed) {
    CHECK(r.tx_profile == "SDR");
    CHECK(r.sir_class_db == 10.0);
  }
  CHECK(mixed.size() == 10);
  const auto ofdm = amc::filter(records, amc::parse_filter("class=OFDM"));
  for (const auto& r : ofdm) CHECK(r.label() == amc::ClassLabel::Ofdm);
  CHECK(amc::filter(records, amc::parse_filter("")).size() == records.size());
  CHECK(amc::filter(records, amc::parse_filter("snr=7")).empty());
  CHECK(std::is_sorted(snr10.begin(), snr10.end(),
                       [](const auto& a, const auto& b) { return a.segment_id < b.segment_id; }));
  CHECK_THROWS_AS(amc::parse_filter("snr"), amc::ParameterError);
  CHECK_THROWS_AS(amc::parse_filter("color=red"), amc::ParameterError);
  CHECK_THROWS_AS(amc::parse_filter("snr=abc"), amc::ParameterError);
}

TEST_CASE("shuffle split: disjoint, sized and deterministic") {
  amc::SplitSpec spec{.train_n = 30, .test_n = 20, .folds = 8, .seed = 5};
  const auto folds = amc::shuffle_split(100, spec);
  REQUIRE(folds.size() == 8);
  for (const auto& f : folds) {
    CHECK(f.train.size() == 30);
    CHECK(f.test.size() == 20);
    std::set<std::size_t> tr(f.train.begin(), f.train.end());
    CHECK(tr.size() == 30);
    for (auto i : f.test) {
      CHECK(i < 100);
      CHECK(tr.count(i) == 0);
    }
  }
  CHECK(folds[0].train != folds[1].train);
  const auto again = amc::shuffle_split(100, spec);
  for (std::size_t k = 0; k < folds.size(); ++k) {
    CHECK(again[k].train == folds[k].train);
    CHECK(again[k].test == folds[k].test);
  }
  spec.seed = 6;
  CHECK(amc::shuffle_split(100, spec)[0].train != folds[0].train);
}

TEST_CASE("shuffle split: inclusion frequency is binomial") {
  // Each row is drawn into training with probability train_n / n per fold.
  const std::size_t n = 50, folds = 2000;
  amc::SplitSpec spec{.train_n = 10, .test_n = 10, .folds = folds, .seed = 7};
  std::vector<double> hits(n, 0.0);
  for (const auto& f : amc::shuffle_split(n, spec))
    for (auto i : f.train) hits[i] += 1.0;
  const double p = 0.2, mean = p * folds, sd = std::sqrt(folds * p * (1 - p));
  for (double h : hits) CHECK(std::abs(h - mean) < 4.5 * sd);
}

TEST_CASE("shuffle split: errors") {
  CHECK_THROWS_AS(amc::shuffle_split(10, {.train_n = 6, .test_n = 5, .folds = 1}), amc::ParameterError);
  CHECK_THROWS_AS(amc::shuffle_split(10, {.train_n = 0, .test_n = 5, .folds = 1}), amc::ParameterError);
}

TEST_CASE("shuffle split across two pools keeps shared segments on one side") {
  const auto records = sample_records(40, 8);
  std::vector<FeatureRecord> train_pool(records.begin(), records.begin() + 30);
  std::vector<FeatureRecord> test_pool(records.begin() + 20, records.end());
  const auto folds = amc::shuffle_split(train_pool, test_pool, {.train_n = 15, .test_n = 12, .folds = 20, .seed = 9});
  for (const auto& f : folds) {
    std::set<std::uint64_t> ids;
    for (auto i : f.train) ids.insert(train_pool[i].segment_id);
    for (auto i : f.test) CHECK(ids.count(test_pool[i].segment_id) == 0);
    CHECK(f.test.size() == 12);
  }
  CHECK_THROWS_AS(amc::shuffle_split(train_pool, test_pool, {.train_n = 30, .test_n = 15, .folds = 1}),
                  amc::ParameterError);
}

TEST_CASE("class counts") {
  const auto records = sample_records(10, 10);
  std::vector<std::size_t> rows(10);
  for (std::size_t i = 0; i < 10; ++i) rows[i] = i;
  const auto c = amc::class_counts(records, rows);
  std::size_t total = 0;
  for (auto v : c) total += v;
  CHECK(total == 10);
  CHECK(c[amc::class_index(amc::ClassLabel::Ofdm)] == 2);
}
