#include "amc/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "amc/error.hpp"
#include "amc/rng.hpp"

namespace amc {
namespace {

constexpr std::array<std::string_view, 9> kMetaColumns = {
    "segment_id", "modulation", "family",     "snr_class_db", "sir_class_db",
    "interferer", "tx_profile", "rx_profile", "seed"};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::string_view column, std::size_t line) {
  double v = 0.0;
  s = trim(s);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    // from_chars rejects "nan"/"inf" spellings on some libraries; treat them uniformly.
    throw FormatError("column " + std::string(column) + ": '" + std::string(s) + "' is not a number", line);
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s, std::string_view column, std::size_t line) {
  std::uint64_t v = 0;
  s = trim(s);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw FormatError("column " + std::string(column) + ": '" + std::string(s) + "' is not an unsigned integer", line);
  return v;
}

FeatureRecord parse_row(std::string_view row, std::size_t line) {
  const auto cells = split(row, ',');
  const std::size_t expected = kMetaColumns.size() + kNumFeatures;
  if (cells.size() != expected)
    throw FormatError("expected " + std::to_string(expected) + " fields, found " + std::to_string(cells.size()), line);
  FeatureRecord r;
  try {
    r.segment_id = parse_u64(cells[0], "segment_id", line);
    const auto family = trim(cells[2]);
    r.scheme = parse_scheme(std::string(family) + "-" + std::string(trim(cells[1])));
    r.snr_class_db = parse_double(cells[3], "snr_class_db", line);
    if (!trim(cells[4]).empty()) r.sir_class_db = parse_double(cells[4], "sir_class_db", line);
    if (!trim(cells[5]).empty()) r.interferer = parse_scheme(trim(cells[5]));
    r.tx_profile = std::string(trim(cells[6]));
    r.rx_profile = std::string(trim(cells[7]));
    r.seed = parse_u64(cells[8], "seed", line);
  } catch (const ParameterError& e) {
    throw FormatError(e.what(), line);
  }
  if (r.sir_class_db.has_value() != r.interferer.has_value())
    throw FormatError("sir_class_db and interferer must be both set or both empty", line);
  std::array<double, kNumFeatures> values{};
  for (std::size_t k = 0; k < kNumFeatures; ++k) {
    const auto name = feature_names()[k];
    const auto cell = trim(cells[kMetaColumns.size() + k]);
    double v;
    if (cell == "nan" || cell == "NaN" || cell == "-nan" || cell == "inf" || cell == "-inf")
      v = std::nan("");
    else
      v = parse_double(cell, name, line);
    if (!std::isfinite(v)) throw FormatError("feature " + std::string(name) + " is not finite", line);
    values[k] = v;
  }
  r.features = FeatureVector::from_array(values);
  return r;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

}  // namespace

std::string csv_header() {
  std::string h;
  for (auto c : kMetaColumns) {
    h += c;
    h += ',';
  }
  for (std::size_t k = 0; k < kNumFeatures; ++k) {
    h += feature_names()[k];
    if (k + 1 < kNumFeatures) h += ',';
  }
  return h;
}

void write_csv(std::ostream& out, const std::vector<FeatureRecord>& records) {
  out << csv_header() << '\n';
  for (const auto& r : records) {
    out << r.segment_id << ',' << to_string(r.scheme.order) << ',' << to_string(r.scheme.family) << ','
        << format_double(r.snr_class_db) << ','
        << (r.sir_class_db ? format_double(*r.sir_class_db) : std::string()) << ','
        << (r.interferer ? to_string(*r.interferer) : std::string()) << ',' << r.tx_profile << ','
        << r.rx_profile << ',' << r.seed;
    for (double v : r.features.to_array()) out << ',' << format_double(v);
    out << '\n';
  }
}

void save_csv(const std::vector<FeatureRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(out, records);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<FeatureRecord> parse_csv(std::string_view text) {
  std::vector<FeatureRecord> records;
  std::unordered_set<std::uint64_t> ids;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!header_seen) {
      if (trim(line) != csv_header()) throw FormatError("header does not match the feature CSV schema", line_no);
      header_seen = true;
      continue;
    }
    if (is_blank(line)) continue;
    auto rec = parse_row(line, line_no);
    if (!ids.insert(rec.segment_id).second)
      throw FormatError("duplicate segment_id " + std::to_string(rec.segment_id), line_no);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<FeatureRecord> load_csv(const std::filesystem::path& path) {
  gzFile file = gzopen(path.string().c_str(), "rb");
  if (!file) throw IoError("cannot open " + path.string());
  std::string text;
  char buf[1 << 16];
  int n;
  while ((n = gzread(file, buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(n));
  const bool failed = n < 0;
  gzclose(file);
  if (failed) throw IoError("read failed (corrupt gzip stream?): " + path.string());
  return parse_csv(text);
}

bool RecordFilter::matches(const FeatureRecord& r) const {
  if (label && r.label() != *label) return false;
  if (family && r.scheme.family != *family) return false;
  if (snr_db && r.snr_class_db != *snr_db) return false;
  if (sir_db && r.sir_class_db != *sir_db) return false;
  if (interferer && r.interferer != *interferer) return false;
  if (tx_profile && r.tx_profile != *tx_profile) return false;
  if (rx_profile && r.rx_profile != *rx_profile) return false;
  return true;
}

RecordFilter parse_filter(std::string_view expr) {
  std::string normalized(expr);
  for (const std::string sep : {"&&", " and ", " AND "}) {
    for (std::size_t p; (p = normalized.find(sep)) != std::string::npos;) normalized.replace(p, sep.size(), ",");
  }
  RecordFilter f;
  for (auto clause : split(normalized, ',')) {
    clause = trim(clause);
    if (clause.empty()) continue;
    const auto eq = clause.find('=');
    if (eq == std::string_view::npos) throw ParameterError("filter clause '" + std::string(clause) + "' lacks '='");
    auto key = trim(clause.substr(0, eq));
    auto value = trim(clause.substr(eq + 1));
    if (!value.empty() && value.front() == '=') value = trim(value.substr(1));  // allow '=='
    const bool none = value == "none" || value == "NONE";
    auto number = [&](std::string_view v) {
      double d;
      const auto res = std::from_chars(v.data(), v.data() + v.size(), d);
      if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ParameterError("filter: '" + std::string(v) + "' is not a number");
      return d;
    };
    if (key == "class" || key == "label") f.label = parse_class(value);
    else if (key == "family") f.family = value == "SC" ? Family::SC : value == "OFDM" ? Family::OFDM
                                         : throw ParameterError("filter: unknown family '" + std::string(value) + "'");
    else if (key == "snr") f.snr_db = number(value);
    else if (key == "sir") f.sir_db = none ? std::optional<double>{} : std::optional<double>{number(value)};
    else if (key == "interferer") f.interferer = none ? std::optional<ModulationScheme>{} : std::optional<ModulationScheme>{parse_scheme(value)};
    else if (key == "tx") f.tx_profile = std::string(value);
    else if (key == "rx") f.rx_profile = std::string(value);
    else throw ParameterError("filter: unknown key '" + std::string(key) + "'");
  }
  return f;
}

std::vector<FeatureRecord> filter(const std::vector<FeatureRecord>& records, const RecordPredicate& pred) {
  std::vector<FeatureRecord> out;
  for (const auto& r : records)
    if (pred(r)) out.push_back(r);
  std::stable_sort(out.begin(), out.end(),
                   [](const FeatureRecord& a, const FeatureRecord& b) { return a.segment_id < b.segment_id; });
  return out;
}

std::vector<FeatureRecord> filter(const std::vector<FeatureRecord>& records, const RecordFilter& f) {
  return filter(records, [&f](const FeatureRecord& r) { return f.matches(r); });
}

namespace {

// First k entries of a uniformly random permutation of `items`.
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k && i + 1 < items.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(items.size() - i));
    std::swap(items[i], items[j]);
  }
}

}  // namespace

std::vector<Fold> shuffle_split(std::size_t n, const SplitSpec& spec) {
  if (spec.train_n == 0 || spec.test_n == 0) throw ParameterError("shuffle_split: sizes must be positive");
  if (spec.train_n + spec.test_n > n)
    throw ParameterError("shuffle_split: need " + std::to_string(spec.train_n + spec.test_n) +
                         " records, pool has " + std::to_string(n));
  std::vector<Fold> folds(spec.folds);
  std::vector<std::size_t> perm(n);
  for (std::size_t f = 0; f < spec.folds; ++f) {
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(derive_seed(spec.seed, {f}));
    partial_shuffle(perm, spec.train_n + spec.test_n, rng);
    folds[f].train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(spec.train_n));
    folds[f].test.assign(perm.begin() + static_cast<std::ptrdiff_t>(spec.train_n),
                         perm.begin() + static_cast<std::ptrdiff_t>(spec.train_n + spec.test_n));
  }
  return folds;
}

std::vector<Fold> shuffle_split(const std::vector<FeatureRecord>& train_pool,
                                const std::vector<FeatureRecord>& test_pool, const SplitSpec& spec) {
  if (spec.train_n == 0 || spec.test_n == 0) throw ParameterError("shuffle_split: sizes must be positive");
  if (spec.train_n > train_pool.size())
    throw ParameterError("shuffle_split: need " + std::to_string(spec.train_n) +
                         " training records, pool has " + std::to_string(train_pool.size()));
  if (spec.test_n > test_pool.size())
    throw ParameterError("shuffle_split: need " + std::to_string(spec.test_n) +
                         " test records, pool has " + std::to_string(test_pool.size()));

  std::vector<Fold> folds(spec.folds);
  std::vector<std::size_t> train_perm(train_pool.size()), test_perm(test_pool.size());
  for (std::size_t f = 0; f < spec.folds; ++f) {
    Rng rng(derive_seed(spec.seed, {f}));
    std::iota(train_perm.begin(), train_perm.end(), 0);
    partial_shuffle(train_perm, spec.train_n, rng);
    folds[f].train.assign(train_perm.begin(), train_perm.begin() + static_cast<std::ptrdiff_t>(spec.train_n));

    std::unordered_set<std::uint64_t> used;
    for (std::size_t i : folds[f].train) used.insert(train_pool[i].segment_id);
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < test_pool.size(); ++i)
      if (!used.count(test_pool[i].segment_id)) candidates.push_back(i);
    if (candidates.size() < spec.test_n)
      throw ParameterError("shuffle_split: need " + std::to_string(spec.test_n) +
                           " test records disjoint from training, only " +
                           std::to_string(candidates.size()) + " available");
    partial_shuffle(candidates, spec.test_n, rng);
    folds[f].test.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(spec.test_n));
  }
  return folds;
}

std::array<std::size_t, kNumClasses> class_counts(const std::vector<FeatureRecord>& records,
                                                  const std::vector<std::size_t>& rows) {
  std::array<std::size_t, kNumClasses> counts{};
  for (std::size_t i : rows) ++counts[class_index(records[i].label())];
  return counts;
}

}  // namespace amc
