#include "amc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "amc/error.hpp"
#include "amc/log.hpp"

namespace amc {

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double sample_sd(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double feature_value(const FeatureRecord& r, std::size_t idx) { return r.features.to_array()[idx]; }

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2) throw ParameterError("silverman_bandwidth: need at least 2 values");
  const double sd = sample_sd(values);
  const std::vector<double> v(values.begin(), values.end());
  const double iqr = quantile(v, 0.75) - quantile(v, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = 1.0;
  return 0.9 * spread * std::pow(static_cast<double>(values.size()), -0.2);
}

std::vector<double> kde_at(std::span<const double> values, double bandwidth, std::span<const double> grid) {
  if (values.size() < 2) throw ParameterError("kde: need at least 2 values");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw ParameterError("kde: bandwidth must be positive");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  const double reach = 8.0 * bandwidth;
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), grid[g] - reach);
    auto hi = std::upper_bound(lo, sorted.end(), grid[g] + reach);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it) {
      const double u = (grid[g] - *it) / bandwidth;
      acc += std::exp(-0.5 * u * u);
    }
    out[g] = acc * norm;
  }
  return out;
}

DensityCurve kde(std::span<const double> values, double bandwidth, std::size_t grid_points) {
  if (values.size() < 2) throw ParameterError("kde: need at least 2 values");
  if (grid_points < 2) throw ParameterError("kde: need at least 2 grid points");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double a = *mn - 3.0 * bandwidth, b = *mx + 3.0 * bandwidth;
  DensityCurve c;
  c.x.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i)
    c.x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
  c.density = kde_at(values, bandwidth, c.x);
  return c;
}

double trapezoid(const DensityCurve& curve) {
  double s = 0.0;
  for (std::size_t i = 1; i < curve.x.size(); ++i)
    s += 0.5 * (curve.density[i] + curve.density[i - 1]) * (curve.x[i] - curve.x[i - 1]);
  return s;
}

ClassDensities class_densities(const std::vector<FeatureRecord>& records, const std::string& feature,
                               std::size_t grid_points) {
  const std::size_t idx = feature_index(feature);
  ClassDensities out;
  out.feature = feature;
  std::array<std::vector<double>, kNumClasses> values;
  for (const auto& r : records) values[class_index(r.label())].push_back(feature_value(r, idx));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    if (values[k].size() < 2) continue;
    out.bandwidth[k] = silverman_bandwidth(values[k]);
    const auto [mn, mx] = std::minmax_element(values[k].begin(), values[k].end());
    lo = std::min(lo, *mn - 3.0 * out.bandwidth[k]);
    hi = std::max(hi, *mx + 3.0 * out.bandwidth[k]);
  }
  if (!std::isfinite(lo)) throw InputError("class_densities: no class has at least 2 records");
  out.x.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i)
    out.x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
  for (std::size_t k = 0; k < kNumClasses; ++k)
    if (values[k].size() >= 2) out.density[k] = kde_at(values[k], out.bandwidth[k], out.x);
  return out;
}

std::vector<DependencyPoint> feature_dependency(const std::vector<FeatureRecord>& records,
                                                const std::string& feature, Axis axis) {
  const std::size_t idx = feature_index(feature);
  if (records.empty()) throw InputError("feature_dependency: no records");
  double m = 0.0;
  for (const auto& r : records) m += feature_value(r, idx);
  m /= static_cast<double>(records.size());
  double ss = 0.0;
  for (const auto& r : records) ss += (feature_value(r, idx) - m) * (feature_value(r, idx) - m);
  double sd = std::sqrt(ss / static_cast<double>(records.size()));
  if (!(sd > 1e-12 * std::abs(m))) sd = 1.0;

  auto level_of = [axis](const FeatureRecord& r) -> std::optional<double> {
    return axis == Axis::Snr ? std::optional<double>(r.snr_class_db) : r.sir_class_db;
  };
  std::set<double> levels;
  for (const auto& r : records)
    if (auto lv = level_of(r)) levels.insert(*lv);
  if (levels.empty()) throw InputError("feature_dependency: no record carries a " + to_string(axis) + " value");

  std::vector<DependencyPoint> out;
  for (ClassLabel c : kAllClasses) {
    for (double lv : levels) {
      std::vector<double> z;
      for (const auto& r : records)
        if (r.label() == c && level_of(r) == lv) z.push_back((feature_value(r, idx) - m) / sd);
      if (z.empty()) {
        log::warn("feature_dependency: no " + to_string(c) + " records at " + to_string(axis) + " " +
                  std::to_string(lv) + "; omitted");
        continue;
      }
      double zm = 0.0;
      for (double v : z) zm += v;
      zm /= static_cast<double>(z.size());
      double zs = 0.0;
      for (double v : z) zs += (v - zm) * (v - zm);
      out.push_back({c, lv, z.size(), zm, std::sqrt(zs / static_cast<double>(z.size()))});
    }
  }
  return out;
}

double relative_spread(const std::vector<FeatureRecord>& records, const std::string& feature, ClassLabel label,
                       Axis axis) {
  const std::size_t idx = feature_index(feature);
  std::map<double, std::pair<double, std::size_t>> by_level;
  for (const auto& r : records) {
    if (r.label() != label) continue;
    const std::optional<double> lv = axis == Axis::Snr ? std::optional<double>(r.snr_class_db) : r.sir_class_db;
    if (!lv) continue;
    auto& [sum, n] = by_level[*lv];
    sum += feature_value(r, idx);
    ++n;
  }
  if (by_level.empty()) throw InputError("relative_spread: no records for " + to_string(label));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, total = 0.0;
  for (const auto& [lv, acc] : by_level) {
    const double mean = acc.first / static_cast<double>(acc.second);
    lo = std::min(lo, mean);
    hi = std::max(hi, mean);
    total += mean;
  }
  return (hi - lo) / std::abs(total / static_cast<double>(by_level.size()));
}

}  // namespace amc
