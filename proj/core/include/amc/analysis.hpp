#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amc/dataset.hpp"
#include "amc/scenario.hpp"

namespace amc {

struct DensityCurve {
  std::vector<double> x;
  std::vector<double> density;
};

/// Silverman's rule of thumb, 0.9 * min(sd, IQR / 1.34) * n^(-1/5).
/// Falls back to the sd (or 1) when the IQR or both spreads vanish.
double silverman_bandwidth(std::span<const double> values);

/// Gaussian-kernel density on a uniform grid over [min - 3h, max + 3h].
DensityCurve kde(std::span<const double> values, double bandwidth, std::size_t grid_points = 512);
/// Same, evaluated on a caller-supplied grid.
std::vector<double> kde_at(std::span<const double> values, double bandwidth, std::span<const double> grid);

/// Trapezoid-rule integral of a density curve.
double trapezoid(const DensityCurve& curve);

struct ClassDensities {
  std::string feature;
  std::vector<double> x;
  /// One curve per class present; an empty vector for absent classes.
  std::array<std::vector<double>, kNumClasses> density;
  std::array<double, kNumClasses> bandwidth{};
};

/// Per-class KDE of one feature on a shared grid (Silverman bandwidth per class).
ClassDensities class_densities(const std::vector<FeatureRecord>& records, const std::string& feature,
                               std::size_t grid_points = 512);

struct DependencyPoint {
  ClassLabel label;
  double level;
  std::size_t count;
  double mean;
  double std;
};

/// Mean and std of the standardized feature (z-scored over all records) per
/// class and axis level. Empty (class, level) groups are omitted with a warning.
std::vector<DependencyPoint> feature_dependency(const std::vector<FeatureRecord>& records,
                                                const std::string& feature, Axis axis);

/// (max - min) / |mean| of the raw per-level means of one class's feature.
double relative_spread(const std::vector<FeatureRecord>& records, const std::string& feature, ClassLabel label,
                       Axis axis);

}  // namespace amc
