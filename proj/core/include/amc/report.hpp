#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "amc/analysis.hpp"
#include "amc/cv.hpp"

namespace amc {

std::string to_json(const CvReport& report);
std::string to_json(const ScenarioReport& report);
ScenarioReport scenario_report_from_json(const std::string& text);

/// Accuracy (mean +- std, percent) per breakdown level plus the average, one row per experiment.
std::string render_table(const ScenarioReport& report);
/// experiment,level,mean,std,fold,accuracy,count rows.
std::string render_breakdown_csv(const ScenarioReport& report);
/// experiment,true,predicted,count,fraction rows of the fold-summed confusion
/// matrices; fraction is the signed row score.
std::string render_confusion_csv(const ScenarioReport& report);

/// Writes report.json, report.txt, breakdown.csv and confusion.csv into `dir`.
/// An empty report is rejected before anything is written.
void emit_report(const ScenarioReport& report, const std::filesystem::path& dir);
/// Reads report.json from a directory, or the given JSON file.
ScenarioReport load_report(const std::filesystem::path& path);

void write_density_csv(const std::filesystem::path& path, const ClassDensities& densities);
void write_dependency_csv(const std::filesystem::path& path, const std::string& feature, Axis axis,
                          const std::vector<DependencyPoint>& points);

}  // namespace amc
