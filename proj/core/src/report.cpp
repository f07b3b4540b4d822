#include "amc/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "amc/error.hpp"
#include "json.hpp"

namespace amc {

using nlohmann::json;

namespace {

json level_json(double level) { return std::isfinite(level) ? json(level) : json(nullptr); }
double level_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

std::string level_name(double level) {
  if (!std::isfinite(level)) return "none";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", level);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cv_json(const CvReport& r) {
  json breakdown = json::array();
  for (const auto& c : r.breakdown)
    breakdown.push_back({{"level", level_json(c.level)},
                         {"fold_accuracy", c.fold_accuracy},
                         {"fold_count", c.fold_count},
                         {"mean", c.mean},
                         {"std", c.std},
                         {"confusion", c.confusion.counts}});
  json conf = json::array();
  for (const auto& m : r.confusion) conf.push_back(m.counts);
  return {{"label", r.label},
          {"axis", to_string(r.axis)},
          {"train_n", r.train_n},
          {"test_n", r.test_n},
          {"folds", r.folds},
          {"seed", r.seed},
          {"fold_accuracy", r.fold_accuracy},
          {"mean", r.mean},
          {"std", r.std},
          {"breakdown", breakdown},
          {"confusion", conf},
          {"train_class_counts", r.train_class_counts},
          {"test_class_counts", r.test_class_counts}};
}

CvReport cv_from_json(const json& j) {
  CvReport r;
  r.label = j.at("label").get<std::string>();
  r.axis = parse_axis(j.at("axis").get<std::string>());
  r.train_n = j.at("train_n").get<std::size_t>();
  r.test_n = j.at("test_n").get<std::size_t>();
  r.folds = j.at("folds").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.fold_accuracy = j.at("fold_accuracy").get<std::vector<double>>();
  r.mean = j.at("mean").get<double>();
  r.std = j.at("std").get<double>();
  for (const auto& c : j.at("breakdown")) {
    BreakdownCell cell;
    cell.level = level_from(c.at("level"));
    cell.fold_accuracy = c.at("fold_accuracy").get<std::vector<double>>();
    cell.fold_count = c.at("fold_count").get<std::vector<std::uint64_t>>();
    cell.mean = c.at("mean").get<double>();
    cell.std = c.at("std").get<double>();
    cell.confusion.counts = c.at("confusion").get<decltype(cell.confusion.counts)>();
    r.breakdown.push_back(std::move(cell));
  }
  for (const auto& m : j.at("confusion")) {
    ConfusionMatrix cm;
    cm.counts = m.get<decltype(cm.counts)>();
    r.confusion.push_back(cm);
  }
  r.train_class_counts = j.at("train_class_counts").get<decltype(r.train_class_counts)>();
  r.test_class_counts = j.at("test_class_counts").get<decltype(r.test_class_counts)>();
  return r;
}

void check_nonempty(const ScenarioReport& report) {
  if (report.experiments.empty()) throw InputError("report has no experiments");
  for (const auto& e : report.experiments)
    if (e.fold_accuracy.empty()) throw InputError("report experiment '" + e.label + "' has no folds");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::string to_json(const CvReport& report) { return cv_json(report).dump(2); }

std::string to_json(const ScenarioReport& report) {
  json exps = json::array();
  for (const auto& e : report.experiments) exps.push_back(cv_json(e));
  json j = {{"format", "amc-report"}, {"scenario", report.scenario}, {"seed", report.seed}, {"experiments", exps}};
  return j.dump(2) + "\n";
}

ScenarioReport scenario_report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "amc-report") throw FormatError("not an amc report");
    ScenarioReport r;
    r.scenario = j.at("scenario").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("experiments")) r.experiments.push_back(cv_from_json(e));
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

std::string render_table(const ScenarioReport& report) {
  check_nonempty(report);
  std::set<double> levels;
  for (const auto& e : report.experiments)
    for (const auto& c : e.breakdown) levels.insert(c.level);
  const Axis axis = report.experiments.front().axis;

  std::size_t label_w = 10;
  for (const auto& e : report.experiments) label_w = std::max(label_w, e.label.size());
  std::ostringstream out;
  char buf[64];
  out << report.scenario << "  (accuracy %, mean +- std over folds)\n";
  std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(label_w), "");
  out << buf;
  for (double lv : levels) {
    std::snprintf(buf, sizeof buf, " | %13s", (to_string(axis) + " " + level_name(lv)).c_str());
    out << buf;
  }
  out << " | " << "          Avg.\n";
  for (const auto& e : report.experiments) {
    std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(label_w), e.label.c_str());
    out << buf;
    for (double lv : levels) {
      if (const auto* c = e.cell(lv))
        std::snprintf(buf, sizeof buf, " | %6.1f +- %4.1f", 100.0 * c->mean, 100.0 * c->std);
      else
        std::snprintf(buf, sizeof buf, " | %13s", "-");
      out << buf;
    }
    std::snprintf(buf, sizeof buf, " | %6.1f +- %4.1f\n", 100.0 * e.mean, 100.0 * e.std);
    out << buf;
  }
  return out.str();
}

std::string render_breakdown_csv(const ScenarioReport& report) {
  check_nonempty(report);
  std::ostringstream out;
  out << "experiment,axis,level,mean,std,fold,accuracy,count\n";
  for (const auto& e : report.experiments)
    for (const auto& c : e.breakdown)
      for (std::size_t f = 0; f < c.fold_accuracy.size(); ++f)
        out << '"' << e.label << "\"," << to_string(e.axis) << ',' << level_name(c.level) << ',' << num(c.mean)
            << ',' << num(c.std) << ',' << f << ',' << num(c.fold_accuracy[f]) << ',' << c.fold_count[f] << '\n';
  return out.str();
}

std::string render_confusion_csv(const ScenarioReport& report) {
  check_nonempty(report);
  std::ostringstream out;
  out << "experiment,true,predicted,count,fraction\n";
  for (const auto& e : report.experiments) {
    const auto m = e.total_confusion();
    for (std::size_t t = 0; t < kNumClasses; ++t)
      for (std::size_t p = 0; p < kNumClasses; ++p)
        out << '"' << e.label << "\"," << to_string(kAllClasses[t]) << ',' << to_string(kAllClasses[p]) << ','
            << m.counts[t][p] << ',' << num(m.signed_score(t, p)) << '\n';
  }
  return out.str();
}

void emit_report(const ScenarioReport& report, const std::filesystem::path& dir) {
  check_nonempty(report);
  const std::string json_text = to_json(report);
  const std::string table = render_table(report);
  const std::string breakdown = render_breakdown_csv(report);
  const std::string conf = render_confusion_csv(report);
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", json_text);
  write_text(dir / "report.txt", table);
  write_text(dir / "breakdown.csv", breakdown);
  write_text(dir / "confusion.csv", conf);
}

ScenarioReport load_report(const std::filesystem::path& path) {
  const auto file = std::filesystem::is_directory(path) ? path / "report.json" : path;
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_report_from_json(ss.str());
}

void write_density_csv(const std::filesystem::path& path, const ClassDensities& d) {
  std::ostringstream out;
  out << "feature,class,x,density\n";
  for (std::size_t k = 0; k < kNumClasses; ++k)
    for (std::size_t i = 0; i < d.density[k].size(); ++i)
      out << d.feature << ',' << to_string(kAllClasses[k]) << ',' << num(d.x[i]) << ',' << num(d.density[k][i])
          << '\n';
  write_text(path, out.str());
}

void write_dependency_csv(const std::filesystem::path& path, const std::string& feature, Axis axis,
                          const std::vector<DependencyPoint>& points) {
  std::ostringstream out;
  out << "feature,axis,class,level,count,mean,std\n";
  for (const auto& p : points)
    out << feature << ',' << to_string(axis) << ',' << to_string(p.label) << ',' << level_name(p.level) << ','
        << p.count << ',' << num(p.mean) << ',' << num(p.std) << '\n';
  write_text(path, out.str());
}

}  // namespace amc
