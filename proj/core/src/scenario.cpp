#include "amc/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "amc/error.hpp"
#include "amc/iq_io.hpp"
#include "amc/log.hpp"
#include "amc/rng.hpp"
#include "json.hpp"

namespace amc {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<double> kSnrGrid = {0.0, 5.0, 10.0, 15.0, 20.0};
const std::vector<double> kSirGrid = {5.0, 10.0, 15.0, 20.0};

std::vector<std::optional<ModulationScheme>> default_interferers() {
  return {ModulationScheme{Family::SC, Order::BPSK}, ModulationScheme{Family::SC, Order::QAM16},
          ModulationScheme{Family::OFDM, Order::QAM64}};
}

}  // namespace

std::string Condition::key() const {
  std::string k = "snr=" + num(snr_db);
  if (interferer) k += "|sir=" + num(sir_db.value_or(0.0)) + "|intf=" + to_string(*interferer);
  k += "|tx=" + tx_profile + "|rx=" + rx_profile;
  return k;
}

bool Condition::matches(const FeatureRecord& r) const {
  return r.snr_class_db == snr_db && r.interferer == interferer &&
         (!interferer || r.sir_class_db == sir_db) && r.tx_profile == tx_profile &&
         r.rx_profile == rx_profile;
}

std::vector<Condition> ConditionSet::expand() const {
  std::vector<Condition> out;
  for (double snr : snr_db) {
    for (const auto& intf : interferers) {
      if (!intf) {
        out.push_back(Condition{snr, std::nullopt, std::nullopt, tx_profile, rx_profile});
        continue;
      }
      for (double sir : sir_db) out.push_back(Condition{snr, sir, intf, tx_profile, rx_profile});
    }
  }
  return out;
}

bool ConditionSet::matches(const FeatureRecord& r) const {
  for (const auto& c : expand())
    if (c.matches(r)) return true;
  return false;
}

bool ConditionSet::same_cells(const ConditionSet& other) const {
  auto keys = [](const ConditionSet& s) {
    std::vector<std::string> k;
    for (const auto& c : s.expand()) k.push_back(c.key());
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
  };
  return keys(*this) == keys(other);
}

std::string to_string(Axis axis) { return axis == Axis::Snr ? "snr" : "sir"; }

Axis parse_axis(std::string_view text) {
  if (text == "snr" || text == "SNR") return Axis::Snr;
  if (text == "sir" || text == "SIR") return Axis::Sir;
  throw ParameterError("unknown breakdown axis '" + std::string(text) + "'");
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Baseline: return "BASELINE";
    case ScenarioKind::BaselineSingleSnrTrain: return "BASELINE_SINGLE_SNR_TRAIN";
    case ScenarioKind::HardwareCross: return "HARDWARE_CROSS";
    case ScenarioKind::InterferenceTrained: return "INTERFERENCE_TRAINED";
    case ScenarioKind::InterferenceUntrained: return "INTERFERENCE_UNTRAINED";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (auto k : {ScenarioKind::Baseline, ScenarioKind::BaselineSingleSnrTrain, ScenarioKind::HardwareCross,
                 ScenarioKind::InterferenceTrained, ScenarioKind::InterferenceUntrained})
    if (to_string(k) == name) return k;
  throw ParameterError("unknown scenario '" + std::string(name) + "'");
}

std::vector<Condition> ScenarioSpec::cells() const {
  std::vector<Condition> out;
  auto add = [&out](const ConditionSet& set) {
    for (auto& c : set.expand())
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  for (const auto& e : experiments) {
    add(e.train);
    add(e.test);
  }
  return out;
}

HardwareProfile ScenarioSpec::profile(const std::string& name) const {
  if (auto it = profiles.find(name); it != profiles.end()) return it->second;
  return builtin_profile(name);
}

ScenarioSpec builtin_scenario(ScenarioKind kind) {
  ScenarioSpec s;
  s.kind = kind;
  ConditionSet lab{kSnrGrid, {}, {std::nullopt}, "LAB", "LAB"};
  ConditionSet sdr{kSnrGrid, {}, {std::nullopt}, "SDR", "SDR"};
  switch (kind) {
    case ScenarioKind::Baseline:
      s.experiments.push_back({"all-SNR training", lab, lab, Axis::Snr, {}, {}});
      break;
    case ScenarioKind::BaselineSingleSnrTrain: {
      ConditionSet train = lab;
      train.snr_db = {10.0};
      // Only one SNR cell feeds the training pool.
      s.experiments.push_back({"10 dB training", train, lab, Axis::Snr, 800, {}});
      break;
    }
    case ScenarioKind::HardwareCross:
      s.experiments.push_back({"Lab/Lab", lab, lab, Axis::Snr, {}, {}});
      s.experiments.push_back({"SDR/SDR", sdr, sdr, Axis::Snr, {}, {}});
      s.experiments.push_back({"SDR/Lab", lab, sdr, Axis::Snr, {}, {}});
      s.experiments.push_back({"Lab/SDR", sdr, lab, Axis::Snr, {}, {}});
      break;
    case ScenarioKind::InterferenceTrained:
    case ScenarioKind::InterferenceUntrained:
      for (const auto& intf : default_interferers()) {
        ConditionSet with{{10.0}, kSirGrid, {intf}, "SDR", "SDR"};
        ConditionSet clean{{10.0}, {}, {std::nullopt}, "SDR", "SDR"};
        if (kind == ScenarioKind::InterferenceTrained)
          s.experiments.push_back({to_string(*intf), with, with, Axis::Sir, {}, {}});
        else
          s.experiments.push_back({to_string(*intf), clean, with, Axis::Sir, 800, {}});
      }
      break;
  }
  return s;
}

ScenarioSpec builtin_scenario(std::string_view name) { return builtin_scenario(parse_scenario_kind(name)); }

namespace {

json set_json(const ConditionSet& c) {
  json intf = json::array();
  for (const auto& i : c.interferers) intf.push_back(i ? json(to_string(*i)) : json(nullptr));
  return {{"snr_db", c.snr_db},
          {"sir_db", c.sir_db},
          {"interferers", intf},
          {"tx_profile", c.tx_profile},
          {"rx_profile", c.rx_profile}};
}

ConditionSet set_from_json(const json& j) {
  ConditionSet c;
  c.snr_db = j.at("snr_db").get<std::vector<double>>();
  c.sir_db = j.value("sir_db", std::vector<double>{});
  if (j.contains("interferers")) {
    c.interferers.clear();
    for (const auto& i : j["interferers"])
      c.interferers.push_back(i.is_null() ? std::nullopt
                                          : std::optional<ModulationScheme>(parse_scheme(i.get<std::string>())));
  }
  c.tx_profile = j.value("tx_profile", "LAB");
  c.rx_profile = j.value("rx_profile", "LAB");
  if (c.snr_db.empty()) throw ParameterError("condition set: snr grid must be non-empty");
  if (c.interferers.empty()) throw ParameterError("condition set: interferer list must be non-empty");
  for (const auto& i : c.interferers)
    if (i && c.sir_db.empty()) throw ParameterError("condition set: interferers require a non-empty SIR grid");
  return c;
}

json profile_json(const HardwareProfile& p) {
  return {{"cfo_std_hz", p.cfo_std_hz},
          {"dc_offset", {p.dc_offset.real(), p.dc_offset.imag()}},
          {"iq_gain_imbalance_db", p.iq_gain_imbalance_db},
          {"iq_phase_imbalance_deg", p.iq_phase_imbalance_deg},
          {"nonlinearity_backoff_db",
           p.nonlinearity_backoff_db ? json(*p.nonlinearity_backoff_db) : json(nullptr)},
          {"phase_noise_step_deg", p.phase_noise_step_deg},
          {"phase_noise_block", p.phase_noise_block}};
}

HardwareProfile profile_from_json(const std::string& name, const json& j) {
  HardwareProfile p;
  p.name = name;
  p.cfo_std_hz = j.value("cfo_std_hz", 0.0);
  if (j.contains("dc_offset")) {
    const auto v = j["dc_offset"].get<std::vector<double>>();
    if (v.size() != 2) throw ParameterError("profile " + name + ": dc_offset must be [re, im]");
    p.dc_offset = {v[0], v[1]};
  }
  p.iq_gain_imbalance_db = j.value("iq_gain_imbalance_db", 0.0);
  p.iq_phase_imbalance_deg = j.value("iq_phase_imbalance_deg", 0.0);
  if (j.contains("nonlinearity_backoff_db") && !j["nonlinearity_backoff_db"].is_null())
    p.nonlinearity_backoff_db = j["nonlinearity_backoff_db"].get<double>();
  p.phase_noise_step_deg = j.value("phase_noise_step_deg", 0.0);
  p.phase_noise_block = j.value("phase_noise_block", std::size_t{50});
  return p;
}

}  // namespace

std::string to_json(const ScenarioSpec& spec) {
  json j;
  j["name"] = to_string(spec.kind);
  j["segments_per_cell"] = spec.segments_per_cell;
  j["seed"] = spec.seed;
  j["sample_rate"] = spec.sample_rate;
  j["duration"] = spec.duration;
  j["channel"] = {{"residual_cfo_max_hz", spec.residual_cfo_max_hz},
                  {"interferer_cfo_ppm", spec.interferer_cfo_ppm},
                  {"carrier_hz", spec.carrier_hz},
                  {"interferer_profile", spec.interferer_profile}};
  json profiles = json::object();
  for (const auto& [name, p] : spec.profiles) profiles[name] = profile_json(p);
  j["profiles"] = profiles;
  j["split"] = {{"train_n", spec.train_n}, {"test_n", spec.test_n}, {"folds", spec.folds}};
  json exps = json::array();
  for (const auto& e : spec.experiments) {
    json x = {{"label", e.label},
              {"breakdown", to_string(e.breakdown)},
              {"train", set_json(e.train)},
              {"test", set_json(e.test)}};
    if (e.train_n) x["train_n"] = *e.train_n;
    if (e.test_n) x["test_n"] = *e.test_n;
    exps.push_back(x);
  }
  j["experiments"] = exps;
  return j.dump(2);
}

ScenarioSpec scenario_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ScenarioSpec s = builtin_scenario(j.at("name").get<std::string>());
    s.segments_per_cell = j.value("segments_per_cell", s.segments_per_cell);
    s.seed = j.value("seed", s.seed);
    s.sample_rate = j.value("sample_rate", s.sample_rate);
    s.duration = j.value("duration", s.duration);
    if (j.contains("channel")) {
      const auto& c = j["channel"];
      s.residual_cfo_max_hz = c.value("residual_cfo_max_hz", s.residual_cfo_max_hz);
      s.interferer_cfo_ppm = c.value("interferer_cfo_ppm", s.interferer_cfo_ppm);
      s.carrier_hz = c.value("carrier_hz", s.carrier_hz);
      s.interferer_profile = c.value("interferer_profile", s.interferer_profile);
    }
    if (j.contains("profiles"))
      for (const auto& [name, p] : j["profiles"].items()) s.profiles[name] = profile_from_json(name, p);
    if (j.contains("split")) {
      const auto& sp = j["split"];
      s.train_n = sp.value("train_n", s.train_n);
      s.test_n = sp.value("test_n", s.test_n);
      s.folds = sp.value("folds", s.folds);
    }
    if (j.contains("experiments")) {
      s.experiments.clear();
      for (const auto& x : j["experiments"]) {
        Experiment e;
        e.label = x.value("label", "experiment " + std::to_string(s.experiments.size()));
        e.breakdown = parse_axis(x.value("breakdown", "snr"));
        e.train = set_from_json(x.at("train"));
        e.test = x.contains("test") ? set_from_json(x["test"]) : e.train;
        if (x.contains("train_n")) e.train_n = x["train_n"].get<std::size_t>();
        if (x.contains("test_n")) e.test_n = x["test_n"].get<std::size_t>();
        s.experiments.push_back(std::move(e));
      }
    }
    if (s.experiments.empty()) throw ParameterError("scenario has no experiments");
    if (!(s.sample_rate > 0.0) || !(s.duration > 0.0)) throw ParameterError("sample_rate and duration must be positive");
    for (const auto& cell : s.cells()) {
      s.profile(cell.tx_profile);
      s.profile(cell.rx_profile);
    }
    s.profile(s.interferer_profile);
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("scenario: ") + e.what());
  }
}

ScenarioSpec load_scenario(const std::string& name_or_path) {
  try {
    return builtin_scenario(parse_scenario_kind(name_or_path));
  } catch (const ParameterError&) {
  }
  std::ifstream in(name_or_path);
  if (!in) {
    const bool looks_like_path = name_or_path.find('/') != std::string::npos ||
                                 std::filesystem::path(name_or_path).extension() == ".json";
    if (looks_like_path) throw IoError("cannot read scenario file " + name_or_path);
    throw ParameterError("'" + name_or_path + "' is neither a built-in scenario nor a readable file");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

ModulationScheme scheme_for(ClassLabel label, std::size_t index) {
  switch (label) {
    case ClassLabel::ScBpsk: return {Family::SC, Order::BPSK};
    case ClassLabel::ScQpsk: return {Family::SC, Order::QPSK};
    case ClassLabel::Sc16Qam: return {Family::SC, Order::QAM16};
    case ClassLabel::Sc64Qam: return {Family::SC, Order::QAM64};
    case ClassLabel::Ofdm: return {Family::OFDM, kAllOrders[index % kAllOrders.size()]};
  }
  return {};
}

std::uint64_t segment_seed(std::uint64_t spec_seed, const Condition& cell, ClassLabel label,
                           std::size_t index) {
  return derive_seed(spec_seed, {hash_string(cell.key()), class_index(label), index});
}

IqSegment simulate_segment(const ScenarioSpec& spec, const Condition& cell,
                           const ModulationScheme& scheme, std::uint64_t seed) {
  Rng rng(seed);
  const IqSegment signal = synthesize(scheme, spec.sample_rate, spec.duration, rng);
  ChannelConfig cfg;
  cfg.snr_db = cell.snr_db;
  cfg.tx_profile = spec.profile(cell.tx_profile);
  cfg.rx_profile = spec.profile(cell.rx_profile);
  cfg.residual_cfo_max_hz = spec.residual_cfo_max_hz;
  cfg.interferer_cfo_ppm = spec.interferer_cfo_ppm;
  cfg.carrier_hz = spec.carrier_hz;
  std::optional<IqSegment> interferer;
  if (cell.interferer && cell.sir_db) {
    cfg.sir_db = cell.sir_db;
    cfg.interferer = Interferer{*cell.interferer, spec.profile(spec.interferer_profile)};
    Rng irng(derive_seed(seed, {0x1f}));
    interferer = synthesize(*cell.interferer, spec.sample_rate, spec.duration, irng);
  }
  return apply_channel(signal, interferer, cfg, rng);
}

GeneratedDataset generate_scenario(const ScenarioSpec& spec, const GenerateOptions& options) {
  struct Job {
    const Condition* cell;
    ClassLabel label;
    std::size_t index;
  };
  const auto cells = spec.cells();
  std::vector<Job> jobs;
  for (const auto& cell : cells)
    for (ClassLabel label : kAllClasses)
      for (std::size_t i = 0; i < spec.segments_per_cell; ++i) jobs.push_back({&cell, label, i});

  GeneratedDataset out;
  if (jobs.empty()) {
    log::warn("generate_scenario: zero segments requested; dataset is empty");
    return out;
  }
  if (options.raw_iq_dir) std::filesystem::create_directories(*options.raw_iq_dir);

  out.records.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      try {
        const Job& job = jobs[j];
        const auto scheme = scheme_for(job.label, job.index);
        const auto seed = segment_seed(spec.seed, *job.cell, job.label, job.index);
        const IqSegment seg = simulate_segment(spec, *job.cell, scheme, seed);
        FeatureRecord& r = out.records[j];
        r.segment_id = j;
        r.scheme = scheme;
        r.snr_class_db = job.cell->snr_db;
        r.sir_class_db = job.cell->interferer ? job.cell->sir_db : std::nullopt;
        r.interferer = job.cell->interferer;
        r.tx_profile = job.cell->tx_profile;
        r.rx_profile = job.cell->rx_profile;
        r.seed = seed;
        r.features = featurize(seg, options.receiver);
        if (options.raw_iq_dir) {
          IqMetadata meta{r.segment_id, seg.sample_rate, r.scheme, r.seed, r.snr_class_db,
                          r.sir_class_db, r.interferer, r.tx_profile, r.rx_profile};
          char name[32];
          std::snprintf(name, sizeof name, "seg_%07zu", j);
          write_iq(*options.raw_iq_dir / name, seg, meta);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs.size());
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& r : out.records)
    if (r.features.cumulant_correction_skipped) out.correction_skipped.push_back(r.segment_id);
  return out;
}

void write_dataset(const std::filesystem::path& dir, const ScenarioSpec& spec, const GeneratedDataset& data) {
  std::filesystem::create_directories(dir);
  save_csv(data.records, dir / "features.csv");
  json manifest;
  manifest["scenario"] = json::parse(to_json(spec));
  manifest["records"] = data.records.size();
  manifest["cumulant_correction_skipped"] = data.correction_skipped;
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

}  // namespace amc
