#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "amc/dataset.hpp"
#include "amc/report.hpp"
#include "amc/scenario.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "amc_cli";

int run(const std::string& args) {
  const std::string cmd = std::string(AMC_CLI_PATH) + " " + args + " >" + (kWork / "stdout.txt").string() + " 2>" +
                          (kWork / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path tiny_scenario() {
  auto spec = amc::builtin_scenario(amc::ScenarioKind::Baseline);
  spec.segments_per_cell = 8;
  spec.duration = 1e-4;
  spec.experiments[0].train.snr_db = {10, 20};
  spec.experiments[0].test.snr_db = {10, 20};
  const auto path = kWork / "tiny.json";
  std::ofstream(path) << amc::to_json(spec);
  return path;
}

struct Workdir {
  Workdir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Workdir, "usage errors exit with 1") {
  CHECK(run("") == 1);
  CHECK(run("bogus") == 1);
  CHECK(run("generate --out x") == 1);
  CHECK(run("report --in x --format yaml") == 1);
  CHECK(run("--help") == 0);
}

TEST_CASE_FIXTURE(Workdir, "data errors exit with 2") {
  CHECK(run("train --data " + (kWork / "absent.csv").string() + " --model m.json") == 2);
  std::ofstream(kWork / "bad.csv") << "not,a,feature,file\n";
  CHECK(run("train --data " + (kWork / "bad.csv").string() + " --model m.json") == 2);
  CHECK(run("report --in " + (kWork / "nowhere").string()) == 2);
  CHECK(run("generate --scenario " + (kWork / "absent.json").string() + " --out o --seed 1") == 2);
}

TEST_CASE_FIXTURE(Workdir, "generate, train, evaluate and report") {
  const auto scen = tiny_scenario().string();
  const auto data = kWork / "data";
  REQUIRE(run("generate --scenario " + scen + " --out " + data.string() + " --seed 3 --raw-iq") == 0);
  const auto records = amc::load_csv(data / "features.csv");
  CHECK(records.size() == 5 * 2 * 8);

  // featurize over the raw IQ reproduces the generated features.
  REQUIRE(run("featurize --iq " + (data / "iq").string() + " --out " + (kWork / "refeat.csv").string()) == 0);
  const auto refeat = amc::load_csv(kWork / "refeat.csv");
  REQUIRE(refeat.size() == records.size());
  for (std::size_t i = 0; i < refeat.size(); ++i) {
    CHECK(refeat[i].scheme == records[i].scheme);
    for (std::size_t k = 0; k < amc::kNumFeatures; ++k)
      CHECK(refeat[i].features.to_array()[k] == doctest::Approx(records[i].features.to_array()[k]).epsilon(1e-3));
  }

  REQUIRE(run("train --data " + (data / "features.csv").string() + " --filter snr=20 --model " +
              (kWork / "model.json").string()) == 0);
  CHECK(fs::exists(kWork / "model.json"));
  CHECK(run("train --data " + (data / "features.csv").string() + " --filter snr=7 --model " +
            (kWork / "none.json").string()) == 2);

  const auto rep = kWork / "rep";
  REQUIRE(run("evaluate --scenario " + scen + " --folds 3 --train-n 40 --test-n 30 --seed 3 --report " + rep.string()) == 0);
  const auto loaded = amc::load_report(rep);
  REQUIRE(loaded.experiments.size() == 1);
  CHECK(loaded.experiments[0].folds == 3);
  CHECK(loaded.experiments[0].train_n == 40);

  CHECK(run("report --in " + rep.string() + " --format json") == 0);
  CHECK(slurp(kWork / "stdout.txt") == slurp(rep / "report.json"));
  CHECK(run("report --in " + rep.string() + " --format table") == 0);
  CHECK(slurp(kWork / "stdout.txt").find("Avg.") != std::string::npos);
  CHECK(run("report --in " + rep.string() + " --format csv") == 0);
  CHECK(slurp(kWork / "stdout.txt").rfind("experiment,", 0) == 0);

  CHECK(run("evaluate --scenario " + scen + " --folds 2 --train-n 70 --test-n 30 --report " + (kWork / "r2").string()) == 1);
}
