// Copyright 2026 The stochsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "stochsense/cli/runner.hpp"

using namespace stochsense;
using namespace stochsense::cli;
namespace fs = std::filesystem;

namespace {

Diagnostics diagnostics_of(const Json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.diagnostics();
  }
  return {};
}

bool has_path(const Diagnostics& d, const std::string& path) {
  for (const auto& item : d.items)
    if (item.path == path) return true;
  return false;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("stochsense_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Json small_bell() {
  return Json::parse(R"({"task": "bell-gaussian", "seed": 7,
    "params": {"shots": [1, 4, 16], "report_shots": 16, "trials": 200}})");
}

}  // namespace

TEST(Config, DefaultsParse) {
  for (const auto& t : task_catalog()) {
    const ExperimentConfig cfg = parse_config(Json{{"task", t.name}});
    EXPECT_EQ(cfg.task, t.name);
    EXPECT_EQ(cfg.seed, 1u);
  }
}

TEST(Config, ShippedConfigsValidate) {
  const fs::path dir = fs::path(STOCHSENSE_SOURCE_DIR) / "configs";
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    std::ostringstream out, err;
    EXPECT_EQ(validate_command(entry.path(), out, err), kExitOk) << entry.path() << ": " << err.str();
  }
  EXPECT_GE(seen, 7);
}

TEST(Config, UnknownTaskListsValidTags) {
  const Diagnostics d = diagnostics_of(Json{{"task", "nope"}});
  ASSERT_EQ(d.items.size(), 1u);
  EXPECT_EQ(d.items[0].path, "task");
  for (const auto& t : task_catalog()) EXPECT_NE(d.items[0].message.find(t.name), std::string::npos);
}

TEST(Config, ErrorsCarryFieldPaths) {
  const Diagnostics d = diagnostics_of(Json::parse(R"({"task": "ghz-classify", "colour": 1,
    "params": {"C": "big", "averaging": {"method": "guess"}, "n_qubits": [2, 0]}})"));
  EXPECT_TRUE(d.has_schema_error());
  EXPECT_TRUE(has_path(d, "colour"));
  EXPECT_TRUE(has_path(d, "params.C"));
  EXPECT_TRUE(has_path(d, "params.averaging.method"));
  EXPECT_TRUE(has_path(d, "params.n_qubits[1]"));
}

TEST(Config, NonPsdCovarianceIsReported) {
  const Diagnostics d = diagnostics_of(
      Json::parse(R"({"task": "bell-gaussian", "params": {"sigma": 1.0, "sigma_corr2": 1.5}})"));
  ASSERT_TRUE(has_path(d, "params.sigma_corr2"));
  EXPECT_TRUE(d.has_schema_error());
}

TEST(Config, ResourceCapIsSeparateFromSchema) {
  const Diagnostics d =
      diagnostics_of(Json::parse(R"({"task": "ghz-classify", "params": {"n_qubits": [2, 40]}})"));
  ASSERT_FALSE(d.empty());
  EXPECT_FALSE(d.has_schema_error());
  const fs::path dir = scratch("cap");
  std::ofstream(dir / "cap.json") << R"({"task": "ghz-classify", "params": {"n_qubits": [2, 40]}})";
  std::ostringstream out, err;
  EXPECT_EQ(validate_command(dir / "cap.json", out, err), kExitResource);
}

TEST(Config, MalformedJsonIsConfigError) {
  const fs::path dir = scratch("bad");
  std::ofstream(dir / "bad.json") << "{ \"task\": ";
  std::ostringstream out, err;
  EXPECT_EQ(validate_command(dir / "bad.json", out, err), kExitConfig);
  EXPECT_EQ(validate_command(dir / "missing.json", out, err), kExitConfig);
  std::ofstream(dir / "array.json") << "[1, 2]";
  EXPECT_EQ(validate_command(dir / "array.json", out, err), kExitConfig);
}

TEST(Config, HashCoversResultsOnly) {
  Json doc = small_bell();
  const std::string h = config_hash(parse_config(doc));
  EXPECT_EQ(h.size(), 12u);
  doc["threads"] = 3;
  doc["output"] = {{"dir", "elsewhere"}};
  EXPECT_EQ(config_hash(parse_config(doc)), h);
  EXPECT_NE(config_hash(parse_config(doc, 8)), h);
  doc["params"]["C"] = -0.2;
  EXPECT_NE(config_hash(parse_config(doc)), h);
}

TEST(Config, SeedOverrideMatchesConfigSeed) {
  Json doc = small_bell();
  const std::string via_override = config_hash(parse_config(doc, 99));
  doc["seed"] = 99;
  EXPECT_EQ(config_hash(parse_config(doc)), via_override);
}

TEST(Runner, WritesLayoutAndManifest) {
  ExperimentConfig cfg = parse_config(small_bell());
  cfg.out_dir = scratch("layout").string();
  const RunRecord rec = run_experiment(cfg);
  EXPECT_EQ(rec.directory.filename().string(), "bell-gaussian_" + config_hash(cfg));
  for (const char* f : {"results.csv", "summary.json", "manifest.json", "accuracy.svg"})
    EXPECT_TRUE(fs::exists(rec.directory / f)) << f;
  const std::string csv = slurp(rec.directory / "results.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "protocol,shots_count,accuracy_frac,std_err_frac,trials_count");
  const Json manifest = Json::parse(slurp(rec.directory / "manifest.json"));
  EXPECT_EQ(manifest["config_hash"], config_hash(cfg));
  EXPECT_EQ(manifest["seed"], 7);
  bool listed = false;
  for (const auto& o : manifest["outputs"])
    if (o["file"] == "results.csv") {
      listed = true;
      EXPECT_EQ(o["bytes"].get<std::size_t>(), csv.size());
      EXPECT_EQ(o["fnv1a64"], hex64(fnv1a64(csv)));
    }
  EXPECT_TRUE(listed);
  const Json summary = Json::parse(slurp(rec.directory / "summary.json"));
  EXPECT_TRUE(summary["entangled"]["at_report_shots"].contains("accuracy"));
}

TEST(Runner, IdenticalRunsAreByteIdentical) {
  ExperimentConfig cfg = parse_config(small_bell());
  cfg.out_dir = scratch("repeat_a").string();
  const std::string a = slurp(run_experiment(cfg).directory / "results.csv");
  cfg.out_dir = scratch("repeat_b").string();
  const std::string b = slurp(run_experiment(cfg).directory / "results.csv");
  EXPECT_EQ(a, b);
  cfg.threads = 3;
  cfg.out_dir = scratch("repeat_c").string();
  EXPECT_EQ(slurp(run_experiment(cfg).directory / "results.csv"), a);
}

TEST(Runner, RunCommandExitCodes) {
  const fs::path dir = scratch("exit");
  std::ofstream(dir / "ok.json") << small_bell().dump();
  std::ofstream(dir / "bad.json") << R"({"task": "bell-gaussian", "params": {"trials": 5}})";
  std::ostringstream out, err;
  RunOptions opt{dir / "ok.json", 11, (dir / "runs").string(), 1};
  EXPECT_EQ(run_command(opt, out, err), kExitOk) << err.str();
  EXPECT_TRUE(fs::exists(fs::path(out.str().substr(0, out.str().size() - 1)) / "results.csv"));
  opt.config = dir / "bad.json";
  EXPECT_EQ(run_command(opt, out, err), kExitConfig);
}

TEST(Runner, NonConvergenceMapsToExitFour) {
  const fs::path dir = scratch("nonconv");
  std::ofstream(dir / "nc.json") << R"({"task": "ghz-classify", "params": {"n_qubits": [2], "shots": [1],
    "trials": 100, "averaging": {"method": "monte_carlo", "convergence_ratio": 1e15,
    "batch_size": 10, "max_batches": 3}}})";
  std::ostringstream out, err;
  EXPECT_EQ(run_command({dir / "nc.json", {}, (dir / "runs").string(), {}}, out, err),
            kExitNonConvergence);
}

TEST(Runner, EveryTaskRunsSmall) {
  const fs::path dir = scratch("tasks");
  const char* docs[] = {
      R"({"task": "ghz-classify", "params": {"n_qubits": [2, 3], "shots": [1, 8, 64], "trials": 100}})",
      R"({"task": "ghz-estimate", "params": {"n_qubits": [2], "shots": [64, 1024], "trials": 100,
          "train_c": {"min": -0.1, "max": 0.1, "points": 5}, "test_c": {"min": -0.05, "max": 0.05, "points": 3}}})",
      R"({"task": "xxz", "params": {"n_qubits": [2], "temperatures": [1.0], "train_samples": 50,
          "test_samples": 50, "chains": 2, "metropolis": {"tau_therm": 200, "tau_sweep": 10},
          "shots": [1, 16], "trials": 100, "conservation_steps": 2000}})",
      R"({"task": "featmat", "params": {"n_qubits": [2, 3], "product_max_qubits": 2}})",
      R"({"task": "quadratic", "params": {"n_var": [2, 4], "samples": 3}})",
      R"({"task": "multicopy", "params": {"phi_points": 4}})",
  };
  for (const char* d : docs) {
    ExperimentConfig cfg = parse_config(Json::parse(d));
    cfg.out_dir = dir.string();
    const RunRecord rec = run_experiment(cfg);
    EXPECT_TRUE(fs::exists(rec.directory / "results.csv")) << cfg.task;
    EXPECT_GT(fs::file_size(rec.directory / "results.csv"), 20u) << cfg.task;
  }
}

TEST(Report, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.95}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Report, SvgIsWellFormedEnough) {
  std::ostringstream os;
  write_svg(os, Chart{"t", "x", "y", true, true, {Series{"s", {1, 10, 100}, {1, 2, std::nan("")}}}});
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("<svg", 0), 0u);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
  EXPECT_NE(s.find("polyline"), std::string::npos);
}

TEST(Catalog, ListsEveryTask) {
  std::ostringstream os;
  list_tasks(os);
  for (const char* t : {"bell-gaussian", "ghz-classify", "ghz-estimate", "xxz", "featmat", "quadratic",
                        "multicopy"})
    EXPECT_NE(os.str().find(t), std::string::npos) << t;
}
