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


#pragma once

// File layout, manifest and exit-code mapping for `stochsense run`,
// `stochsense validate` and `stochsense list-tasks`.

#include <Eigen/Core>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "stochsense/cli/config.hpp"
#include "stochsense/cli/report.hpp"
#include "stochsense/cli/tasks.hpp"
#include "stochsense/common.hpp"

namespace stochsense::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitResource = 3,
  kExitNonConvergence = 4,
};

/// Parses a JSON file. I/O and syntax problems are reported as ConfigError.
inline Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Diagnostics d;
    d.schema("", "cannot open config file '" + path.string() + "'");
    throw ConfigError(d);
  }
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    Diagnostics d;
    d.schema("", std::string("invalid JSON: ") + e.what());
    throw ConfigError(d);
  }
}

struct WrittenFile {
  std::string name;
  std::size_t bytes = 0;
  std::uint64_t fnv = 0;
};

struct RunRecord {
  std::filesystem::path directory;
  std::vector<WrittenFile> files;
  Json summary;
};

namespace runner_detail {

inline WrittenFile write_file(const std::filesystem::path& dir, const std::string& name,
                              const std::string& bytes) {
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return {name, bytes.size(), fnv1a64(bytes)};
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string compiler_id() {
#if defined(__clang__)
  return "clang " __clang_version__;
#elif defined(__GNUC__)
  return "gcc " __VERSION__;
#else
  return "unknown";
#endif
}

}  // namespace runner_detail

/// Runs one experiment and writes `<out_dir>/<task>_<hash>/`.
inline RunRecord run_experiment(const ExperimentConfig& cfg) {
  using namespace runner_detail;
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  TaskOutput out = execute_task(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunRecord rec;
  rec.directory = std::filesystem::path(cfg.out_dir) / (cfg.task + "_" + config_hash(cfg));
  std::filesystem::create_directories(rec.directory);
  rec.files.push_back(write_file(rec.directory, "results.csv", out.results.csv()));
  for (const auto& [name, table] : out.extra_tables)
    rec.files.push_back(write_file(rec.directory, name, table.csv()));
  if (cfg.svg) {
    for (const auto& [name, chart] : out.charts) {
      std::ostringstream os;
      write_svg(os, chart);
      rec.files.push_back(write_file(rec.directory, name, os.str()));
    }
  }
  out.summary["seed"] = cfg.seed;
  out.summary["config_hash"] = config_hash(cfg);
  rec.files.push_back(write_file(rec.directory, "summary.json", out.summary.dump(2) + "\n"));

  Json outputs = Json::array();
  for (const auto& f : rec.files)
    outputs.push_back({{"file", f.name}, {"bytes", f.bytes}, {"fnv1a64", hex64(f.fnv)}});
  const Json manifest = {
      {"task", cfg.task},
      {"config_hash", config_hash(cfg)},
      {"seed", cfg.seed},
      {"threads", cfg.threads},
      {"config", cfg.canonical},
      {"versions",
       {{"stochsense", kVersion},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"compiler", compiler_id()}}},
      {"started_utc", started},
      {"wall_time_s", wall},
      {"outputs", outputs},
  };
  rec.files.push_back(write_file(rec.directory, "manifest.json", manifest.dump(2) + "\n"));
  rec.summary = std::move(out.summary);
  return rec;
}

/// Maps the in-flight exception to an exit code and prints it to `err`.
inline int report_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    err << e.what();
    return e.diagnostics().has_schema_error() ? kExitConfig : kExitResource;
  } catch (const ResourceCapError& e) {
    err << "resource cap: " << e.what() << '\n';
    return kExitResource;
  } catch (const NonConvergenceError& e) {
    err << "non-convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

inline int run_command(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig cfg = parse_config(load_json_file(opt.config), opt.seed, opt.threads);
    if (opt.out_dir) cfg.out_dir = *opt.out_dir;
    const RunRecord rec = run_experiment(cfg);
    out << rec.directory.string() << '\n';
    return kExitOk;
  } catch (...) {
    return report_exception(err);
  }
}

inline int validate_command(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig cfg = parse_config(load_json_file(config));
    out << "ok: task " << cfg.task << ", hash " << config_hash(cfg) << '\n';
    return kExitOk;
  } catch (...) {
    return report_exception(err);
  }
}

inline void list_tasks(std::ostream& out) {
  for (const auto& t : task_catalog()) {
    out << t.name << "\n  " << t.summary << '\n';
    for (const auto& p : t.params) out << "    " << p << '\n';
  }
}

}  // namespace stochsense::cli
