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


#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "stochsense/cli/runner.hpp"

int main(int argc, char** argv) {
  namespace sc = stochsense::cli;
  CLI::App app{"stochsense: sensing stochastic signals with entangled and product probes"};
  app.set_version_flag("--version", std::string(sc::kVersion));
  app.require_subcommand(1);

  sc::RunOptions run;
  std::uint64_t seed = 0;
  std::string out_dir;
  int threads = 1;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment and write its output directory");
  run_cmd->add_option("--config", run.config, "Path to a JSON config")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the master seed");
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output root (default from config, else runs/)");
  auto* threads_opt = run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  std::string validate_path;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a config without running it");
  validate_cmd->add_option("--config", validate_path, "Path to a JSON config")->required();

  CLI::App* list_cmd = app.add_subcommand("list-tasks", "List tasks and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sc::kExitConfig;
  }

  if (*run_cmd) {
    if (*seed_opt) run.seed = seed;
    if (*out_opt) run.out_dir = out_dir;
    if (*threads_opt) run.threads = threads;
    return sc::run_command(run, std::cout, std::cerr);
  }
  if (*validate_cmd) return sc::validate_command(validate_path, std::cout, std::cerr);
  if (*list_cmd) sc::list_tasks(std::cout);
  return sc::kExitOk;
}
