/*
 * Copyright 2026 The Sensbench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// sensbench: perturbation sensitivity benchmark for time-series forecasters.
//
//   sensbench synth  --config run.toml --out data/
//   sensbench train  --config run.toml --out run/
//   sensbench run    --config run.toml --out run/ [--jobs 4] [--seed 7]
//   sensbench report run/ [--truth run/truth.json]
//
// Exit codes: 0 success, 2 partial cell failure, 1 fatal error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sensbench/bench.h"
#include "sensbench/error.h"
#include "sensbench/run_config.h"

namespace {

namespace fs = std::filesystem;

fs::path pick_out(const sensbench::RunConfig& config, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (!config.out_dir.empty()) return config.out_dir;
  throw sensbench::ConfigError("no output directory: pass --out or set 'out' in the config");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbation-based sensitivity benchmark for time-series forecasters"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string truth_path;
  std::string run_dir;
  bool invert_truth = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run config (TOML)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--seed", seed, "Override the global seed");
  };
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic panel CSV and its ground truth");
  add_common(synth);
  CLI::App* train = app.add_subcommand("train", "Train the built-in models and save them");
  add_common(train);
  train->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
  CLI::App* run = app.add_subcommand("run", "Execute the model x method grid");
  add_common(run);
  run->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
  CLI::App* report = app.add_subcommand("report", "Spearman agreement and accuracy tables");
  report->add_option("run_dir", run_dir, "Run directory");
  report->add_option("--out", out_dir, "Run directory (alternative to the positional)");
  report->add_option("--truth", truth_path, "Ground-truth ranking JSON")->check(CLI::ExistingFile);
  report->add_flag("--invert-truth", invert_truth, "Treat lower truth scores as more important");

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      const fs::path dir = !run_dir.empty() ? fs::path(run_dir) : fs::path(out_dir);
      if (dir.empty()) throw sensbench::ConfigError("report needs a run directory");
      std::optional<fs::path> truth;
      if (!truth_path.empty()) truth = truth_path;
      const auto summary = sensbench::cmd_report(dir, truth, invert_truth);
      for (const auto& path : summary.written) std::cout << "wrote " << path << "\n";
      for (const auto& row : summary.accuracy_rows) std::cout << "accuracy " << row << "\n";
      return 0;
    }

    const auto config = sensbench::load_run_config(config_path, seed);
    if (synth->parsed()) {
      const fs::path out = pick_out(config, out_dir);
      sensbench::cmd_synth(config, out);
      std::cout << "wrote " << (out / "panel.csv").string() << " and "
                << (out / "truth.json").string() << "\n";
      return 0;
    }
    if (train->parsed()) {
      const fs::path out = pick_out(config, out_dir);
      sensbench::cmd_train(config, out, jobs);
      std::cout << "wrote models to " << (out / "models").string() << "\n";
      return 0;
    }
    const fs::path out = pick_out(config, out_dir);
    const auto outcome = sensbench::cmd_run(config, out, jobs);
    for (const auto& cell : outcome.cells) {
      std::cout << (cell.ok ? "ok     " : "FAILED ") << cell.model << "." << cell.method;
      if (!cell.ok) std::cout << ": " << cell.error;
      std::cout << "\n";
    }
    std::cout << outcome.cells.size() - outcome.failed() << "/" << outcome.cells.size()
              << " cells succeeded; manifest at " << (out / "manifest.json").string() << "\n";
    return outcome.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "sensbench: " << e.what() << "\n";
    return 1;
  }
}
