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

#ifndef SENSBENCH_BENCH_H_
#define SENSBENCH_BENCH_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sensbench/panel.h"
#include "sensbench/run_config.h"
#include "sensbench/synth.h"

namespace sensbench {

struct Dataset {
  std::shared_ptr<const Panel> panel;
  std::optional<GroundTruthRanking> truth;  // synthetic sources only
};

// Generates or loads the configured panel.
Dataset load_dataset(const RunConfig& config);

// Writes <out>/panel.csv and <out>/truth.json. Requires a synthetic source.
void cmd_synth(const RunConfig& config, const std::filesystem::path& out);

// Trains every built-in model and writes <out>/models/<id>.json.
void cmd_train(const RunConfig& config, const std::filesystem::path& out,
               int jobs = 1);

struct CellResult {
  std::string model;
  std::string method;
  bool ok = false;
  std::string error;
  double elapsed_ms = 0.0;
};

struct RunOutcome {
  std::vector<CellResult> cells;
  std::size_t failed() const;
  // 0 when every cell succeeded, 2 on partial failure.
  int exit_code() const { return failed() == 0 ? 0 : 2; }
};

// Executes the (model x method) grid. Writes reports/<model>.<method>.json
// per successful cell, models/<id>.json per trained model, truth.json for
// synthetic data, and manifest.json. Cell failures are captured, not thrown;
// configuration, data and I/O errors are.
RunOutcome cmd_run(const RunConfig& config, const std::filesystem::path& out,
                   int jobs = 1);

struct ReportSummary {
  std::vector<std::string> written;  // paths relative to the run directory
  std::vector<std::string> accuracy_rows;  // "model.method rho"
};

// Reads reports/*.json from a run directory and writes matrices/:
//   methods.<model>.{csv,json}  cross-method Spearman per model
//   models.<method>.{csv,json}  cross-model Spearman per method
//   all.{csv,json}              every report against every other
//   accuracy.{csv,json}         Spearman vs ground truth (with a truth file)
// Throws ReportError with fewer than 2 reports or mismatched feature lists.
ReportSummary cmd_report(const std::filesystem::path& run_dir,
                         const std::optional<std::filesystem::path>& truth,
                         bool invert_truth = false);

}  // namespace sensbench

#endif  // SENSBENCH_BENCH_H_
