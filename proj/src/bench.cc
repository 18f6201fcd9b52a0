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

#include "sensbench/bench.h"

#include <atomic>
#include <chrono>
#include <ctime>
#include <functional>
#include <map>
#include <thread>

#include "sensbench/error.h"
#include "sensbench/external_model.h"
#include "sensbench/file_util.h"
#include "sensbench/rank.h"
#include "sensbench/sensitivity.h"
#include "sensbench/windows.h"

#ifndef SENSBENCH_VERSION
#define SENSBENCH_VERSION "dev"
#endif

namespace sensbench {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Runs fn(0..n-1) on up to `jobs` threads. fn must not throw.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  if (workers <= 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
}

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error("cannot create output directory " + dir.string());
  }
}

void write_json(const fs::path& path, const json& doc) {
  write_file_atomic(path, doc.dump(2) + "\n");
}

SensitivityReport compute_cell(const MethodEntry& entry, const ForecastModel& model,
                               const WindowSet& windows, const FeatureStats& stats,
                               double output_scale) {
  switch (entry.method) {
    case Method::kMorris:
      return morris(model, windows, stats, entry.morris);
    case Method::kScaledMorris:
      return scaled_morris(morris(model, windows, stats, entry.morris), stats,
                           output_scale);
    case Method::kAblation:
      return ablation(model, windows, stats, entry.baseline);
    case Method::kOcclusion:
      return occlusion(model, windows, stats, entry.occlusion);
  }
  throw ConfigError("unknown method");
}

json versions() {
  return {{"sensbench", SENSBENCH_VERSION},
          {"compiler", __VERSION__},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace

std::size_t RunOutcome::failed() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.ok ? 0 : 1;
  return n;
}

Dataset load_dataset(const RunConfig& config) {
  Dataset ds;
  if (config.data.kind == DataSource::Kind::kSynth) {
    auto [panel, truth] = synth_generate(config.data.synth);
    ds.panel = std::make_shared<const Panel>(std::move(panel));
    ds.truth = std::move(truth);
  } else {
    ds.panel = std::make_shared<const Panel>(load_panel(config.data.csv_path, config.data.schema));
  }
  return ds;
}

void cmd_synth(const RunConfig& config, const fs::path& out) {
  if (config.data.kind != DataSource::Kind::kSynth) {
    throw ConfigError("synth needs [data] source = \"synth\"");
  }
  make_dirs(out);
  const auto [panel, truth] = synth_generate(config.data.synth);
  write_panel_csv(panel, out / "panel.csv");
  write_json(out / "truth.json", truth.to_json());
}

void cmd_train(const RunConfig& config, const fs::path& out, int jobs) {
  make_dirs(out / "models");
  const Dataset ds = load_dataset(config);
  const WindowSet windows = make_windows(ds.panel, config.lookback, config.horizon);
  std::vector<std::string> errors(config.models.size());
  parallel_for(config.models.size(), jobs, [&](std::size_t i) {
    const ModelEntry& entry = config.models[i];
    if (entry.kind == ModelKind::kExternal) return;
    try {
      const auto model = train(entry.kind, windows, entry.train);
      write_json(out / "models" / (entry.id + ".json"), model->to_json());
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      throw TrainingError("model '" + config.models[i].id + "': " + errors[i]);
    }
  }
}

RunOutcome cmd_run(const RunConfig& config, const fs::path& out, int jobs) {
  if (config.models.empty() || config.methods.empty()) {
    throw ConfigError("a run needs at least one model and one method");
  }
  const std::string started_at = utc_now();
  const auto run_start = Clock::now();
  make_dirs(out / "reports");
  make_dirs(out / "models");
  for (const auto& entry : fs::directory_iterator(out / "reports")) {
    if (entry.path().extension() == ".json") fs::remove(entry.path());
  }

  const Dataset ds = load_dataset(config);
  const WindowSet windows = make_windows(ds.panel, config.lookback, config.horizon);
  const FeatureStats stats = feature_stats(*ds.panel);
  const double output_scale = target_std(windows);
  if (ds.truth) write_json(out / "truth.json", ds.truth->to_json());
  const ModelSpec spec{config.lookback, config.horizon, ds.panel->num_features()};

  struct Prepared {
    std::shared_ptr<const ForecastModel> model;
    std::string error;
    json info;
  };
  std::vector<Prepared> prepared(config.models.size());
  parallel_for(config.models.size(), jobs, [&](std::size_t i) {
    const ModelEntry& entry = config.models[i];
    Prepared& p = prepared[i];
    p.info = {{"id", entry.id}, {"kind", model_kind_name(entry.kind)}};
    const auto start = Clock::now();
    try {
      if (entry.kind == ModelKind::kExternal) {
        connect_external(entry.external, spec)->shutdown();
        p.info["handshake"] = "ok";
      } else {
        std::shared_ptr<const ForecastModel> model = train(entry.kind, windows, entry.train);
        write_json(out / "models" / (entry.id + ".json"), model->to_json());
        p.info["train_mse"] = mean_squared_error(*model, windows);
        p.model = std::move(model);
      }
    } catch (const std::exception& e) {
      p.error = e.what();
      p.info["error"] = p.error;
    }
    p.info["elapsed_ms"] = millis_since(start);
  });

  // Cells sharing one external adapter form a single sequential lane.
  const std::size_t n_methods = config.methods.size();
  RunOutcome outcome;
  outcome.cells.resize(config.models.size() * n_methods);
  std::vector<std::vector<std::size_t>> lanes;
  for (std::size_t m = 0; m < config.models.size(); ++m) {
    if (config.models[m].kind == ModelKind::kExternal) lanes.emplace_back();
    for (std::size_t j = 0; j < n_methods; ++j) {
      const std::size_t cell = m * n_methods + j;
      outcome.cells[cell].model = config.models[m].id;
      outcome.cells[cell].method = method_name(config.methods[j].method);
      if (config.models[m].kind == ModelKind::kExternal) {
        lanes.back().push_back(cell);
      } else {
        lanes.push_back({cell});
      }
    }
  }

  auto run_cell = [&](std::size_t cell) {
    const std::size_t m = cell / n_methods;
    const ModelEntry& entry = config.models[m];
    const MethodEntry& method = config.methods[cell % n_methods];
    CellResult& result = outcome.cells[cell];
    const auto start = Clock::now();
    try {
      if (!prepared[m].error.empty()) {
        throw Error("model unavailable: " + prepared[m].error);
      }
      std::shared_ptr<const ForecastModel> model = prepared[m].model;
      std::shared_ptr<ExternalModel> adapter;
      if (entry.kind == ModelKind::kExternal) {
        adapter = connect_external(entry.external, spec);
        model = adapter;
      }
      SensitivityReport report = compute_cell(method, *model, windows, stats, output_scale);
      if (adapter) adapter->shutdown();
      report.model_id = entry.id;
      write_json(out / "reports" / (result.model + "." + result.method + ".json"),
                 report.to_json());
      result.ok = true;
    } catch (const std::exception& e) {
      result.ok = false;
      result.error = e.what();
    }
    result.elapsed_ms = millis_since(start);
  };
  parallel_for(lanes.size(), jobs, [&](std::size_t l) {
    for (std::size_t cell : lanes[l]) run_cell(cell);
  });

  json models_json = json::array();
  for (const auto& p : prepared) models_json.push_back(p.info);
  json cells_json = json::array();
  for (const auto& c : outcome.cells) {
    json j = {{"model", c.model},
              {"method", c.method},
              {"status", c.ok ? "ok" : "failed"},
              {"elapsed_ms", c.elapsed_ms}};
    if (c.ok) {
      j["report"] = "reports/" + c.model + "." + c.method + ".json";
    } else {
      j["error"] = c.error;
    }
    cells_json.push_back(std::move(j));
  }
  const json manifest = {
      {"config_hash", config.hash()},
      {"config", config.canonical()},
      {"versions", versions()},
      {"started_at", started_at},
      {"finished_at", utc_now()},
      {"elapsed_ms", millis_since(run_start)},
      {"jobs", jobs},
      {"dataset",
       {{"entities", ds.panel->num_entities()},
        {"days", ds.panel->num_times()},
        {"features", ds.panel->features},
        {"windows", windows.size()},
        {"target_std", output_scale}}},
      {"models", models_json},
      {"cells", cells_json},
      {"failed_cells", outcome.failed()},
      {"exit_code", outcome.exit_code()}};
  write_json(out / "manifest.json", manifest);
  return outcome;
}

ReportSummary cmd_report(const fs::path& run_dir,
                         const std::optional<fs::path>& truth_path,
                         bool invert_truth) {
  const fs::path reports_dir = run_dir / "reports";
  if (!fs::is_directory(reports_dir)) {
    throw ReportError("no reports directory in " + run_dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(reports_dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<SensitivityReport> reports;
  for (const auto& file : files) {
    try {
      reports.push_back(SensitivityReport::from_json(json::parse(read_file(file))));
    } catch (const std::exception& e) {
      throw ReportError("cannot read " + file.string() + ": " + e.what());
    }
  }
  if (reports.size() < 2) {
    throw ReportError("need at least 2 reports to compare, found " +
                      std::to_string(reports.size()));
  }
  for (const auto& r : reports) {
    if (r.features != reports.front().features) {
      throw ReportError("report " + r.model_id + "." + method_name(r.method) +
                        " has a different feature list than " +
                        reports.front().model_id + "." +
                        method_name(reports.front().method));
    }
  }

  const fs::path matrices = run_dir / "matrices";
  make_dirs(matrices);
  ReportSummary summary;
  auto emit = [&](const std::string& stem, const std::vector<SensitivityReport>& group) {
    const CorrelationMatrix cm = agreement_matrix(group);
    write_file_atomic(matrices / (stem + ".csv"), cm.to_csv());
    write_json(matrices / (stem + ".json"), cm.to_json());
    summary.written.push_back("matrices/" + stem + ".csv");
    summary.written.push_back("matrices/" + stem + ".json");
  };

  std::map<std::string, std::vector<SensitivityReport>> by_model, by_method;
  for (const auto& r : reports) {
    by_model[r.model_id].push_back(r);
    by_method[method_name(r.method)].push_back(r);
  }
  for (const auto& [model, group] : by_model) {
    if (group.size() >= 2) emit("methods." + model, group);
  }
  for (const auto& [method, group] : by_method) {
    if (group.size() >= 2) emit("models." + method, group);
  }
  emit("all", reports);

  if (truth_path) {
    const GroundTruthRanking truth = load_truth(*truth_path, invert_truth);
    if (truth.features != reports.front().features) {
      throw ReportError("truth features do not match the report features");
    }
    std::string csv = "model,method,rho\n";
    json rows = json::array();
    for (const auto& r : reports) {
      json row = {{"model", r.model_id}, {"method", method_name(r.method)}};
      double rho;
      try {
        rho = accuracy(r, truth);
        row["rho"] = rho;
      } catch (const InputError& e) {
        rho = std::nan("");
        row["rho"] = nullptr;
        row["error"] = e.what();
      }
      csv += r.model_id + "," + method_name(r.method) + "," + format_double(rho) + "\n";
      summary.accuracy_rows.push_back(r.model_id + "." + method_name(r.method) + " " +
                                      format_double(rho));
      rows.push_back(std::move(row));
    }
    write_file_atomic(matrices / "accuracy.csv", csv);
    write_json(matrices / "accuracy.json", {{"truth", truth.to_json()}, {"rows", rows}});
    summary.written.push_back("matrices/accuracy.csv");
    summary.written.push_back("matrices/accuracy.json");
  }
  return summary;
}

}  // namespace sensbench
