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

#ifndef SENSBENCH_RUN_CONFIG_H_
#define SENSBENCH_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sensbench/external_model.h"
#include "sensbench/forecast_model.h"
#include "sensbench/panel.h"
#include "sensbench/sensitivity.h"
#include "sensbench/synth.h"

namespace sensbench {

struct DataSource {
  enum class Kind { kSynth, kCsv };
  Kind kind = Kind::kSynth;
  SynthConfig synth;
  std::filesystem::path csv_path;
  PanelSchema schema;
};

struct ModelEntry {
  std::string id;
  ModelKind kind = ModelKind::kLinearDecomp;
  TrainConfig train;          // built-in kinds
  ExternalOptions external;   // external kind
};

struct MethodEntry {
  Method method = Method::kMorris;
  MorrisConfig morris;        // morris, scaled-morris
  BaselinePolicy baseline;    // ablation
  OcclusionConfig occlusion;  // occlusion
};

// One benchmark run: dataset, window geometry, model roster and method
// roster. Seeds not given per component inherit the global seed.
struct RunConfig {
  DataSource data;
  std::size_t lookback = 13;
  std::size_t horizon = 15;
  std::vector<ModelEntry> models;
  std::vector<MethodEntry> methods;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;

  // Fully resolved config (defaults and inherited seeds filled in). The
  // output directory is not part of it.
  nlohmann::json canonical() const;
  // SHA-256 (hex) of canonical().dump().
  std::string hash() const;
};

// Maps a parsed config document onto RunConfig. Relative paths resolve
// against `base_dir`. Unknown keys are rejected. Throws ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc,
                           const std::filesystem::path& base_dir,
                           std::optional<std::uint64_t> seed_override = {});

RunConfig load_run_config(const std::filesystem::path& path,
                          std::optional<std::uint64_t> seed_override = {});

}  // namespace sensbench

#endif  // SENSBENCH_RUN_CONFIG_H_
