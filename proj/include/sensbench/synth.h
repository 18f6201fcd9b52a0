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

#ifndef SENSBENCH_SYNTH_H_
#define SENSBENCH_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sensbench/panel.h"
#include "sensbench/rank.h"

namespace sensbench {

struct GroundTruthRanking {
  enum class Source { kPlantedWeights, kExternalFile };

  std::vector<std::string> features;
  RankVector ranks;
  Source source = Source::kPlantedWeights;

  // {"features": [...], "ranks": [...]}
  nlohmann::json to_json() const;
};

// Reads a truth file. Accepts either "ranks" (1 = most important) or raw
// "scores" (e.g. per-group case counts; larger = more important). `invert`
// flips the orientation (rank r becomes k + 1 - r).
GroundTruthRanking load_truth(const std::filesystem::path& path,
                              bool invert = false);

struct SynthConfig {
  std::size_t entities = 50;
  std::size_t days = 120;
  std::size_t k = 8;
  std::vector<double> weights;  // length k
  double noise_sd = 0.1;
  std::uint64_t seed = 0;
  // Indices of features drawn once per entity and held constant in time.
  // nullopt = every feature is static, like population-share covariates.
  std::optional<std::vector<std::size_t>> static_features;
  // Standardize features to zero mean / unit std before forming the target.
  bool standardize = false;
  std::string start_date = "2020-01-01";

  nlohmann::json to_json() const;
};

// Draws standard-normal features and target[e][t] = sum_i w_i x[e][t][i] +
// N(0, noise_sd^2). Ground truth ranks features by |w_i| descending. A pure
// function of the config (including its seed). Throws ConfigError on k < 2,
// a weight count other than k, non-finite weights, or a bad static index.
std::pair<Panel, GroundTruthRanking> synth_generate(const SynthConfig& config);

}  // namespace sensbench

#endif  // SENSBENCH_SYNTH_H_
