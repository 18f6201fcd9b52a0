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

#ifndef SENSBENCH_SENSITIVITY_H_
#define SENSBENCH_SENSITIVITY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sensbench/forecast_model.h"
#include "sensbench/panel.h"
#include "sensbench/windows.h"

namespace sensbench {

enum class Method { kMorris, kScaledMorris, kAblation, kOcclusion };

std::string method_name(Method method);
Method parse_method(std::string_view name);

enum class DeltaMode { kAbsolute, kRelativeToStd };

struct MorrisConfig {
  DeltaMode delta_mode = DeltaMode::kRelativeToStd;
  double delta = 0.1;  // absolute units, or a fraction of the feature std
  std::size_t samples_r = 50;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

enum class BaselineMode { kZero, kFeatureMean };

// kWholeWindow replaces with one constant per feature (zero or the global
// feature mean). kTimeSlice uses, at each lookback offset, the mean of the
// feature at that offset across all windows.
enum class BaselineScope { kWholeWindow, kTimeSlice };

struct BaselinePolicy {
  BaselineMode mode = BaselineMode::kFeatureMean;
  BaselineScope scope = BaselineScope::kWholeWindow;

  nlohmann::json to_json() const;
};

struct OcclusionConfig {
  std::size_t patch_length = 3;
  std::size_t stride = 1;
  BaselinePolicy baseline;

  nlohmann::json to_json() const;
};

// Per-feature importance for one (model, method) cell, features in panel
// order. Morris variants fill mu / mu_star / sigma (and per_step_mu, the mean
// effect per horizon step); ablation and occlusion fill importance, and
// occlusion also per_position [feature][patch position].
struct SensitivityReport {
  Method method = Method::kMorris;
  std::string model_id;
  std::vector<std::string> features;
  std::vector<double> mu;
  std::vector<double> mu_star;
  std::vector<double> sigma;
  std::vector<double> importance;
  std::vector<std::vector<double>> per_step_mu;
  std::vector<std::vector<double>> per_position;
  std::vector<std::string> warnings;
  std::size_t window_count = 0;
  nlohmann::json config = nlohmann::json::object();

  // mu_star for Morris variants, importance otherwise.
  std::span<const double> scores() const;

  nlohmann::json to_json() const;
  static SensitivityReport from_json(const nlohmann::json& doc);
};

// g: the scalar the methods perturb, the mean of the forecast over horizon.
double output_aggregate(std::span<const double> forecast);

// (g(x + delta on feature i at every lookback step) - g(x)) / delta.
//   ContractError:   delta == 0 or non-finite, feature out of range.
//   EvaluationError: non-finite model output.
double elementary_effect(const ForecastModel& model, MatrixView input,
                         std::size_t feature, double delta);

// One-at-a-time elementary effects from samples_r base windows drawn without
// replacement. Relative mode scales delta by each feature's std and rejects
// zero-std features (ConfigError listing them).
SensitivityReport morris(const ForecastModel& model, const WindowSet& windows,
                         const FeatureStats& stats, const MorrisConfig& config);

// Rescales a Morris report by feature_std / output_scale so that features in
// different units become comparable. A zero-std feature gets index 0 and a
// warning.
SensitivityReport scaled_morris(const SensitivityReport& report,
                                const FeatureStats& stats, double output_scale);

// Mean over windows of |g(feature i replaced by the baseline over the whole
// lookback) - g(window)|.
SensitivityReport ablation(const ForecastModel& model, const WindowSet& windows,
                           const FeatureStats& stats,
                           const BaselinePolicy& baseline);

// Slides a patch_length patch by `stride` along the lookback axis; each
// patch of feature i is replaced by the baseline and |delta g| recorded.
SensitivityReport occlusion(const ForecastModel& model, const WindowSet& windows,
                            const FeatureStats& stats,
                            const OcclusionConfig& config);

// Start offsets of the occlusion patches.
std::vector<std::size_t> patch_positions(std::size_t lookback,
                                         const OcclusionConfig& config);

}  // namespace sensbench

#endif  // SENSBENCH_SENSITIVITY_H_
