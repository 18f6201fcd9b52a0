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

#ifndef SENSBENCH_FORECAST_MODEL_H_
#define SENSBENCH_FORECAST_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sensbench/matrix.h"
#include "sensbench/windows.h"

namespace sensbench {

enum class ModelKind { kLinearDecomp, kMlp, kExternal };

std::string model_kind_name(ModelKind kind);
// Throws ConfigError on an unknown name.
ModelKind parse_model_kind(std::string_view name);

struct ModelSpec {
  std::size_t lookback = 13;
  std::size_t horizon = 15;
  std::size_t num_features = 1;

  bool operator==(const ModelSpec&) const = default;
  std::string to_string() const;
};

struct TrainConfig {
  int epochs = 200;
  double learning_rate = 0.05;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double l2 = 0.0;
  int moving_average_kernel = 3;  // linear-decomp only; odd
  int hidden_width = 16;          // mlp only
  bool fit_bias = true;

  // Throws ConfigError on an invalid field.
  void validate() const;
  nlohmann::json to_json() const;
};

// The black-box forecaster f: an input window [lookback][k] -> forecast
// [horizon]. predict() enforces the contract around the model-specific
// forward pass: shape and finiteness of the input (ContractError) and
// finiteness of the output (EvaluationError).
class ForecastModel {
 public:
  virtual ~ForecastModel() = default;

  virtual ModelKind kind() const = 0;
  virtual const ModelSpec& spec() const = 0;

  std::vector<double> predict(MatrixView input) const;

  // Built-in models may be invoked concurrently; external ones are one lane.
  virtual bool concurrent_predict() const { return true; }

  // Parameter dump for built-in kinds; throws ContractError otherwise.
  virtual nlohmann::json to_json() const;

 protected:
  virtual std::vector<double> forward(MatrixView input) const = 0;
};

// Mean squared error of the model over every window and horizon step.
double mean_squared_error(const ForecastModel& model, const WindowSet& windows);

// Trains a built-in model with seeded mini-batch gradient descent.
//   TrainingError: empty windows, or a non-finite loss (names the epoch).
//   ConfigError:   invalid config or `kind` is external.
std::unique_ptr<ForecastModel> train(ModelKind kind, const WindowSet& windows,
                                     const TrainConfig& config);

// The seeded initial state train() starts from (no gradient steps taken).
std::unique_ptr<ForecastModel> initialize(ModelKind kind, const WindowSet& windows,
                                          const TrainConfig& config);

// Rebuilds a built-in model from its to_json() dump.
std::unique_ptr<ForecastModel> load_model(const nlohmann::json& doc);

}  // namespace sensbench

#endif  // SENSBENCH_FORECAST_MODEL_H_
