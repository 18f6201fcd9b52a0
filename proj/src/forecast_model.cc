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

#include "sensbench/forecast_model.h"

#include <cmath>

#include "sensbench/error.h"
#include "sensbench/linear_decomp.h"
#include "sensbench/mlp.h"

namespace sensbench {

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinearDecomp:
      return "linear-decomp";
    case ModelKind::kMlp:
      return "mlp";
    case ModelKind::kExternal:
      return "external";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "linear-decomp") return ModelKind::kLinearDecomp;
  if (name == "mlp") return ModelKind::kMlp;
  if (name == "external") return ModelKind::kExternal;
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

std::string ModelSpec::to_string() const {
  return "{lookback " + std::to_string(lookback) + ", horizon " +
         std::to_string(horizon) + ", k " + std::to_string(num_features) + "}";
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be finite and > 0");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ConfigError("l2 must be >= 0");
  if (moving_average_kernel < 1 || moving_average_kernel % 2 == 0) {
    throw ConfigError("moving_average_kernel must be an odd integer >= 1");
  }
  if (hidden_width < 1) throw ConfigError("hidden_width must be >= 1");
}

nlohmann::json TrainConfig::to_json() const {
  return {{"epochs", epochs},
          {"learning_rate", learning_rate},
          {"batch_size", batch_size},
          {"seed", seed},
          {"l2", l2},
          {"moving_average_kernel", moving_average_kernel},
          {"hidden_width", hidden_width},
          {"fit_bias", fit_bias}};
}

std::vector<double> ForecastModel::predict(MatrixView input) const {
  const ModelSpec& s = spec();
  if (input.rows() != s.lookback || input.cols() != s.num_features) {
    throw ContractError("input shape [" + std::to_string(input.rows()) + "][" +
                        std::to_string(input.cols()) +
                        "] does not match model spec " + s.to_string());
  }
  for (double v : input.data()) {
    if (!std::isfinite(v)) throw ContractError("model input contains a non-finite value");
  }
  std::vector<double> out = forward(input);
  if (out.size() != s.horizon) {
    throw EvaluationError("model returned " + std::to_string(out.size()) +
                          " values, expected horizon " + std::to_string(s.horizon));
  }
  for (double v : out) {
    if (!std::isfinite(v)) throw EvaluationError("model produced a non-finite forecast");
  }
  return out;
}

nlohmann::json ForecastModel::to_json() const {
  throw ContractError("model kind " + model_kind_name(kind()) +
                      " has no parameter dump");
}

double mean_squared_error(const ForecastModel& model, const WindowSet& windows) {
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto forecast = model.predict(windows.input(i));
    const auto target = windows.target(i);
    for (std::size_t h = 0; h < forecast.size(); ++h) {
      const double d = forecast[h] - target[h];
      total += d * d;
      ++n;
    }
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

std::unique_ptr<ForecastModel> train(ModelKind kind, const WindowSet& windows,
                                     const TrainConfig& config) {
  config.validate();
  if (windows.empty()) throw TrainingError("cannot train on an empty window set");
  switch (kind) {
    case ModelKind::kLinearDecomp:
      return LinearDecompModel::fit(windows, config, config.epochs);
    case ModelKind::kMlp:
      return MlpModel::fit(windows, config, config.epochs);
    case ModelKind::kExternal:
      break;
  }
  throw ConfigError("external models are connected, not trained");
}

std::unique_ptr<ForecastModel> initialize(ModelKind kind, const WindowSet& windows,
                                          const TrainConfig& config) {
  config.validate();
  if (windows.empty()) throw TrainingError("cannot initialize on an empty window set");
  if (kind == ModelKind::kLinearDecomp) return LinearDecompModel::fit(windows, config, 0);
  if (kind == ModelKind::kMlp) return MlpModel::fit(windows, config, 0);
  throw ConfigError("external models have no initialization");
}

std::unique_ptr<ForecastModel> load_model(const nlohmann::json& doc) {
  try {
    const ModelKind kind = parse_model_kind(doc.at("kind").get<std::string>());
    if (kind == ModelKind::kLinearDecomp) return LinearDecompModel::from_json(doc);
    if (kind == ModelKind::kMlp) return MlpModel::from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed model file: ") + e.what());
  }
  throw ConfigError("model file does not describe a built-in model");
}

}  // namespace sensbench
