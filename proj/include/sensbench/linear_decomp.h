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

#ifndef SENSBENCH_LINEAR_DECOMP_H_
#define SENSBENCH_LINEAR_DECOMP_H_

#include <utility>
#include <vector>

#include "sensbench/forecast_model.h"

namespace sensbench {

// Splits every column of `input` into a trend (centred moving average of
// width `kernel`, boundary values replicated) and a seasonal remainder
// input - trend. Throws ConfigError on an even kernel or kernel > rows.
std::pair<Matrix, Matrix> decompose(MatrixView input, int kernel);

// Decomposition-linear forecaster: every feature column is split into trend
// and seasonal parts, each part gets its own linear map to the horizon, and
// the maps are summed over features:
//
//   y[h] = bias[h] + sum_{t,f} trend_w[h][t][f] * trend[t][f]
//                  + sum_{t,f} seasonal_w[h][t][f] * seasonal[t][f]
//
// The model is linear in its input up to the bias term.
class LinearDecompModel final : public ForecastModel {
 public:
  // Weights are [horizon][lookback][k] row-major; bias is [horizon].
  LinearDecompModel(ModelSpec spec, int kernel, std::vector<double> trend_w,
                    std::vector<double> seasonal_w, std::vector<double> bias);

  ModelKind kind() const override { return ModelKind::kLinearDecomp; }
  const ModelSpec& spec() const override { return spec_; }
  nlohmann::json to_json() const override;

  int kernel() const { return kernel_; }
  const std::vector<double>& trend_weights() const { return trend_w_; }
  const std::vector<double>& seasonal_weights() const { return seasonal_w_; }
  const std::vector<double>& bias() const { return bias_; }

  // Runs `epochs` passes of mini-batch descent from the seeded initialization.
  static std::unique_ptr<LinearDecompModel> fit(const WindowSet& windows,
                                                  const TrainConfig& config,
                                                  int epochs);
  static std::unique_ptr<LinearDecompModel> from_json(const nlohmann::json& doc);

 protected:
  std::vector<double> forward(MatrixView input) const override;

 private:
  ModelSpec spec_;
  int kernel_;
  std::vector<double> trend_w_;
  std::vector<double> seasonal_w_;
  std::vector<double> bias_;
};

}  // namespace sensbench

#endif  // SENSBENCH_LINEAR_DECOMP_H_
