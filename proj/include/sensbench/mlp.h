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

#ifndef SENSBENCH_MLP_H_
#define SENSBENCH_MLP_H_

#include <vector>

#include "sensbench/forecast_model.h"

namespace sensbench {

// One-hidden-layer tanh network over the flattened window. Inputs are
// standardized per feature and the output de-standardized with statistics
// taken from the training windows; both are part of the model.
class MlpModel final : public ForecastModel {
 public:
  struct Params {
    std::size_t hidden = 16;
    std::vector<double> w1;  // [hidden][lookback * k]
    std::vector<double> b1;  // [hidden]
    std::vector<double> w2;  // [horizon][hidden]
    std::vector<double> b2;  // [horizon]
    std::vector<double> input_shift;  // [k]
    std::vector<double> input_scale;  // [k]
    double output_shift = 0.0;
    double output_scale = 1.0;
  };

  MlpModel(ModelSpec spec, Params params);

  ModelKind kind() const override { return ModelKind::kMlp; }
  const ModelSpec& spec() const override { return spec_; }
  nlohmann::json to_json() const override;
  const Params& params() const { return params_; }

  // Runs `epochs` passes of mini-batch descent from the seeded initialization.
  static std::unique_ptr<MlpModel> fit(const WindowSet& windows,
                                         const TrainConfig& config, int epochs);
  static std::unique_ptr<MlpModel> from_json(const nlohmann::json& doc);

 protected:
  std::vector<double> forward(MatrixView input) const override;

 private:
  ModelSpec spec_;
  Params params_;
};

}  // namespace sensbench

#endif  // SENSBENCH_MLP_H_
