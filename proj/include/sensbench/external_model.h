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

#ifndef SENSBENCH_EXTERNAL_MODEL_H_
#define SENSBENCH_EXTERNAL_MODEL_H_

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "sensbench/forecast_model.h"
#include "sensbench/subprocess.h"

namespace sensbench {

// Out-of-process forecaster speaking line-delimited JSON on stdin/stdout:
//
//   -> {"op":"spec"}                      <- {"lookback":13,"horizon":15,"k":8}
//   -> {"op":"predict","input":[[...]]}   <- {"forecast":[...]}
//   -> {"op":"shutdown"}                  <- (process exits 0)
//
// One request is in flight at a time; predict() serializes callers.
struct ExternalOptions {
  std::vector<std::string> command;
  std::chrono::milliseconds timeout{30000};
  std::filesystem::path working_dir;  // empty: inherit the engine's
};

class ExternalModel final : public ForecastModel {
 public:
  ExternalModel(ExternalOptions options, ModelSpec spec,
                std::unique_ptr<Subprocess> process);
  ~ExternalModel() override;

  ModelKind kind() const override { return ModelKind::kExternal; }
  const ModelSpec& spec() const override { return spec_; }
  bool concurrent_predict() const override { return false; }

  // Sends shutdown and waits for a clean exit. Idempotent.
  void shutdown();

 protected:
  std::vector<double> forward(MatrixView input) const override;

 private:
  ExternalOptions options_;
  ModelSpec spec_;
  mutable std::mutex mu_;
  mutable std::unique_ptr<Subprocess> process_;
  mutable bool broken_ = false;
  mutable std::size_t requests_ = 0;
};

// Spawns the adapter and verifies its declared spec against `expected`.
//   AdapterError:   spawn failure, timeout, or garbled reply.
//   HandshakeError: the adapter declares a different lookback/horizon/k.
std::unique_ptr<ExternalModel> connect_external(const ExternalOptions& options,
                                                const ModelSpec& expected);

}  // namespace sensbench

#endif  // SENSBENCH_EXTERNAL_MODEL_H_
