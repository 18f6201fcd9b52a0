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

// Reference adapter for the external-model protocol. It either serves a
// saved built-in model (--model) or echoes the last value of the first input
// column (--echo). Fault switches exist for exercising the engine's error
// handling.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sensbench/file_util.h"
#include "sensbench/forecast_model.h"
#include "sensbench/matrix.h"

int main(int argc, char** argv) {
  CLI::App app{"Line-delimited JSON forecaster adapter"};
  std::string model_path;
  bool echo = false;
  std::size_t lookback = 13, horizon = 15, k = 8;
  std::optional<std::size_t> declare_k;
  std::optional<std::size_t> crash_after;
  std::optional<std::size_t> garble_after;
  app.add_option("--model", model_path, "Saved built-in model JSON");
  app.add_flag("--echo", echo, "Echo the last value of input column 0");
  app.add_option("--lookback", lookback, "Echo mode lookback");
  app.add_option("--horizon", horizon, "Echo mode horizon");
  app.add_option("--k", k, "Echo mode feature count");
  app.add_option("--declare-k", declare_k, "Report this k in the handshake instead");
  app.add_option("--crash-after", crash_after, "Exit(3) on predict request N+1");
  app.add_option("--garble-after", garble_after, "Answer predict request N+1 with junk");
  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<sensbench::ForecastModel> model;
  if (!model_path.empty()) {
    try {
      model = sensbench::load_model(nlohmann::json::parse(sensbench::read_file(model_path)));
    } catch (const std::exception& e) {
      std::cerr << "adapter: " << e.what() << "\n";
      return 1;
    }
    lookback = model->spec().lookback;
    horizon = model->spec().horizon;
    k = model->spec().num_features;
  } else if (!echo) {
    std::cerr << "adapter: pass --model or --echo\n";
    return 1;
  }

  std::size_t predicts = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    nlohmann::json request;
    nlohmann::json reply;
    try {
      request = nlohmann::json::parse(line);
      const std::string op = request.at("op").get<std::string>();
      if (op == "shutdown") return 0;
      if (op == "spec") {
        reply = {{"lookback", lookback}, {"horizon", horizon}, {"k", declare_k.value_or(k)}};
      } else if (op == "predict") {
        if (crash_after && predicts >= *crash_after) std::_Exit(3);
        if (garble_after && predicts >= *garble_after) {
          std::cout << "{not json" << std::endl;
          ++predicts;
          continue;
        }
        ++predicts;
        const auto rows = request.at("input").get<std::vector<std::vector<double>>>();
        sensbench::Matrix input(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t t = 0; t < rows.size(); ++t) {
          if (rows[t].size() != input.cols()) throw std::runtime_error("ragged input");
          for (std::size_t f = 0; f < input.cols(); ++f) input(t, f) = rows[t][f];
        }
        if (model) {
          reply = {{"forecast", model->predict(input)}};
        } else {
          if (input.rows() != lookback || input.cols() != k) {
            throw std::runtime_error("input shape mismatch");
          }
          reply = {{"forecast", std::vector<double>(horizon, input(lookback - 1, 0))}};
        }
      } else {
        reply = {{"error", "unknown op '" + op + "'"}};
      }
    } catch (const std::exception& e) {
      reply = {{"error", e.what()}};
    }
    std::cout << reply.dump() << std::endl;
  }
  return 0;
}
