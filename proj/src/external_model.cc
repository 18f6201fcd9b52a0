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

#include "sensbench/external_model.h"

#include "json.hpp"
#include "sensbench/error.h"

namespace sensbench {
namespace {

std::string snippet(const std::string& text) {
  constexpr std::size_t kMax = 160;
  return text.size() <= kMax ? text : text.substr(0, kMax) + "...";
}

std::string describe_exit(Subprocess& process) {
  if (auto code = process.wait(std::chrono::milliseconds(100))) {
    return " (adapter exited with status " + std::to_string(*code) + ")";
  }
  return "";
}

nlohmann::json exchange(Subprocess& process, const nlohmann::json& request,
                        const ExternalOptions& options) {
  const std::string op = request.at("op").get<std::string>();
  try {
    process.write_line(request.dump());
  } catch (const AdapterError& e) {
    throw AdapterError("adapter '" + options.command.front() + "' op " + op +
                       ": " + e.what() + describe_exit(process));
  }
  const auto line = process.read_line(options.timeout);
  if (!line) {
    throw AdapterError("adapter '" + options.command.front() +
                       "' closed its output during op " + op +
                       describe_exit(process));
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(*line);
  } catch (const nlohmann::json::exception&) {
    throw AdapterError("adapter '" + options.command.front() +
                       "' sent a garbled frame for op " + op + ": '" +
                       snippet(*line) + "'");
  }
  if (!reply.is_object()) {
    throw AdapterError("adapter reply to op " + op + " is not a JSON object: '" +
                       snippet(*line) + "'");
  }
  if (reply.contains("error")) {
    throw AdapterError("adapter reported an error for op " + op + ": " +
                       reply["error"].dump());
  }
  return reply;
}

}  // namespace

ExternalModel::ExternalModel(ExternalOptions options, ModelSpec spec,
                             std::unique_ptr<Subprocess> process)
    : options_(std::move(options)), spec_(spec), process_(std::move(process)) {}

ExternalModel::~ExternalModel() {
  try {
    shutdown();
  } catch (...) {
  }
}

void ExternalModel::shutdown() {
  std::lock_guard<std::mutex> lock(mu_);
  if (!process_) return;
  if (!broken_) {
    try {
      process_->write_line(R"({"op":"shutdown"})");
    } catch (const AdapterError&) {
    }
  }
  process_->close_stdin();
  if (!process_->wait(std::chrono::seconds(2))) process_->kill();
  process_.reset();
}

std::vector<double> ExternalModel::forward(MatrixView input) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!process_ || broken_) {
    throw AdapterError("adapter '" + options_.command.front() +
                       "' is no longer usable");
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t t = 0; t < input.rows(); ++t) {
    const auto row = input.row(t);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  ++requests_;
  nlohmann::json reply;
  try {
    reply = exchange(*process_, {{"op", "predict"}, {"input", rows}}, options_);
  } catch (const AdapterError& e) {
    broken_ = true;
    throw AdapterError(std::string(e.what()) + " [request " +
                       std::to_string(requests_) + "]");
  }
  std::vector<double> forecast;
  try {
    forecast = reply.at("forecast").get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    broken_ = true;
    throw AdapterError("adapter reply lacks a numeric 'forecast' array: '" +
                       snippet(reply.dump()) + "'");
  }
  if (forecast.size() != spec_.horizon) {
    throw AdapterError("adapter returned " + std::to_string(forecast.size()) +
                       " forecast values, expected " + std::to_string(spec_.horizon));
  }
  return forecast;
}

std::unique_ptr<ExternalModel> connect_external(const ExternalOptions& options,
                                                const ModelSpec& expected) {
  if (options.command.empty()) throw AdapterError("empty adapter command");
  auto process = std::make_unique<Subprocess>(options.command, options.working_dir);
  const nlohmann::json reply = exchange(*process, {{"op", "spec"}}, options);
  ModelSpec declared;
  try {
    declared = ModelSpec{reply.at("lookback").get<std::size_t>(),
                         reply.at("horizon").get<std::size_t>(),
                         reply.at("k").get<std::size_t>()};
  } catch (const nlohmann::json::exception&) {
    throw AdapterError("adapter spec reply is malformed: '" +
                       snippet(reply.dump()) + "'");
  }
  if (declared != expected) {
    process->close_stdin();
    if (!process->wait(std::chrono::milliseconds(500))) process->kill();
    throw HandshakeError("adapter '" + options.command.front() + "' declares " +
                         declared.to_string() + " but the engine expects " +
                         expected.to_string());
  }
  return std::make_unique<ExternalModel>(options, declared, std::move(process));
}

}  // namespace sensbench
