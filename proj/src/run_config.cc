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

#include "sensbench/run_config.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <set>

#include "sensbench/error.h"
#include "sensbench/file_util.h"
#include "sensbench/toml.h"

namespace sensbench {
namespace {

using nlohmann::json;

// Typed access to one config table with unknown-key detection.
class Table {
 public:
  Table(const json& node, std::string where) : where_(std::move(where)) {
    if (node.is_null()) {
      node_ = json::object();
    } else if (!node.is_object()) {
      throw ConfigError(where_ + " must be a table");
    } else {
      node_ = node;
    }
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return node_.contains(key);
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return as<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    if (!has(key)) throw ConfigError(where_ + ": missing key '" + key + "'");
    return as<T>(key);
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return node_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!used_.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
    }
  }

 private:
  template <typename T>
  T as(const std::string& key) {
    const json& v = node_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw ConfigError("");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.get<std::int64_t>() < 0) throw ConfigError("");
        }
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError(where_ + ": key '" + key + "' has the wrong type or range");
    }
  }

  json node_;
  std::string where_;
  std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

DeltaMode parse_delta_mode(const std::string& s) {
  if (s == "absolute") return DeltaMode::kAbsolute;
  if (s == "relative-to-std" || s == "relative") return DeltaMode::kRelativeToStd;
  throw ConfigError("unknown delta_mode '" + s + "'");
}

BaselinePolicy parse_baseline(Table& t) {
  BaselinePolicy policy;
  const auto mode = t.get<std::string>("baseline", "feature-mean");
  if (mode == "zero") {
    policy.mode = BaselineMode::kZero;
  } else if (mode == "feature-mean") {
    policy.mode = BaselineMode::kFeatureMean;
  } else {
    throw ConfigError("unknown baseline '" + mode + "'");
  }
  const auto scope = t.get<std::string>("scope", "whole-window");
  if (scope == "whole-window") {
    policy.scope = BaselineScope::kWholeWindow;
  } else if (scope == "time-slice") {
    policy.scope = BaselineScope::kTimeSlice;
  } else {
    throw ConfigError("unknown baseline scope '" + scope + "'");
  }
  return policy;
}

DataSource parse_data(const json& node, const std::filesystem::path& base_dir,
                      std::uint64_t global_seed) {
  Table t(node, "[data]");
  DataSource data;
  const auto source = t.get<std::string>("source", "synth");
  if (source == "synth") {
    data.kind = DataSource::Kind::kSynth;
    SynthConfig& s = data.synth;
    s.entities = t.get<std::size_t>("entities", s.entities);
    s.days = t.get<std::size_t>("days", s.days);
    s.k = t.get<std::size_t>("k", s.k);
    if (t.has("weights")) {
      s.weights = t.raw("weights").get<std::vector<double>>();
    } else {
      // Descending k, k-1, ..., 1.
      for (std::size_t f = 0; f < s.k; ++f) s.weights.push_back(static_cast<double>(s.k - f));
    }
    s.noise_sd = t.get<double>("noise_sd", s.noise_sd);
    s.seed = t.get<std::uint64_t>("seed", global_seed);
    if (t.has("static_features")) {
      const json& sf = t.raw("static_features");
      if (sf.is_string()) {
        if (sf.get<std::string>() != "all") throw ConfigError("static_features must be \"all\" or a list");
      } else {
        std::vector<std::size_t> idx;
        for (const auto& v : sf) {
          if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
            throw ConfigError("static_features entries must be indices");
          }
          idx.push_back(v.get<std::size_t>());
        }
        s.static_features = idx;
      }
    }
    s.standardize = t.get<bool>("standardize", s.standardize);
    s.start_date = t.get<std::string>("start_date", s.start_date);
  } else if (source == "csv") {
    data.kind = DataSource::Kind::kCsv;
    data.csv_path = resolve(base_dir, t.require<std::string>("path"));
    PanelSchema& sc = data.schema;
    sc.entity_column = t.get<std::string>("entity_column", sc.entity_column);
    sc.date_column = t.get<std::string>("date_column", sc.date_column);
    sc.target_column = t.get<std::string>("target_column", sc.target_column);
    if (t.has("feature_columns")) {
      sc.feature_columns = t.raw("feature_columns").get<std::vector<std::string>>();
    }
    if (t.has("static_features")) {
      sc.static_features = t.raw("static_features").get<std::vector<std::string>>();
    }
    sc.max_fill_gap = t.get<int>("max_fill_gap", sc.max_fill_gap);
    sc.zscore_target = t.get<bool>("zscore_target", sc.zscore_target);
  } else {
    throw ConfigError("[data] source must be \"synth\" or \"csv\"");
  }
  t.finish();
  return data;
}

bool valid_id(const std::string& id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

ModelEntry parse_model(const json& node, const std::filesystem::path& base_dir,
                       std::uint64_t global_seed, std::size_t index) {
  Table t(node, "[[models]] #" + std::to_string(index + 1));
  ModelEntry m;
  m.kind = parse_model_kind(t.require<std::string>("kind"));
  m.id = t.get<std::string>("id", model_kind_name(m.kind));
  if (!valid_id(m.id)) throw ConfigError("model id '" + m.id + "' must match [A-Za-z0-9_-]+");
  if (m.kind == ModelKind::kExternal) {
    m.external.command = t.require<std::vector<std::string>>("command");
    if (m.external.command.empty()) throw ConfigError("external model command is empty");
    std::string& exe = m.external.command.front();
    if (exe.find('/') != std::string::npos) exe = resolve(base_dir, exe).string();
    m.external.working_dir = base_dir;
    const double timeout_s = t.get<double>("timeout_s", 30.0);
    if (!(timeout_s > 0.0)) throw ConfigError("timeout_s must be > 0");
    m.external.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000.0));
  } else {
    TrainConfig& c = m.train;
    c.epochs = t.get<int>("epochs", c.epochs);
    c.learning_rate = t.get<double>("learning_rate", c.learning_rate);
    c.batch_size = t.get<int>("batch_size", c.batch_size);
    c.seed = t.get<std::uint64_t>("seed", global_seed);
    c.l2 = t.get<double>("l2", c.l2);
    if (m.kind == ModelKind::kLinearDecomp) {
      c.moving_average_kernel = t.get<int>("kernel", c.moving_average_kernel);
    } else {
      c.hidden_width = t.get<int>("hidden_width", c.hidden_width);
    }
    c.fit_bias = t.get<bool>("fit_bias", c.fit_bias);
    c.validate();
  }
  t.finish();
  return m;
}

MethodEntry parse_method_entry(const json& node, std::uint64_t global_seed,
                               std::size_t index) {
  Table t(node, "[[methods]] #" + std::to_string(index + 1));
  MethodEntry m;
  m.method = parse_method(t.require<std::string>("method"));
  switch (m.method) {
    case Method::kMorris:
    case Method::kScaledMorris: {
      MorrisConfig& c = m.morris;
      c.delta_mode = parse_delta_mode(t.get<std::string>("delta_mode", "relative-to-std"));
      c.delta = t.get<double>("delta", c.delta);
      c.samples_r = t.get<std::size_t>("samples_r", c.samples_r);
      c.seed = t.get<std::uint64_t>("seed", global_seed);
      if (!(c.delta > 0.0)) throw ConfigError("morris delta must be > 0");
      if (c.samples_r < 1) throw ConfigError("samples_r must be >= 1");
      break;
    }
    case Method::kAblation:
      m.baseline = parse_baseline(t);
      break;
    case Method::kOcclusion:
      m.occlusion.patch_length = t.get<std::size_t>("patch_length", m.occlusion.patch_length);
      m.occlusion.stride = t.get<std::size_t>("stride", m.occlusion.stride);
      m.occlusion.baseline = parse_baseline(t);
      if (m.occlusion.patch_length < 1 || m.occlusion.stride < 1) {
        throw ConfigError("patch_length and stride must be >= 1");
      }
      break;
  }
  t.finish();
  return m;
}

nlohmann::json method_json(const MethodEntry& m) {
  json j = {{"method", method_name(m.method)}};
  switch (m.method) {
    case Method::kMorris:
    case Method::kScaledMorris:
      j["morris"] = m.morris.to_json();
      break;
    case Method::kAblation:
      j["baseline"] = m.baseline.to_json();
      break;
    case Method::kOcclusion:
      j["occlusion"] = m.occlusion.to_json();
      break;
  }
  return j;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc,
                           const std::filesystem::path& base_dir,
                           std::optional<std::uint64_t> seed_override) {
  Table t(doc, "config");
  RunConfig config;
  config.seed = t.get<std::uint64_t>("seed", 0);
  if (seed_override) config.seed = *seed_override;
  config.lookback = t.get<std::size_t>("lookback", config.lookback);
  config.horizon = t.get<std::size_t>("horizon", config.horizon);
  if (config.lookback < 1 || config.horizon < 1) {
    throw ConfigError("lookback and horizon must be >= 1");
  }
  if (t.has("out")) config.out_dir = resolve(base_dir, t.raw("out").get<std::string>());
  config.data = parse_data(t.has("data") ? t.raw("data") : json(), base_dir, config.seed);

  if (t.has("models")) {
    const json& models = t.raw("models");
    if (!models.is_array()) throw ConfigError("models must be an array of tables");
    for (std::size_t i = 0; i < models.size(); ++i) {
      config.models.push_back(parse_model(models[i], base_dir, config.seed, i));
    }
  }
  if (t.has("methods")) {
    const json& methods = t.raw("methods");
    if (!methods.is_array()) throw ConfigError("methods must be an array of tables");
    for (std::size_t i = 0; i < methods.size(); ++i) {
      config.methods.push_back(parse_method_entry(methods[i], config.seed, i));
    }
  }
  t.finish();

  std::set<std::string> ids;
  for (const auto& m : config.models) {
    if (!ids.insert(m.id).second) throw ConfigError("duplicate model id '" + m.id + "'");
  }
  std::set<Method> methods;
  for (const auto& m : config.methods) {
    if (!methods.insert(m.method).second) {
      throw ConfigError("method '" + method_name(m.method) + "' listed twice");
    }
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path,
                          std::optional<std::uint64_t> seed_override) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_run_config(parse_toml(text), std::filesystem::absolute(path).parent_path(),
                          seed_override);
}

nlohmann::json RunConfig::canonical() const {
  json data_json;
  if (data.kind == DataSource::Kind::kSynth) {
    data_json = {{"source", "synth"}, {"synth", data.synth.to_json()}};
  } else {
    const PanelSchema& s = data.schema;
    data_json = {{"source", "csv"},
                 {"path", data.csv_path.string()},
                 {"entity_column", s.entity_column},
                 {"date_column", s.date_column},
                 {"target_column", s.target_column},
                 {"feature_columns", s.feature_columns},
                 {"static_features", s.static_features},
                 {"max_fill_gap", s.max_fill_gap},
                 {"zscore_target", s.zscore_target}};
  }
  json models_json = json::array();
  for (const auto& m : models) {
    json j = {{"id", m.id}, {"kind", model_kind_name(m.kind)}};
    if (m.kind == ModelKind::kExternal) {
      j["command"] = m.external.command;
      j["working_dir"] = m.external.working_dir.string();
      j["timeout_ms"] = m.external.timeout.count();
    } else {
      j["train"] = m.train.to_json();
    }
    models_json.push_back(std::move(j));
  }
  json methods_json = json::array();
  for (const auto& m : methods) methods_json.push_back(method_json(m));
  return {{"seed", seed},
          {"lookback", lookback},
          {"horizon", horizon},
          {"data", data_json},
          {"models", models_json},
          {"methods", methods_json}};
}

std::string RunConfig::hash() const {
  const std::string text = canonical().dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace sensbench
