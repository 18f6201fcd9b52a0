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

#include "sensbench/synth.h"

#include <cmath>
#include <random>

#include "sensbench/error.h"
#include "sensbench/file_util.h"

namespace sensbench {

nlohmann::json GroundTruthRanking::to_json() const {
  return {{"features", features}, {"ranks", ranks.ranks}};
}

GroundTruthRanking load_truth(const std::filesystem::path& path, bool invert) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("truth file " + path.string() + ": " + e.what());
  }
  GroundTruthRanking truth;
  truth.source = GroundTruthRanking::Source::kExternalFile;
  try {
    truth.features = doc.at("features").get<std::vector<std::string>>();
    if (doc.contains("ranks")) {
      truth.ranks.ranks = doc.at("ranks").get<std::vector<double>>();
    } else {
      truth.ranks = rank(doc.at("scores").get<std::vector<double>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("truth file " + path.string() + ": " + e.what());
  }
  if (truth.ranks.size() != truth.features.size()) {
    throw InputError("truth file " + path.string() +
                     ": ranks and features differ in length");
  }
  if (invert) {
    const double top = static_cast<double>(truth.ranks.size()) + 1.0;
    for (double& r : truth.ranks.ranks) r = top - r;
  }
  return truth;
}

nlohmann::json SynthConfig::to_json() const {
  nlohmann::json j = {{"entities", entities}, {"days", days},
                      {"k", k},               {"weights", weights},
                      {"noise_sd", noise_sd}, {"seed", seed},
                      {"standardize", standardize},
                      {"start_date", start_date}};
  if (static_features) {
    j["static_features"] = *static_features;
  } else {
    j["static_features"] = "all";
  }
  return j;
}

std::pair<Panel, GroundTruthRanking> synth_generate(const SynthConfig& config) {
  const std::size_t k = config.k;
  if (k < 2) throw ConfigError("synthetic panel needs k >= 2 features");
  if (config.weights.size() != k) {
    throw ConfigError("expected " + std::to_string(k) + " weights, got " +
                      std::to_string(config.weights.size()));
  }
  for (double w : config.weights) {
    if (!std::isfinite(w)) throw ConfigError("synthetic weights must be finite");
  }
  if (!std::isfinite(config.noise_sd) || config.noise_sd < 0.0) {
    throw ConfigError("noise_sd must be finite and >= 0");
  }
  if (config.entities == 0 || config.days == 0) {
    throw ConfigError("synthetic panel needs at least one entity and one day");
  }

  std::vector<bool> is_static(k, config.static_features ? false : true);
  if (config.static_features) {
    for (std::size_t f : *config.static_features) {
      if (f >= k) throw ConfigError("static feature index out of range");
      is_static[f] = true;
    }
  }

  Panel panel;
  panel.static_mask = is_static;
  for (std::size_t f = 0; f < k; ++f) panel.features.push_back("x" + std::to_string(f + 1));
  for (std::size_t e = 0; e < config.entities; ++e) {
    char name[16];
    std::snprintf(name, sizeof(name), "e%04zu", e);
    panel.entities.emplace_back(name);
  }
  Date day;
  try {
    day = parse_date(config.start_date);
  } catch (const DataError& e) {
    throw ConfigError(std::string("start_date: ") + e.what());
  }
  for (std::size_t t = 0; t < config.days; ++t) {
    panel.timestamps.push_back(day + std::chrono::days{static_cast<int>(t)});
  }

  const std::size_t n_t = config.days;
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  panel.values.assign(config.entities * n_t * k, 0.0);
  for (std::size_t e = 0; e < config.entities; ++e) {
    std::vector<double> per_entity(k, 0.0);
    for (std::size_t f = 0; f < k; ++f) {
      if (is_static[f]) per_entity[f] = normal(rng);
    }
    for (std::size_t t = 0; t < n_t; ++t) {
      for (std::size_t f = 0; f < k; ++f) {
        panel.values[(e * n_t + t) * k + f] = is_static[f] ? per_entity[f] : normal(rng);
      }
    }
  }
  if (config.standardize) standardize_features(panel);

  panel.target.assign(config.entities * n_t, 0.0);
  for (std::size_t c = 0; c < config.entities * n_t; ++c) {
    double y = 0.0;
    for (std::size_t f = 0; f < k; ++f) y += config.weights[f] * panel.values[c * k + f];
    panel.target[c] = y + config.noise_sd * normal(rng);
  }
  panel.validate();

  GroundTruthRanking truth;
  truth.features = panel.features;
  std::vector<double> magnitude(k);
  for (std::size_t f = 0; f < k; ++f) magnitude[f] = std::abs(config.weights[f]);
  truth.ranks = rank(magnitude);
  truth.source = GroundTruthRanking::Source::kPlantedWeights;
  return {std::move(panel), std::move(truth)};
}

}  // namespace sensbench
