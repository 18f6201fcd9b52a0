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

#include "sensbench/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sensbench/error.h"

namespace sensbench {
namespace {

void check_stats(const FeatureStats& stats, const WindowSet& windows) {
  if (stats.size() != windows.num_features()) {
    throw ContractError("feature statistics cover " + std::to_string(stats.size()) +
                        " features, windows have " +
                        std::to_string(windows.num_features()));
  }
}

void check_model(const ForecastModel& model, const WindowSet& windows) {
  const ModelSpec& spec = model.spec();
  if (spec.lookback != windows.lookback() || spec.horizon != windows.horizon() ||
      spec.num_features != windows.num_features()) {
    throw ContractError("model spec " + spec.to_string() +
                        " does not match the window geometry");
  }
}

SensitivityReport empty_report(Method method, const WindowSet& windows) {
  SensitivityReport report;
  report.method = method;
  report.features = windows.panel().features;
  return report;
}

// Replacement values per (lookback step, feature).
Matrix baseline_matrix(const BaselinePolicy& policy, const FeatureStats& stats,
                       const WindowSet& windows) {
  const std::size_t lookback = windows.lookback();
  const std::size_t k = windows.num_features();
  Matrix base(lookback, k, 0.0);
  if (policy.mode == BaselineMode::kZero) return base;
  if (policy.scope == BaselineScope::kWholeWindow) {
    for (std::size_t t = 0; t < lookback; ++t) {
      for (std::size_t f = 0; f < k; ++f) base(t, f) = stats[f].mean;
    }
    return base;
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const MatrixView x = windows.input(i);
    for (std::size_t t = 0; t < lookback; ++t) {
      for (std::size_t f = 0; f < k; ++f) base(t, f) += x(t, f);
    }
  }
  for (double& v : base.data()) v /= static_cast<double>(windows.size());
  return base;
}

// |g(x with rows [begin, end) of `feature` set to the baseline) - g0|.
// `work` must hold x on entry and is restored on exit.
double replacement_effect(const ForecastModel& model, Matrix& work,
                          const Matrix& base, std::size_t feature,
                          std::size_t begin, std::size_t end, double g0) {
  std::vector<double> saved(end - begin);
  for (std::size_t t = begin; t < end; ++t) {
    saved[t - begin] = work(t, feature);
    work(t, feature) = base(t, feature);
  }
  const double g = output_aggregate(model.predict(work));
  for (std::size_t t = begin; t < end; ++t) work(t, feature) = saved[t - begin];
  return std::abs(g - g0);
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::kMorris:
      return "morris";
    case Method::kScaledMorris:
      return "scaled-morris";
    case Method::kAblation:
      return "ablation";
    case Method::kOcclusion:
      return "occlusion";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "morris") return Method::kMorris;
  if (name == "scaled-morris") return Method::kScaledMorris;
  if (name == "ablation") return Method::kAblation;
  if (name == "occlusion") return Method::kOcclusion;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

nlohmann::json MorrisConfig::to_json() const {
  return {{"delta_mode", delta_mode == DeltaMode::kAbsolute ? "absolute" : "relative-to-std"},
          {"delta", delta},
          {"samples_r", samples_r},
          {"seed", seed}};
}

nlohmann::json BaselinePolicy::to_json() const {
  return {{"mode", mode == BaselineMode::kZero ? "zero" : "feature-mean"},
          {"scope", scope == BaselineScope::kWholeWindow ? "whole-window" : "time-slice"}};
}

nlohmann::json OcclusionConfig::to_json() const {
  return {{"patch_length", patch_length},
          {"stride", stride},
          {"baseline", baseline.to_json()}};
}

std::span<const double> SensitivityReport::scores() const {
  if (method == Method::kMorris || method == Method::kScaledMorris) return mu_star;
  return importance;
}

nlohmann::json SensitivityReport::to_json() const {
  return {{"method", method_name(method)},
          {"model", model_id},
          {"features", features},
          {"mu", mu},
          {"mu_star", mu_star},
          {"sigma", sigma},
          {"importance", importance},
          {"per_step_mu", per_step_mu},
          {"per_position", per_position},
          {"warnings", warnings},
          {"window_count", window_count},
          {"config", config}};
}

SensitivityReport SensitivityReport::from_json(const nlohmann::json& doc) {
  SensitivityReport r;
  try {
    r.method = parse_method(doc.at("method").get<std::string>());
    r.model_id = doc.at("model").get<std::string>();
    r.features = doc.at("features").get<std::vector<std::string>>();
    r.mu = doc.value("mu", std::vector<double>{});
    r.mu_star = doc.value("mu_star", std::vector<double>{});
    r.sigma = doc.value("sigma", std::vector<double>{});
    r.importance = doc.value("importance", std::vector<double>{});
    r.per_step_mu = doc.value("per_step_mu", std::vector<std::vector<double>>{});
    r.per_position = doc.value("per_position", std::vector<std::vector<double>>{});
    r.warnings = doc.value("warnings", std::vector<std::string>{});
    r.window_count = doc.value("window_count", std::size_t{0});
    r.config = doc.value("config", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed sensitivity report: ") + e.what());
  }
  if (r.scores().size() != r.features.size()) {
    throw InputError("sensitivity report scores do not match its feature list");
  }
  return r;
}

double output_aggregate(std::span<const double> forecast) {
  double sum = 0.0;
  for (double v : forecast) sum += v;
  return sum / static_cast<double>(forecast.size());
}

double elementary_effect(const ForecastModel& model, MatrixView input,
                         std::size_t feature, double delta) {
  if (delta == 0.0 || !std::isfinite(delta)) {
    throw ContractError("elementary effect needs a finite, non-zero delta");
  }
  if (feature >= input.cols()) {
    throw ContractError("feature index " + std::to_string(feature) +
                        " out of range for k = " + std::to_string(input.cols()));
  }
  const double g0 = output_aggregate(model.predict(input));
  Matrix perturbed(input);
  for (std::size_t t = 0; t < perturbed.rows(); ++t) perturbed(t, feature) += delta;
  const double g1 = output_aggregate(model.predict(perturbed));
  return (g1 - g0) / delta;
}

SensitivityReport morris(const ForecastModel& model, const WindowSet& windows,
                         const FeatureStats& stats, const MorrisConfig& config) {
  check_model(model, windows);
  check_stats(stats, windows);
  const std::size_t k = windows.num_features();
  const std::size_t horizon = windows.horizon();
  if (!(config.delta > 0.0) || !std::isfinite(config.delta)) {
    throw ConfigError("morris delta must be finite and > 0");
  }
  if (config.samples_r < 1 || config.samples_r > windows.size()) {
    throw ConfigError("samples_r must be in [1, " + std::to_string(windows.size()) +
                      "], got " + std::to_string(config.samples_r));
  }

  std::vector<double> deltas(k, config.delta);
  if (config.delta_mode == DeltaMode::kRelativeToStd) {
    std::string offending;
    for (std::size_t f = 0; f < k; ++f) {
      deltas[f] = config.delta * stats[f].std;
      if (!(stats[f].std > 0.0)) {
        offending += (offending.empty() ? "" : ", ") + windows.panel().features[f];
      }
    }
    if (!offending.empty()) {
      throw ConfigError("relative delta needs std > 0; zero-std features: " + offending);
    }
  }

  std::vector<std::size_t> order(windows.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(config.samples_r);
  std::sort(order.begin(), order.end());

  // effects[f][s]: elementary effect of feature f at base window s.
  std::vector<std::vector<double>> effects(k, std::vector<double>(order.size()));
  std::vector<std::vector<double>> step_sum(k, std::vector<double>(horizon, 0.0));
  for (std::size_t s = 0; s < order.size(); ++s) {
    Matrix work(windows.input(order[s]));
    const auto base = model.predict(work);
    const double g0 = output_aggregate(base);
    for (std::size_t f = 0; f < k; ++f) {
      for (std::size_t t = 0; t < work.rows(); ++t) work(t, f) += deltas[f];
      const auto moved = model.predict(work);
      for (std::size_t t = 0; t < work.rows(); ++t) {
        work(t, f) = windows.input(order[s])(t, f);
      }
      effects[f][s] = (output_aggregate(moved) - g0) / deltas[f];
      for (std::size_t h = 0; h < horizon; ++h) {
        step_sum[f][h] += (moved[h] - base[h]) / deltas[f];
      }
    }
  }

  SensitivityReport report = empty_report(Method::kMorris, windows);
  const double r = static_cast<double>(order.size());
  for (std::size_t f = 0; f < k; ++f) {
    double sum = 0.0, abs_sum = 0.0;
    for (double e : effects[f]) {
      sum += e;
      abs_sum += std::abs(e);
    }
    const double mu = sum / r;
    double ss = 0.0;
    for (double e : effects[f]) ss += (e - mu) * (e - mu);
    report.mu.push_back(mu);
    report.mu_star.push_back(abs_sum / r);
    report.sigma.push_back(std::sqrt(ss / r));
    for (double& v : step_sum[f]) v /= r;
  }
  report.per_step_mu = std::move(step_sum);
  report.window_count = order.size();
  report.config = config.to_json();
  report.config["aggregate"] = "mean-over-horizon";
  report.config["design"] = "one-at-a-time from shared base windows";
  return report;
}

SensitivityReport scaled_morris(const SensitivityReport& report,
                                const FeatureStats& stats, double output_scale) {
  if (report.method != Method::kMorris) {
    throw ContractError("scaled_morris expects a morris report, got " +
                        method_name(report.method));
  }
  if (!(output_scale > 0.0) || !std::isfinite(output_scale)) {
    throw ConfigError("output_scale must be finite and > 0");
  }
  const std::size_t k = report.features.size();
  if (stats.size() != k) throw ContractError("feature statistics do not match report");

  SensitivityReport out = report;
  out.method = Method::kScaledMorris;
  for (std::size_t f = 0; f < k; ++f) {
    const double sd = stats[f].std;
    const double factor = sd / output_scale;
    if (!(sd > 0.0)) {
      out.warnings.push_back("feature '" + report.features[f] +
                             "' has zero std; scaled index set to 0");
    }
    out.mu[f] = report.mu[f] * factor;
    out.mu_star[f] = report.mu_star[f] * factor;
    out.sigma[f] = report.sigma[f] * factor;
    for (double& v : out.per_step_mu[f]) v *= factor;
  }
  out.config["output_scale"] = output_scale;
  out.config["scaling"] = "mu_star * feature_std / target_std";
  out.config["scaling_is_stand_in"] = true;
  return out;
}

SensitivityReport ablation(const ForecastModel& model, const WindowSet& windows,
                           const FeatureStats& stats,
                           const BaselinePolicy& baseline) {
  check_model(model, windows);
  check_stats(stats, windows);
  if (windows.empty()) throw ContractError("ablation needs at least one window");
  const std::size_t k = windows.num_features();
  const std::size_t lookback = windows.lookback();
  const Matrix base = baseline_matrix(baseline, stats, windows);

  std::vector<double> total(k, 0.0);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    Matrix work(windows.input(i));
    const double g0 = output_aggregate(model.predict(work));
    for (std::size_t f = 0; f < k; ++f) {
      total[f] += replacement_effect(model, work, base, f, 0, lookback, g0);
    }
  }

  SensitivityReport report = empty_report(Method::kAblation, windows);
  for (double t : total) report.importance.push_back(t / static_cast<double>(windows.size()));
  report.window_count = windows.size();
  report.config = {{"baseline", baseline.to_json()},
                   {"aggregate", "mean-over-horizon"}};
  return report;
}

std::vector<std::size_t> patch_positions(std::size_t lookback,
                                         const OcclusionConfig& config) {
  if (config.patch_length < 1 || config.patch_length > lookback) {
    throw ConfigError("patch_length must be in [1, lookback = " +
                      std::to_string(lookback) + "]");
  }
  if (config.stride < 1) throw ConfigError("stride must be >= 1");
  std::vector<std::size_t> positions;
  for (std::size_t p = 0; p + config.patch_length <= lookback; p += config.stride) {
    positions.push_back(p);
  }
  return positions;
}

SensitivityReport occlusion(const ForecastModel& model, const WindowSet& windows,
                            const FeatureStats& stats,
                            const OcclusionConfig& config) {
  check_model(model, windows);
  check_stats(stats, windows);
  if (windows.empty()) throw ContractError("occlusion needs at least one window");
  const std::size_t k = windows.num_features();
  const auto positions = patch_positions(windows.lookback(), config);
  const Matrix base = baseline_matrix(config.baseline, stats, windows);

  std::vector<std::vector<double>> per_position(k, std::vector<double>(positions.size(), 0.0));
  for (std::size_t i = 0; i < windows.size(); ++i) {
    Matrix work(windows.input(i));
    const double g0 = output_aggregate(model.predict(work));
    for (std::size_t f = 0; f < k; ++f) {
      for (std::size_t p = 0; p < positions.size(); ++p) {
        per_position[f][p] += replacement_effect(
            model, work, base, f, positions[p], positions[p] + config.patch_length, g0);
      }
    }
  }

  SensitivityReport report = empty_report(Method::kOcclusion, windows);
  const double n = static_cast<double>(windows.size());
  for (auto& row : per_position) {
    double sum = 0.0;
    for (double& v : row) {
      v /= n;
      sum += v;
    }
    report.importance.push_back(sum / static_cast<double>(row.size()));
  }
  report.per_position = std::move(per_position);
  report.window_count = windows.size();
  report.config = config.to_json();
  report.config["positions"] = positions;
  report.config["aggregate"] = "mean-over-horizon";
  return report;
}

}  // namespace sensbench
