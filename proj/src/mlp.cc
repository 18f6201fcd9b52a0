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

#include "sensbench/mlp.h"

#include <cmath>
#include <random>

#include "sensbench/error.h"
#include "train_util.h"

namespace sensbench {
namespace {

// Per-feature mean/std over every input cell of every window.
void input_moments(const WindowSet& windows, std::vector<double>& shift,
                   std::vector<double>& scale) {
  const std::size_t k = windows.num_features();
  shift.assign(k, 0.0);
  scale.assign(k, 1.0);
  std::vector<double> ss(k, 0.0);
  const double cells = static_cast<double>(windows.size() * windows.lookback());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const MatrixView x = windows.input(i);
    for (std::size_t t = 0; t < x.rows(); ++t) {
      for (std::size_t f = 0; f < k; ++f) shift[f] += x(t, f);
    }
  }
  for (double& s : shift) s /= cells;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const MatrixView x = windows.input(i);
    for (std::size_t t = 0; t < x.rows(); ++t) {
      for (std::size_t f = 0; f < k; ++f) {
        ss[f] += (x(t, f) - shift[f]) * (x(t, f) - shift[f]);
      }
    }
  }
  for (std::size_t f = 0; f < k; ++f) {
    const double sd = std::sqrt(ss[f] / cells);
    scale[f] = sd > 0.0 ? sd : 1.0;
  }
}

}  // namespace

MlpModel::MlpModel(ModelSpec spec, Params params)
    : spec_(spec), params_(std::move(params)) {
  const std::size_t n_in = spec_.lookback * spec_.num_features;
  const std::size_t hidden = params_.hidden;
  if (hidden == 0 || params_.w1.size() != hidden * n_in ||
      params_.b1.size() != hidden || params_.w2.size() != spec_.horizon * hidden ||
      params_.b2.size() != spec_.horizon ||
      params_.input_shift.size() != spec_.num_features ||
      params_.input_scale.size() != spec_.num_features) {
    throw ConfigError("mlp parameter shapes do not match spec " + spec_.to_string());
  }
  for (double s : params_.input_scale) {
    if (!(s > 0.0)) throw ConfigError("mlp input scales must be positive");
  }
  if (!(params_.output_scale > 0.0)) throw ConfigError("mlp output scale must be positive");
}

std::vector<double> MlpModel::forward(MatrixView input) const {
  const std::size_t k = spec_.num_features;
  const std::size_t n_in = spec_.lookback * k;
  std::vector<double> x(n_in);
  for (std::size_t j = 0; j < n_in; ++j) {
    const std::size_t f = j % k;
    x[j] = (input.data()[j] - params_.input_shift[f]) / params_.input_scale[f];
  }
  std::vector<double> z(params_.hidden);
  for (std::size_t u = 0; u < params_.hidden; ++u) {
    const double* w = &params_.w1[u * n_in];
    double a = params_.b1[u];
    for (std::size_t j = 0; j < n_in; ++j) a += w[j] * x[j];
    z[u] = std::tanh(a);
  }
  std::vector<double> out(spec_.horizon);
  for (std::size_t h = 0; h < spec_.horizon; ++h) {
    const double* w = &params_.w2[h * params_.hidden];
    double o = params_.b2[h];
    for (std::size_t u = 0; u < params_.hidden; ++u) o += w[u] * z[u];
    out[h] = o * params_.output_scale + params_.output_shift;
  }
  return out;
}

nlohmann::json MlpModel::to_json() const {
  return {{"kind", model_kind_name(kind())},
          {"lookback", spec_.lookback},
          {"horizon", spec_.horizon},
          {"k", spec_.num_features},
          {"hidden", params_.hidden},
          {"w1", params_.w1},
          {"b1", params_.b1},
          {"w2", params_.w2},
          {"b2", params_.b2},
          {"input_shift", params_.input_shift},
          {"input_scale", params_.input_scale},
          {"output_shift", params_.output_shift},
          {"output_scale", params_.output_scale}};
}

std::unique_ptr<MlpModel> MlpModel::from_json(const nlohmann::json& doc) {
  ModelSpec spec{doc.at("lookback").get<std::size_t>(),
                 doc.at("horizon").get<std::size_t>(),
                 doc.at("k").get<std::size_t>()};
  Params p;
  p.hidden = doc.at("hidden").get<std::size_t>();
  p.w1 = doc.at("w1").get<std::vector<double>>();
  p.b1 = doc.at("b1").get<std::vector<double>>();
  p.w2 = doc.at("w2").get<std::vector<double>>();
  p.b2 = doc.at("b2").get<std::vector<double>>();
  p.input_shift = doc.at("input_shift").get<std::vector<double>>();
  p.input_scale = doc.at("input_scale").get<std::vector<double>>();
  p.output_shift = doc.at("output_shift").get<double>();
  p.output_scale = doc.at("output_scale").get<double>();
  return std::make_unique<MlpModel>(spec, std::move(p));
}

std::unique_ptr<MlpModel> MlpModel::fit(const WindowSet& windows,
    const TrainConfig& config, int epochs) {
  const ModelSpec spec{windows.lookback(), windows.horizon(),
                       windows.num_features()};
  const std::size_t k = spec.num_features;
  const std::size_t n_in = spec.lookback * k;
  const std::size_t horizon = spec.horizon;
  const auto hidden = static_cast<std::size_t>(config.hidden_width);
  const std::size_t count = windows.size();

  Params p;
  p.hidden = hidden;
  input_moments(windows, p.input_shift, p.input_scale);
  {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < count; ++i) {
      for (double v : windows.target(i)) {
        sum += v;
        ++n;
      }
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      for (double v : windows.target(i)) ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    p.output_shift = mean;
    p.output_scale = sd > 0.0 ? sd : 1.0;
  }
  if (!config.fit_bias) {
    std::fill(p.input_shift.begin(), p.input_shift.end(), 0.0);
    p.output_shift = 0.0;
  }

  // Normalized copies of inputs and targets.
  std::vector<double> xs(count * n_in);
  std::vector<double> ys(count * horizon);
  for (std::size_t i = 0; i < count; ++i) {
    const MatrixView x = windows.input(i);
    for (std::size_t j = 0; j < n_in; ++j) {
      xs[i * n_in + j] = (x.data()[j] - p.input_shift[j % k]) / p.input_scale[j % k];
    }
    const auto y = windows.target(i);
    for (std::size_t h = 0; h < horizon; ++h) {
      ys[i * horizon + h] = (y[h] - p.output_shift) / p.output_scale;
    }
  }

  std::mt19937_64 rng(config.seed);
  p.w1.resize(hidden * n_in);
  p.b1.assign(hidden, 0.0);
  p.w2.resize(horizon * hidden);
  p.b2.assign(horizon, 0.0);
  internal::init_uniform(p.w1, rng);
  internal::init_uniform(p.w2, rng);
  if (config.fit_bias) {
    internal::init_uniform(p.b1, rng);
    internal::init_uniform(p.b2, rng);
  }

  std::vector<double> g_w1(p.w1.size()), g_b1(hidden), g_w2(p.w2.size()), g_b2(horizon);
  std::vector<double> z(hidden), dz(hidden), d_out(horizon);
  std::vector<std::size_t> order(count);
  const auto batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= epochs; ++epoch) {
    internal::shuffle_order(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < count; begin += batch) {
      const std::size_t end = std::min(count, begin + batch);
      const double scale = 2.0 / static_cast<double>((end - begin) * horizon);
      std::fill(g_w1.begin(), g_w1.end(), 0.0);
      std::fill(g_b1.begin(), g_b1.end(), 0.0);
      std::fill(g_w2.begin(), g_w2.end(), 0.0);
      std::fill(g_b2.begin(), g_b2.end(), 0.0);
      for (std::size_t b = begin; b < end; ++b) {
        const std::size_t i = order[b];
        const double* x = &xs[i * n_in];
        const double* y = &ys[i * horizon];
        for (std::size_t u = 0; u < hidden; ++u) {
          const double* w = &p.w1[u * n_in];
          double a = p.b1[u];
          for (std::size_t j = 0; j < n_in; ++j) a += w[j] * x[j];
          z[u] = std::tanh(a);
        }
        std::fill(dz.begin(), dz.end(), 0.0);
        for (std::size_t h = 0; h < horizon; ++h) {
          const double* w = &p.w2[h * hidden];
          double o = p.b2[h];
          for (std::size_t u = 0; u < hidden; ++u) o += w[u] * z[u];
          const double err = o - y[h];
          epoch_loss += err * err;
          d_out[h] = err * scale;
          double* gw = &g_w2[h * hidden];
          for (std::size_t u = 0; u < hidden; ++u) {
            gw[u] += d_out[h] * z[u];
            dz[u] += d_out[h] * w[u];
          }
          g_b2[h] += d_out[h];
        }
        for (std::size_t u = 0; u < hidden; ++u) {
          const double da = dz[u] * (1.0 - z[u] * z[u]);
          double* gw = &g_w1[u * n_in];
          for (std::size_t j = 0; j < n_in; ++j) gw[j] += da * x[j];
          g_b1[u] += da;
        }
      }
      internal::sgd_step(p.w1, g_w1, config.learning_rate, config.l2);
      internal::sgd_step(p.w2, g_w2, config.learning_rate, config.l2);
      if (config.fit_bias) {
        internal::sgd_step(p.b1, g_b1, config.learning_rate, 0.0);
        internal::sgd_step(p.b2, g_b2, config.learning_rate, 0.0);
      }
    }
    internal::check_epoch_loss(epoch_loss, epoch);
  }
  internal::check_finite(p.w1, "w1");
  internal::check_finite(p.w2, "w2");
  internal::check_finite(p.b1, "b1");
  internal::check_finite(p.b2, "b2");
  return std::make_unique<MlpModel>(spec, std::move(p));
}

}  // namespace sensbench
