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

#include "sensbench/linear_decomp.h"

#include <algorithm>
#include <random>

#include "sensbench/error.h"
#include "train_util.h"

namespace sensbench {

std::pair<Matrix, Matrix> decompose(MatrixView input, int kernel) {
  if (kernel < 1 || kernel % 2 == 0) {
    throw ConfigError("moving-average kernel must be odd and >= 1, got " +
                      std::to_string(kernel));
  }
  const std::size_t rows = input.rows();
  const std::size_t cols = input.cols();
  if (static_cast<std::size_t>(kernel) > rows) {
    throw ConfigError("moving-average kernel " + std::to_string(kernel) +
                      " exceeds lookback " + std::to_string(rows));
  }
  const auto half = static_cast<std::ptrdiff_t>(kernel / 2);
  const auto last = static_cast<std::ptrdiff_t>(rows) - 1;
  Matrix trend(rows, cols);
  Matrix seasonal(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      // Averaging deviations from the centre keeps constant stretches exact.
      const double centre = input(r, c);
      double dev = 0.0;
      for (std::ptrdiff_t o = -half; o <= half; ++o) {
        const auto src = std::clamp(static_cast<std::ptrdiff_t>(r) + o,
                                    std::ptrdiff_t{0}, last);
        dev += input(static_cast<std::size_t>(src), c) - centre;
      }
      trend(r, c) = centre + dev / kernel;
      seasonal(r, c) = centre - trend(r, c);
    }
  }
  return {std::move(trend), std::move(seasonal)};
}

LinearDecompModel::LinearDecompModel(ModelSpec spec, int kernel,
                                     std::vector<double> trend_w,
                                     std::vector<double> seasonal_w,
                                     std::vector<double> bias)
    : spec_(spec),
      kernel_(kernel),
      trend_w_(std::move(trend_w)),
      seasonal_w_(std::move(seasonal_w)),
      bias_(std::move(bias)) {
  const std::size_t n = spec_.horizon * spec_.lookback * spec_.num_features;
  if (trend_w_.size() != n || seasonal_w_.size() != n ||
      bias_.size() != spec_.horizon) {
    throw ConfigError("linear-decomp parameter shapes do not match spec " +
                      spec_.to_string());
  }
  if (kernel_ < 1 || kernel_ % 2 == 0 ||
      static_cast<std::size_t>(kernel_) > spec_.lookback) {
    throw ConfigError("linear-decomp kernel must be odd and <= lookback");
  }
}

std::vector<double> LinearDecompModel::forward(MatrixView input) const {
  const auto [trend, seasonal] = decompose(input, kernel_);
  const std::size_t n = spec_.lookback * spec_.num_features;
  std::vector<double> out(spec_.horizon);
  for (std::size_t h = 0; h < spec_.horizon; ++h) {
    const double* tw = &trend_w_[h * n];
    const double* sw = &seasonal_w_[h * n];
    double y = bias_[h];
    for (std::size_t j = 0; j < n; ++j) {
      y += tw[j] * trend.data()[j] + sw[j] * seasonal.data()[j];
    }
    out[h] = y;
  }
  return out;
}

nlohmann::json LinearDecompModel::to_json() const {
  return {{"kind", model_kind_name(kind())},
          {"lookback", spec_.lookback},
          {"horizon", spec_.horizon},
          {"k", spec_.num_features},
          {"kernel", kernel_},
          {"trend_weights", trend_w_},
          {"seasonal_weights", seasonal_w_},
          {"bias", bias_}};
}

std::unique_ptr<LinearDecompModel> LinearDecompModel::from_json(
    const nlohmann::json& doc) {
  ModelSpec spec{doc.at("lookback").get<std::size_t>(),
                 doc.at("horizon").get<std::size_t>(),
                 doc.at("k").get<std::size_t>()};
  return std::make_unique<LinearDecompModel>(
      spec, doc.at("kernel").get<int>(),
      doc.at("trend_weights").get<std::vector<double>>(),
      doc.at("seasonal_weights").get<std::vector<double>>(),
      doc.at("bias").get<std::vector<double>>());
}

std::unique_ptr<LinearDecompModel> LinearDecompModel::fit(const WindowSet& windows,
    const TrainConfig& config, int epochs) {
  const ModelSpec spec{windows.lookback(), windows.horizon(),
                       windows.num_features()};
  const std::size_t n = spec.lookback * spec.num_features;
  const std::size_t horizon = spec.horizon;
  const std::size_t count = windows.size();

  // The decomposition does not depend on the parameters; do it once.
  std::vector<double> trends(count * n);
  std::vector<double> seasonals(count * n);
  for (std::size_t i = 0; i < count; ++i) {
    const auto [trend, seasonal] = decompose(windows.input(i), config.moving_average_kernel);
    std::copy(trend.data().begin(), trend.data().end(), trends.begin() + static_cast<std::ptrdiff_t>(i * n));
    std::copy(seasonal.data().begin(), seasonal.data().end(), seasonals.begin() + static_cast<std::ptrdiff_t>(i * n));
  }

  std::mt19937_64 rng(config.seed);
  std::vector<double> trend_w(horizon * n);
  std::vector<double> seasonal_w(horizon * n);
  std::vector<double> bias(horizon, 0.0);
  internal::init_uniform(trend_w, rng);
  internal::init_uniform(seasonal_w, rng);
  if (config.fit_bias) internal::init_uniform(bias, rng);

  std::vector<double> g_trend(trend_w.size());
  std::vector<double> g_seasonal(seasonal_w.size());
  std::vector<double> g_bias(horizon);
  std::vector<double> err(horizon);
  std::vector<std::size_t> order(count);
  const auto batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= epochs; ++epoch) {
    internal::shuffle_order(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < count; begin += batch) {
      const std::size_t end = std::min(count, begin + batch);
      const double scale = 2.0 / static_cast<double>((end - begin) * horizon);
      std::fill(g_trend.begin(), g_trend.end(), 0.0);
      std::fill(g_seasonal.begin(), g_seasonal.end(), 0.0);
      std::fill(g_bias.begin(), g_bias.end(), 0.0);
      for (std::size_t b = begin; b < end; ++b) {
        const std::size_t i = order[b];
        const double* tr = &trends[i * n];
        const double* se = &seasonals[i * n];
        const auto target = windows.target(i);
        for (std::size_t h = 0; h < horizon; ++h) {
          const double* tw = &trend_w[h * n];
          const double* sw = &seasonal_w[h * n];
          double y = bias[h];
          for (std::size_t j = 0; j < n; ++j) y += tw[j] * tr[j] + sw[j] * se[j];
          err[h] = y - target[h];
          epoch_loss += err[h] * err[h];
        }
        for (std::size_t h = 0; h < horizon; ++h) {
          const double e = err[h] * scale;
          double* gt = &g_trend[h * n];
          double* gs = &g_seasonal[h * n];
          for (std::size_t j = 0; j < n; ++j) {
            gt[j] += e * tr[j];
            gs[j] += e * se[j];
          }
          g_bias[h] += e;
        }
      }
      internal::sgd_step(trend_w, g_trend, config.learning_rate, config.l2);
      internal::sgd_step(seasonal_w, g_seasonal, config.learning_rate, config.l2);
      if (config.fit_bias) internal::sgd_step(bias, g_bias, config.learning_rate, 0.0);
    }
    internal::check_epoch_loss(epoch_loss, epoch);
  }
  internal::check_finite(trend_w, "trend_weights");
  internal::check_finite(seasonal_w, "seasonal_weights");
  internal::check_finite(bias, "bias");
  return std::make_unique<LinearDecompModel>(spec, config.moving_average_kernel,
                                             std::move(trend_w),
                                             std::move(seasonal_w),
                                             std::move(bias));
}

}  // namespace sensbench
