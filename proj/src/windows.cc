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

#include "sensbench/windows.h"

#include <cmath>
#include <string>
#include <utility>

#include "sensbench/error.h"

namespace sensbench {

WindowSet::WindowSet(std::shared_ptr<const Panel> panel, std::size_t lookback,
                     std::size_t horizon, std::vector<Window> windows)
    : panel_(std::move(panel)),
      lookback_(lookback),
      horizon_(horizon),
      windows_(std::move(windows)) {
  const std::size_t n_t = panel_->num_times();
  for (const auto& w : windows_) {
    if (w.entity >= panel_->num_entities() || w.start + lookback_ + horizon_ > n_t) {
      throw ContractError("window out of panel bounds");
    }
  }
}

MatrixView WindowSet::input(std::size_t i) const {
  const Window& w = windows_[i];
  const std::size_t k = panel_->num_features();
  const std::size_t offset = (w.entity * panel_->num_times() + w.start) * k;
  return MatrixView(std::span<const double>(panel_->values).subspan(offset, lookback_ * k),
                    lookback_, k);
}

std::span<const double> WindowSet::target(std::size_t i) const {
  const Window& w = windows_[i];
  const std::size_t offset = w.entity * panel_->num_times() + w.start + lookback_;
  return std::span<const double>(panel_->target).subspan(offset, horizon_);
}

WindowSet make_windows(std::shared_ptr<const Panel> panel, std::size_t lookback,
                       std::size_t horizon) {
  if (lookback == 0 || horizon == 0) {
    throw ConfigError("lookback and horizon must be >= 1");
  }
  const std::size_t n_t = panel->num_times();
  std::vector<Window> windows;
  if (n_t >= lookback + horizon) {
    const std::size_t per_entity = n_t - lookback - horizon + 1;
    windows.reserve(panel->num_entities() * per_entity);
    for (std::size_t e = 0; e < panel->num_entities(); ++e) {
      for (std::size_t s = 0; s < per_entity; ++s) windows.push_back({e, s});
    }
  }
  if (windows.empty()) {
    throw EmptyWindowSetError(
        "no window fits: series length " + std::to_string(n_t) +
        " < lookback " + std::to_string(lookback) + " + horizon " +
        std::to_string(horizon));
  }
  return WindowSet(std::move(panel), lookback, horizon, std::move(windows));
}

double target_std(const WindowSet& windows) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (double v : windows.target(i)) {
      sum += v;
      ++n;
    }
  }
  if (n == 0) return 0.0;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (double v : windows.target(i)) ss += (v - mean) * (v - mean);
  }
  return std::sqrt(ss / static_cast<double>(n));
}

}  // namespace sensbench
