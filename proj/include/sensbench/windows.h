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

#ifndef SENSBENCH_WINDOWS_H_
#define SENSBENCH_WINDOWS_H_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "sensbench/matrix.h"
#include "sensbench/panel.h"

namespace sensbench {

struct Window {
  std::size_t entity = 0;
  std::size_t start = 0;  // time index of the first lookback step
};

// Sliding (lookback, horizon) pairs over a shared, immutable panel. Inputs and
// targets are views into the panel tensor: the input of window w covers times
// [start, start + lookback) and its target [start + lookback,
// start + lookback + horizon).
class WindowSet {
 public:
  WindowSet(std::shared_ptr<const Panel> panel, std::size_t lookback,
            std::size_t horizon, std::vector<Window> windows);

  std::size_t size() const { return windows_.size(); }
  bool empty() const { return windows_.empty(); }
  std::size_t lookback() const { return lookback_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t num_features() const { return panel_->num_features(); }

  const Panel& panel() const { return *panel_; }
  const std::shared_ptr<const Panel>& panel_ptr() const { return panel_; }
  const Window& operator[](std::size_t i) const { return windows_[i]; }
  std::span<const Window> windows() const { return windows_; }

  MatrixView input(std::size_t i) const;
  std::span<const double> target(std::size_t i) const;

 private:
  std::shared_ptr<const Panel> panel_;
  std::size_t lookback_;
  std::size_t horizon_;
  std::vector<Window> windows_;
};

// Every window of every entity, ordered by (entity, start). Entities shorter
// than lookback + horizon contribute none.
//   ConfigError:          lookback or horizon is zero.
//   EmptyWindowSetError:  no entity yields a window.
WindowSet make_windows(std::shared_ptr<const Panel> panel, std::size_t lookback,
                       std::size_t horizon);

// Population std of every target value across all windows; the output scale
// used by the scaled Morris index.
double target_std(const WindowSet& windows);

}  // namespace sensbench

#endif  // SENSBENCH_WINDOWS_H_
