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

#ifndef SENSBENCH_TESTS_TEST_UTIL_H_
#define SENSBENCH_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "sensbench/linear_decomp.h"
#include "sensbench/panel.h"
#include "sensbench/windows.h"

namespace sensbench::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("sensbench-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Panel with `entities` x `days` x `k` values from `fill(e, t, f)` and a zero
// target; no static features.
template <typename Fill>
Panel make_panel(std::size_t entities, std::size_t days, std::size_t k, Fill fill) {
  Panel p;
  for (std::size_t e = 0; e < entities; ++e) p.entities.push_back("e" + std::to_string(e));
  const Date start = parse_date("2020-03-01");
  for (std::size_t t = 0; t < days; ++t) {
    p.timestamps.push_back(start + std::chrono::days{static_cast<int>(t)});
  }
  for (std::size_t f = 0; f < k; ++f) p.features.push_back("f" + std::to_string(f));
  p.static_mask.assign(k, false);
  p.values.resize(entities * days * k);
  p.target.assign(entities * days, 0.0);
  for (std::size_t e = 0; e < entities; ++e) {
    for (std::size_t t = 0; t < days; ++t) {
      for (std::size_t f = 0; f < k; ++f) p.values[(e * days + t) * k + f] = fill(e, t, f);
    }
  }
  return p;
}

inline Panel random_panel(std::size_t entities, std::size_t days, std::size_t k,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  return make_panel(entities, days, k, [&](auto, auto, auto) { return normal(rng); });
}

inline WindowSet windows_of(Panel panel, std::size_t lookback, std::size_t horizon) {
  return make_windows(std::make_shared<const Panel>(std::move(panel)), lookback, horizon);
}

// Linear-decomp model whose aggregate weight for feature f (mean over
// horizon of the summed trend weights) is `aggregate[f]`: every trend
// weight of feature f is aggregate[f] / lookback. Seasonal weights are
// `seasonal` everywhere, bias zero.
inline LinearDecompModel linear_model(std::size_t lookback, std::size_t horizon,
                                      const std::vector<double>& aggregate,
                                      int kernel = 1, double seasonal = 0.0) {
  const std::size_t k = aggregate.size();
  std::vector<double> tw(horizon * lookback * k);
  for (std::size_t h = 0; h < horizon; ++h) {
    for (std::size_t t = 0; t < lookback; ++t) {
      for (std::size_t f = 0; f < k; ++f) {
        tw[(h * lookback + t) * k + f] = aggregate[f] / static_cast<double>(lookback);
      }
    }
  }
  return LinearDecompModel(ModelSpec{lookback, horizon, k}, kernel, std::move(tw),
                           std::vector<double>(horizon * lookback * k, seasonal),
                           std::vector<double>(horizon, 0.0));
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace sensbench::testing

#endif  // SENSBENCH_TESTS_TEST_UTIL_H_
