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

#ifndef SENSBENCH_SRC_TRAIN_UTIL_H_
#define SENSBENCH_SRC_TRAIN_UTIL_H_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sensbench/error.h"

namespace sensbench::internal {

inline void init_uniform(std::span<double> params, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-0.05, 0.05);
  for (double& p : params) p = dist(rng);
}

// Fresh shuffled sample order for one epoch.
inline void shuffle_order(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
}

inline void check_epoch_loss(double loss, int epoch) {
  if (!std::isfinite(loss)) {
    throw TrainingError("training diverged: non-finite loss at epoch " +
                        std::to_string(epoch));
  }
}

inline void check_finite(std::span<const double> params, const char* name) {
  for (double p : params) {
    if (!std::isfinite(p)) {
      throw TrainingError(std::string("trained parameters '") + name +
                          "' are not finite");
    }
  }
}

// p -= lr * (g + 2 * l2 * p)
inline void sgd_step(std::span<double> params, std::span<const double> grads,
                     double lr, double l2) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i] -= lr * (grads[i] + 2.0 * l2 * params[i]);
  }
}

}  // namespace sensbench::internal

#endif  // SENSBENCH_SRC_TRAIN_UTIL_H_
