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

#ifndef SENSBENCH_RANK_H_
#define SENSBENCH_RANK_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace sensbench {

struct SensitivityReport;
struct GroundTruthRanking;

// Ranking of k features, rank 1 = most important. Tied scores share the
// average of the ranks they span, so the ranks always sum to k(k+1)/2.
struct RankVector {
  std::vector<double> ranks;

  std::size_t size() const { return ranks.size(); }
  bool has_ties() const;
  bool operator==(const RankVector&) const = default;
};

// Ranks scores in descending order. Only bitwise-equal scores tie.
// Throws InputError on a non-finite score.
RankVector rank(std::span<const double> scores);

// Tie-correct Spearman rho: Pearson correlation of the rank values.
// Throws UndefinedCorrelationError when either side has zero variance and
// InputError on a size mismatch or k < 2.
double spearman(const RankVector& a, const RankVector& b);

// 1 - 6 sum(d^2) / (k (k^2 - 1)). Only valid without ties; throws InputError
// if either side has ties. Kept as an independent cross-check of spearman().
double spearman_no_ties(const RankVector& a, const RankVector& b);

struct CellLabel {
  std::string model;
  std::string method;
  bool operator==(const CellLabel&) const = default;
};

// Pairwise Spearman matrix over a list of reports. Entries whose correlation
// is undefined (a fully tied ranking) are NaN and listed in `undefined`.
struct CorrelationMatrix {
  std::vector<CellLabel> labels;
  std::vector<double> values;  // row-major n x n
  std::vector<std::pair<std::size_t, std::size_t>> undefined;

  std::size_t size() const { return labels.size(); }
  double at(std::size_t i, std::size_t j) const {
    return values[i * labels.size() + j];
  }

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// Throws InputError naming the first report whose feature list differs.
CorrelationMatrix agreement_matrix(std::span<const SensitivityReport> reports);

// Spearman rho between the report's ranking and the ground truth.
double accuracy(const SensitivityReport& report,
                const GroundTruthRanking& truth);

// Shortest round-trip decimal text for a double ("NaN" for NaN).
std::string format_double(double value);

}  // namespace sensbench

#endif  // SENSBENCH_RANK_H_
