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

#include "sensbench/rank.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sensbench/error.h"
#include "sensbench/sensitivity.h"
#include "sensbench/synth.h"

namespace sensbench {

bool RankVector::has_ties() const {
  std::vector<double> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

RankVector rank(std::span<const double> scores) {
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw InputError("cannot rank non-finite score at index " +
                       std::to_string(i));
    }
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });

  RankVector out;
  out.ranks.assign(scores.size(), 0.0);
  std::size_t pos = 0;
  while (pos < order.size()) {
    std::size_t end = pos + 1;
    while (end < order.size() && scores[order[end]] == scores[order[pos]]) {
      ++end;
    }
    // Positions pos..end-1 hold ranks pos+1..end; their average.
    const double shared = (static_cast<double>(pos + 1 + end)) / 2.0;
    for (std::size_t i = pos; i < end; ++i) out.ranks[order[i]] = shared;
    pos = end;
  }
  return out;
}

namespace {

void check_comparable(const RankVector& a, const RankVector& b) {
  if (a.size() != b.size()) {
    throw InputError("rank vectors differ in length: " +
                     std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  if (a.size() < 2) {
    throw InputError("spearman needs at least 2 ranked features");
  }
}

}  // namespace

double spearman(const RankVector& a, const RankVector& b) {
  check_comparable(a, b);
  const double n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(a.ranks.begin(), a.ranks.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.ranks.begin(), b.ranks.end(), 0.0) / n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a.ranks[i] - mean_a;
    const double db = b.ranks[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    throw UndefinedCorrelationError(
        "spearman correlation undefined: a ranking has zero variance");
  }
  const double rho = cov / std::sqrt(var_a * var_b);
  return std::clamp(rho, -1.0, 1.0);
}

double spearman_no_ties(const RankVector& a, const RankVector& b) {
  check_comparable(a, b);
  if (a.has_ties() || b.has_ties()) {
    throw InputError("no-ties spearman formula applied to tied ranks");
  }
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.ranks[i] - b.ranks[i];
    sum_d2 += d * d;
  }
  const double n = static_cast<double>(a.size());
  return 1.0 - 6.0 * sum_d2 / (n * (n * n - 1.0));
}

std::string format_double(double value) {
  if (std::isnan(value)) return "NaN";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

nlohmann::json CorrelationMatrix::to_json() const {
  nlohmann::json labels_json = nlohmann::json::array();
  for (const auto& label : labels) {
    labels_json.push_back({{"model", label.model}, {"method", label.method}});
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < size(); ++j) {
      const double v = at(i, j);
      if (std::isnan(v)) {
        row.push_back(nullptr);
      } else {
        row.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  nlohmann::json undefined_json = nlohmann::json::array();
  for (const auto& [i, j] : undefined) {
    undefined_json.push_back({i, j});
  }
  return {{"labels", labels_json},
          {"values", rows},
          {"undefined", undefined_json}};
}

std::string CorrelationMatrix::to_csv() const {
  std::ostringstream out;
  out << "label";
  for (const auto& label : labels) out << ',' << label.model << '.' << label.method;
  out << '\n';
  for (std::size_t i = 0; i < size(); ++i) {
    out << labels[i].model << '.' << labels[i].method;
    for (std::size_t j = 0; j < size(); ++j) out << ',' << format_double(at(i, j));
    out << '\n';
  }
  return out.str();
}

CorrelationMatrix agreement_matrix(std::span<const SensitivityReport> reports) {
  CorrelationMatrix out;
  if (reports.empty()) return out;
  const auto& features = reports.front().features;
  for (const auto& report : reports) {
    if (report.features != features) {
      throw InputError("report " + report.model_id + "." +
                       method_name(report.method) +
                       " has a different feature list than " +
                       reports.front().model_id + "." +
                       method_name(reports.front().method));
    }
  }

  const std::size_t n = reports.size();
  std::vector<RankVector> ranked;
  ranked.reserve(n);
  for (const auto& report : reports) {
    ranked.push_back(rank(report.scores()));
    out.labels.push_back({report.model_id, method_name(report.method)});
  }
  out.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double rho;
      try {
        rho = (i == j) ? (spearman(ranked[i], ranked[i]), 1.0)
                       : spearman(ranked[i], ranked[j]);
      } catch (const UndefinedCorrelationError&) {
        rho = std::nan("");
        out.undefined.emplace_back(i, j);
      }
      out.values[i * n + j] = rho;
      out.values[j * n + i] = rho;
    }
  }
  return out;
}

double accuracy(const SensitivityReport& report,
                const GroundTruthRanking& truth) {
  if (report.features != truth.features) {
    throw InputError("report " + report.model_id + "." +
                     method_name(report.method) +
                     " features do not match the ground-truth features");
  }
  return spearman(rank(report.scores()), truth.ranks);
}

}  // namespace sensbench
