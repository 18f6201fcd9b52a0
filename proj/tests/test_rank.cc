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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "sensbench/error.h"
#include "sensbench/rank.h"
#include "sensbench/sensitivity.h"
#include "sensbench/synth.h"

using namespace sensbench;

namespace {

RankVector rv(std::vector<double> r) { return RankVector{std::move(r)}; }

SensitivityReport ablation_report(std::string model, std::vector<double> importance,
                                  std::vector<std::string> features = {}) {
  SensitivityReport r;
  r.method = Method::kAblation;
  r.model_id = std::move(model);
  if (features.empty()) {
    for (std::size_t i = 0; i < importance.size(); ++i) features.push_back("f" + std::to_string(i));
  }
  r.features = std::move(features);
  r.importance = std::move(importance);
  return r;
}

std::vector<double> permutation(std::size_t k, std::mt19937_64& rng) {
  std::vector<double> p(k);
  std::iota(p.begin(), p.end(), 1.0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST_CASE("rank orders descending with average ties") {
  CHECK(rank(std::vector<double>{0.9, 0.1, 0.5}).ranks == std::vector<double>{1, 3, 2});
  CHECK(rank(std::vector<double>{0.5, 0.5, 0.2}).ranks == std::vector<double>{1.5, 1.5, 3});
  CHECK(rank(std::vector<double>{7, 7, 7, 7}).ranks == std::vector<double>{2.5, 2.5, 2.5, 2.5});
  CHECK(rank(std::vector<double>{1, 3, 3, 3, 0}).ranks == std::vector<double>{4, 2, 2, 2, 5});
}

TEST_CASE("rank rejects non-finite scores") {
  CHECK_THROWS_AS(rank(std::vector<double>{1.0, std::nan("")}), InputError);
  CHECK_THROWS_AS(rank(std::vector<double>{INFINITY, 1.0}), InputError);
}

TEST_CASE("rank ties only on bitwise-equal scores") {
  const double a = 0.1 + 0.2;
  const auto r = rank(std::vector<double>{a, 0.3});
  CHECK(r.ranks == std::vector<double>{1, 2});
}

TEST_CASE("rank sum is k(k+1)/2 with and without ties") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> level(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 12);
    std::vector<double> scores(k);
    for (auto& s : scores) s = static_cast<double>(level(rng));
    const auto r = rank(scores);
    const double sum = std::accumulate(r.ranks.begin(), r.ranks.end(), 0.0);
    CHECK(sum == doctest::Approx(k * (k + 1) / 2.0).epsilon(1e-15));
  }
}

TEST_CASE("spearman reference values") {
  CHECK(spearman(rv({1, 2, 3, 4, 5}), rv({1, 2, 3, 4, 5})) == 1.0);
  CHECK(spearman(rv({1, 2, 3}), rv({3, 2, 1})) == -1.0);
  // 1 - 6 * 4 / (4 * 15) = 0.6
  CHECK(spearman(rv({1, 2, 3, 4}), rv({2, 1, 4, 3})) == 0.6);
  CHECK(spearman_no_ties(rv({1, 2, 3, 4}), rv({2, 1, 4, 3})) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("spearman with ties uses pearson on ranks") {
  // ranks a = (1.5, 1.5, 3), b = (1, 2, 3): centred a = (-.5, -.5, 1),
  // b = (-1, 0, 1); cov = 1.5, var_a = 1.5, var_b = 2 -> 1.5 / sqrt(3).
  CHECK(spearman(rv({1.5, 1.5, 3}), rv({1, 2, 3})) == doctest::Approx(1.5 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(spearman_no_ties(rv({1.5, 1.5, 3}), rv({1, 2, 3})), InputError);
}

TEST_CASE("spearman errors") {
  CHECK_THROWS_AS(spearman(rv({2, 2, 2}), rv({1, 2, 3})), UndefinedCorrelationError);
  CHECK_THROWS_AS(spearman(rv({1, 2}), rv({1, 2, 3})), InputError);
  CHECK_THROWS_AS(spearman(rv({1}), rv({1})), InputError);
}

TEST_CASE("spearman properties on random inputs") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 10);
    std::vector<double> x(k), y(k);
    for (auto& v : x) v = normal(rng);
    for (auto& v : y) v = normal(rng);
    const auto rx = rank(x), ry = rank(y);
    const double rho = spearman(rx, ry);
    CHECK(rho >= -1.0);
    CHECK(rho <= 1.0);
    CHECK(rho == spearman(ry, rx));
    // Strictly monotone transform of the scores leaves rho unchanged.
    std::vector<double> tx(k);
    std::transform(x.begin(), x.end(), tx.begin(), [](double v) { return std::exp(3 * v) + 1; });
    CHECK(spearman(rank(tx), ry) == rho);
  }
}

TEST_CASE("tie-correct and shortcut formulas agree on tie-free permutations") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 15);
    const auto a = rv(permutation(k, rng));
    const auto b = rv(permutation(k, rng));
    CHECK(std::abs(spearman(a, b) - spearman_no_ties(a, b)) <= 1e-12);
  }
}

TEST_CASE("agreement matrix") {
  SUBCASE("identical reports") {
    std::vector<SensitivityReport> reports{ablation_report("a", {3, 1, 2}),
                                           ablation_report("b", {3, 1, 2})};
    const auto m = agreement_matrix(reports);
    REQUIRE(m.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) CHECK(m.at(i, j) == 1.0);
    }
  }
  SUBCASE("reversal pair") {
    std::vector<SensitivityReport> reports{ablation_report("a", {3, 2, 1}),
                                           ablation_report("b", {1, 2, 3}),
                                           ablation_report("c", {3, 1, 2})};
    const auto m = agreement_matrix(reports);
    CHECK(m.at(0, 1) == -1.0);
    CHECK(m.at(1, 0) == -1.0);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(m.at(i, i) == 1.0);
      for (std::size_t j = 0; j < 3; ++j) CHECK(m.at(i, j) == m.at(j, i));
    }
  }
  SUBCASE("mismatched features") {
    std::vector<SensitivityReport> reports{ablation_report("a", {1, 2}, {"x", "y"}),
                                           ablation_report("b", {1, 2}, {"x", "z"})};
    CHECK_THROWS_WITH_AS(agreement_matrix(reports), doctest::Contains("b.ablation"), InputError);
  }
  SUBCASE("fully tied report is reported as undefined") {
    std::vector<SensitivityReport> reports{ablation_report("a", {1, 1, 1}),
                                           ablation_report("b", {1, 2, 3})};
    const auto m = agreement_matrix(reports);
    CHECK(std::isnan(m.at(0, 1)));
    CHECK_FALSE(m.undefined.empty());
    CHECK(m.to_json()["values"][0][1].is_null());
  }
}

TEST_CASE("agreement matrix is permutation-equivariant") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::vector<SensitivityReport> reports;
  for (int i = 0; i < 5; ++i) {
    std::vector<double> s(6);
    for (auto& v : s) v = std::abs(normal(rng));
    reports.push_back(ablation_report("m" + std::to_string(i), s));
  }
  const auto base = agreement_matrix(reports);
  std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  std::vector<SensitivityReport> shuffled;
  for (auto p : perm) shuffled.push_back(reports[p]);
  const auto moved = agreement_matrix(shuffled);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = 0; j < perm.size(); ++j) {
      CHECK(moved.at(i, j) == base.at(perm[i], perm[j]));
    }
  }
}

TEST_CASE("accuracy against ground truth") {
  GroundTruthRanking truth;
  truth.features = {"f0", "f1", "f2"};
  truth.ranks = rv({1, 2, 3});
  CHECK(accuracy(ablation_report("a", {9, 5, 1}), truth) == 1.0);
  CHECK(accuracy(ablation_report("a", {1, 5, 9}), truth) == -1.0);
  CHECK_THROWS_AS(accuracy(ablation_report("a", {1, 2}, {"f0", "f1"}), truth), InputError);
}

TEST_CASE("Monte-Carlo null: random rankings average to rho ~ 0") {
  GroundTruthRanking truth;
  for (int f = 0; f < 8; ++f) truth.features.push_back("f" + std::to_string(f));
  truth.ranks = rv({1, 2, 3, 4, 5, 6, 7, 8});
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> scores(8);
    for (auto& s : scores) s = u(rng);
    sum += accuracy(ablation_report("r", scores, truth.features), truth);
  }
  CHECK(std::abs(sum / 1000.0) <= 0.05);
}

TEST_CASE("correlation matrix CSV layout") {
  std::vector<SensitivityReport> reports{ablation_report("a", {3, 1, 2}),
                                         ablation_report("b", {1, 2, 3})};
  const std::string csv = agreement_matrix(reports).to_csv();
  CHECK(csv.rfind("label,a.ablation,b.ablation\n", 0) == 0);
  CHECK(csv.find("a.ablation,1,-0.5\n") != std::string::npos);
}
