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

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "sensbench/error.h"
#include "sensbench/panel.h"
#include "sensbench/synth.h"
#include "test_util.h"

using namespace sensbench;
using sensbench::testing::TempDir;

namespace {

std::filesystem::path write_text(const TempDir& dir, const std::string& name,
                                 const std::string& text) {
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}

const char* kSmallCsv =
    "entity,date,target,a,b\n"
    "e2,2020-03-04,10,1,5\n"
    "e2,2020-03-05,11,2,5\n"
    "e2,2020-03-06,12,3,5\n"
    "e1,2020-03-04,20,4,7\n"
    "e1,2020-03-05,21,5,7\n"
    "e1,2020-03-06,22,6,7\n";

}  // namespace

TEST_CASE("load_panel reads a long-form CSV into entity x time x feature") {
  TempDir dir;
  const Panel p = load_panel(write_text(dir, "p.csv", kSmallCsv), PanelSchema{});
  REQUIRE(p.num_entities() == 2);
  REQUIRE(p.num_times() == 3);
  REQUIRE(p.num_features() == 2);
  CHECK(p.values.size() == 2 * 3 * 2);
  CHECK(p.entities == std::vector<std::string>{"e1", "e2"});
  CHECK(p.features == std::vector<std::string>{"a", "b"});
  CHECK(format_date(p.timestamps.front()) == "2020-03-04");
  CHECK(p.value(0, 2, 0) == 6.0);
  CHECK(p.value(1, 1, 1) == 5.0);
  CHECK(p.target_at(1, 0) == 10.0);
}

TEST_CASE("load_panel schema mapping") {
  TempDir dir;
  const auto path = write_text(dir, "p.csv",
                               "county,day,cases,x,ignored,y\n"
                               "c,2020-01-01,1,1,9,2\n"
                               "c,2020-01-02,1,1,9,3\n");
  PanelSchema schema;
  schema.entity_column = "county";
  schema.date_column = "day";
  schema.target_column = "cases";
  schema.feature_columns = {"y", "x"};
  schema.static_features = {"x"};
  const Panel p = load_panel(path, schema);
  CHECK(p.features == std::vector<std::string>{"y", "x"});
  CHECK(p.static_mask == std::vector<bool>{false, true});
  CHECK(p.value(0, 1, 0) == 3.0);

  schema.target_column = "deaths";
  CHECK_THROWS_WITH_AS(load_panel(path, schema), doctest::Contains("deaths"), SchemaError);
}

TEST_CASE("load_panel rejects gaps and duplicates") {
  TempDir dir;
  const auto gap = write_text(dir, "gap.csv",
                              "entity,date,target,a\n"
                              "e,2020-03-04,1,1\n"
                              "e,2020-03-06,1,1\n");
  CHECK_THROWS_WITH_AS(load_panel(gap, PanelSchema{}), doctest::Contains("non-uniform spacing"),
                       DataError);
  const auto dup = write_text(dir, "dup.csv",
                              "entity,date,target,a\n"
                              "e,2020-03-04,1,1\n"
                              "e,2020-03-04,1,2\n");
  CHECK_THROWS_WITH_AS(load_panel(dup, PanelSchema{}), doctest::Contains("duplicate"), DataError);
}

TEST_CASE("missing values follow the fill policy") {
  TempDir dir;
  const auto path = write_text(dir, "na.csv",
                               "entity,date,target,a\n"
                               "e,2020-03-01,1,1\n"
                               "e,2020-03-02,2,NA\n"
                               "e,2020-03-03,3,\n"
                               "e,2020-03-04,4,7\n");
  PanelSchema schema;
  CHECK_THROWS_AS(load_panel(path, schema), DataError);
  schema.max_fill_gap = 1;
  CHECK_THROWS_AS(load_panel(path, schema), DataError);
  schema.max_fill_gap = 2;
  const Panel p = load_panel(path, schema);
  CHECK(p.value(0, 1, 0) == 1.0);
  CHECK(p.value(0, 2, 0) == 1.0);
  CHECK(p.value(0, 3, 0) == 7.0);

  const auto leading = write_text(dir, "lead.csv",
                                  "entity,date,target,a\n"
                                  "e,2020-03-01,1,nan\n"
                                  "e,2020-03-02,2,1\n");
  schema.max_fill_gap = 5;
  CHECK_THROWS_AS(load_panel(leading, schema), DataError);
}

TEST_CASE("static features must be constant within each entity") {
  TempDir dir;
  PanelSchema schema;
  schema.static_features = {"a"};
  CHECK_THROWS_WITH_AS(load_panel(write_text(dir, "p.csv", kSmallCsv), schema),
                       doctest::Contains("static feature 'a'"), DataError);
  schema.static_features = {"b"};
  const Panel p = load_panel(dir / "p.csv", schema);
  for (std::size_t e = 0; e < p.num_entities(); ++e) {
    for (std::size_t t = 0; t < p.num_times(); ++t) CHECK(p.value(e, t, 1) == p.value(e, 0, 1));
  }
}

TEST_CASE("county-scale panel: 3142 entities with 8 features") {
  TempDir dir;
  SynthConfig config;
  config.entities = 3142;
  config.days = 3;
  config.k = 8;
  config.weights = {8, 7, 6, 5, 4, 3, 2, 1};
  config.seed = 1;
  const auto [generated, truth] = synth_generate(config);
  write_panel_csv(generated, dir / "county.csv");
  const Panel p = load_panel(dir / "county.csv", PanelSchema{});
  CHECK(p.num_features() == 8);
  CHECK(p.num_entities() == 3142);
}

TEST_CASE("feature_stats examples") {
  SUBCASE("constant column") {
    const Panel p = sensbench::testing::make_panel(3, 4, 1, [](auto, auto, auto) { return 5.0; });
    const auto s = feature_stats(p);
    CHECK(s[0].mean == 5.0);
    CHECK(s[0].std == 0.0);
    CHECK(s[0].min == 5.0);
    CHECK(s[0].max == 5.0);
  }
  SUBCASE("1, 2, 3 on one entity") {
    const Panel p = sensbench::testing::make_panel(
        1, 3, 1, [](auto, std::size_t t, auto) { return static_cast<double>(t + 1); });
    const auto s = feature_stats(p);
    CHECK(s[0].mean == 2.0);
    CHECK(s[0].min == 1.0);
    CHECK(s[0].max == 3.0);
    // Population convention: sqrt(((1-2)^2 + 0 + (3-2)^2) / 3).
    CHECK(s[0].std == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(s[0].std == doctest::Approx(0.8165).epsilon(1e-4));
  }
}

TEST_CASE("feature_stats invariants on random panels") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 100; ++trial) {
    const double sc = scale(rng);
    const bool constant = trial % 7 == 0;
    std::normal_distribution<double> normal(sc, sc);
    const Panel p = sensbench::testing::make_panel(
        static_cast<std::size_t>(size(rng)), static_cast<std::size_t>(size(rng)), 3,
        [&](auto, auto, auto) { return constant ? sc : normal(rng); });
    const auto stats = feature_stats(p);
    for (const auto& s : stats.features) {
      CHECK(s.min <= s.mean);
      CHECK(s.mean <= s.max);
      CHECK(s.std >= 0.0);
      CHECK((s.std == 0.0) == (s.min == s.max));
    }
  }
}

TEST_CASE("standardize_features yields zero mean and unit std") {
  Panel p = sensbench::testing::random_panel(4, 20, 3, 9);
  for (auto& v : p.values) v = 3.0 * v + 10.0;
  standardize_features(p);
  for (const auto& s : feature_stats(p).features) {
    CHECK(std::abs(s.mean) < 1e-12);
    CHECK(s.std == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("CSV round trip is bitwise exact") {
  TempDir dir;
  SynthConfig config;
  config.entities = 7;
  config.days = 11;
  config.k = 4;
  config.weights = {1, -2, 0.5, 3};
  config.static_features = std::vector<std::size_t>{1};
  config.seed = 99;
  const auto [panel, truth] = synth_generate(config);
  write_panel_csv(panel, dir / "rt.csv");
  PanelSchema schema;
  schema.static_features = {"x2"};
  const Panel back = load_panel(dir / "rt.csv", schema);
  CHECK(back.entities == panel.entities);
  CHECK(back.timestamps == panel.timestamps);
  CHECK(back.features == panel.features);
  CHECK(back.values == panel.values);
  CHECK(back.target == panel.target);
  CHECK(back.static_mask == panel.static_mask);
}

TEST_CASE("per-entity z-score of the target") {
  TempDir dir;
  PanelSchema schema;
  schema.zscore_target = true;
  const Panel p = load_panel(write_text(dir, "p.csv", kSmallCsv), schema);
  // Target per entity is (c, c+1, c+2): z-scores are (-s, 0, s), s = sqrt(3/2).
  const double s = std::sqrt(1.5);
  for (std::size_t e = 0; e < 2; ++e) {
    CHECK(p.target_at(e, 0) == doctest::Approx(-s).epsilon(1e-12));
    CHECK(p.target_at(e, 1) == doctest::Approx(0.0));
    CHECK(p.target_at(e, 2) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("dates") {
  CHECK(format_date(parse_date("2020-02-29")) == "2020-02-29");
  CHECK((parse_date("2020-03-01") - parse_date("2020-02-28")).count() == 2);
  CHECK_THROWS_AS(parse_date("2021-02-29"), DataError);
  CHECK_THROWS_AS(parse_date("03/01/2020"), DataError);
}
