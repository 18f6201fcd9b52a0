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

#include "doctest.h"
#include "sensbench/error.h"
#include "sensbench/run_config.h"
#include "sensbench/toml.h"
#include "test_util.h"

using namespace sensbench;
using nlohmann::json;

namespace {

RunConfig parse(const std::string& text, std::optional<std::uint64_t> seed = {}) {
  return parse_run_config(parse_toml(text), "/base", seed);
}

const char* kGrid = R"(
seed = 7
lookback = 5
horizon = 3

[data]
source = "synth"
entities = 10
days = 20
k = 3

[[models]]
id = "lin"
kind = "linear-decomp"
epochs = 5

[[models]]
kind = "mlp"
hidden_width = 4

[[methods]]
method = "morris"
samples_r = 10

[[methods]]
method = "occlusion"
patch_length = 2
baseline = "zero"
)";

}  // namespace

TEST_CASE("toml scalars, tables and arrays") {
  const json doc = parse_toml(R"(
# comment
title = "bench"   # trailing comment
literal = 'C:\path'
escaped = "a\"b\n\u00e9"
int = -42
big = 1_000
float = 2.5e-3
inf = inf
neg = -inf
yes = true
list = [1, 2,
        3,]
nested = [[1, 2], ["x"]]
inline = { a = 1, b.c = "d" }
"quoted key" = 1
dotted.key = 2

[table.sub]
x = 1

[[items]]
name = "first"
[items.extra]
flag = false

[[items]]
name = "second"
)");
  CHECK(doc["title"] == "bench");
  CHECK(doc["literal"] == "C:\\path");
  CHECK(doc["escaped"] == "a\"b\n\xc3\xa9");
  CHECK(doc["int"] == -42);
  CHECK(doc["big"] == 1000);
  CHECK(doc["float"].get<double>() == 2.5e-3);
  CHECK(std::isinf(doc["inf"].get<double>()));
  CHECK(doc["neg"].get<double>() < 0);
  CHECK(doc["yes"] == true);
  CHECK(doc["list"] == json({1, 2, 3}));
  CHECK(doc["nested"][1][0] == "x");
  CHECK(doc["inline"]["b"]["c"] == "d");
  CHECK(doc["quoted key"] == 1);
  CHECK(doc["dotted"]["key"] == 2);
  CHECK(doc["table"]["sub"]["x"] == 1);
  REQUIRE(doc["items"].size() == 2);
  CHECK(doc["items"][0]["extra"]["flag"] == false);
  CHECK(doc["items"][1]["name"] == "second");
}

TEST_CASE("toml errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_toml("a = 1\nb = \n"), doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_toml("a = \"open\n"), ConfigError);
  CHECK_THROWS_AS(parse_toml("[t]\n[t]\n"), ConfigError);
  CHECK_THROWS_AS(parse_toml("[t.u]\n[t.u]\n"), ConfigError);
  const json parent = parse_toml("[a.b]\nx = 1\n[a]\ny = 2\n");
  CHECK(parent["a"]["b"]["x"] == 1);
  CHECK(parent["a"]["y"] == 2);
  CHECK_THROWS_AS(parse_toml("a = [1, 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_toml("a = 1979-05-27\n"), ConfigError);
  CHECK_THROWS_AS(parse_toml("just words\n"), ConfigError);
}

TEST_CASE("run config defaults") {
  const RunConfig c = parse("[[models]]\nkind = \"mlp\"\n[[methods]]\nmethod = \"ablation\"\n");
  CHECK(c.lookback == 13);
  CHECK(c.horizon == 15);
  CHECK(c.seed == 0);
  CHECK(c.data.kind == DataSource::Kind::kSynth);
  CHECK(c.data.synth.k == 8);
  CHECK(c.data.synth.weights == std::vector<double>{8, 7, 6, 5, 4, 3, 2, 1});
  CHECK_FALSE(c.data.synth.static_features.has_value());
  REQUIRE(c.models.size() == 1);
  CHECK(c.models[0].id == "mlp");
  CHECK(c.models[0].train.epochs == TrainConfig{}.epochs);
  CHECK(c.methods[0].baseline.mode == BaselineMode::kFeatureMean);
  CHECK(c.methods[0].baseline.scope == BaselineScope::kWholeWindow);
}

TEST_CASE("run config grid") {
  const RunConfig c = parse(kGrid);
  CHECK(c.seed == 7);
  CHECK(c.lookback == 5);
  CHECK(c.data.synth.entities == 10);
  CHECK(c.data.synth.weights == std::vector<double>{3, 2, 1});
  REQUIRE(c.models.size() == 2);
  CHECK(c.models[0].id == "lin");
  CHECK(c.models[0].train.epochs == 5);
  CHECK(c.models[1].id == "mlp");
  CHECK(c.models[1].train.hidden_width == 4);
  REQUIRE(c.methods.size() == 2);
  CHECK(c.methods[0].morris.samples_r == 10);
  CHECK(c.methods[0].morris.delta_mode == DeltaMode::kRelativeToStd);
  CHECK(c.methods[1].occlusion.patch_length == 2);
  CHECK(c.methods[1].occlusion.baseline.mode == BaselineMode::kZero);
}

TEST_CASE("component seeds inherit the global seed unless set") {
  const RunConfig c = parse(kGrid);
  CHECK(c.data.synth.seed == 7);
  CHECK(c.models[0].train.seed == 7);
  CHECK(c.methods[0].morris.seed == 7);
  const RunConfig o = parse(kGrid, 99);
  CHECK(o.seed == 99);
  CHECK(o.data.synth.seed == 99);
  CHECK(o.models[1].train.seed == 99);
  const RunConfig pinned =
      parse("seed = 1\n[data]\nseed = 5\n[[models]]\nkind = \"mlp\"\nseed = 6\n", 2);
  CHECK(pinned.data.synth.seed == 5);
  CHECK(pinned.models[0].train.seed == 6);
}

TEST_CASE("csv source and external models resolve paths against the config directory") {
  const RunConfig c = parse(R"(
[data]
source = "csv"
path = "data/panel.csv"
entity_column = "county"
feature_columns = ["a", "b"]
static_features = ["a"]
max_fill_gap = 2
zscore_target = true

[[models]]
id = "ext"
kind = "external"
command = ["./adapter", "--model", "m.json"]
timeout_s = 1.5
)");
  CHECK(c.data.kind == DataSource::Kind::kCsv);
  CHECK(c.data.csv_path == std::filesystem::path("/base/data/panel.csv"));
  CHECK(c.data.schema.entity_column == "county");
  CHECK(c.data.schema.feature_columns == std::vector<std::string>{"a", "b"});
  CHECK(c.data.schema.max_fill_gap == 2);
  CHECK(c.data.schema.zscore_target);
  CHECK(c.models[0].external.command.front() == "/base/adapter");
  CHECK(c.models[0].external.command[1] == "--model");
  CHECK(c.models[0].external.working_dir == std::filesystem::path("/base"));
  CHECK(c.models[0].external.timeout == std::chrono::milliseconds(1500));
  const RunConfig on_path = parse("[[models]]\nkind = \"external\"\ncommand = [\"python3\"]\n");
  CHECK(on_path.models[0].external.command.front() == "python3");
}

TEST_CASE("run config errors") {
  CHECK_THROWS_WITH_AS(parse("lookbak = 3\n"), doctest::Contains("lookbak"), ConfigError);
  CHECK_THROWS_AS(parse("[data]\nsource = \"sql\"\n"), ConfigError);
  CHECK_THROWS_AS(parse("[data]\nsource = \"csv\"\n"), ConfigError);
  CHECK_THROWS_AS(parse("[data]\nentities = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[data]\nentities = \"ten\"\n"), ConfigError);
  CHECK_THROWS_AS(parse("lookback = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[[models]]\nkind = \"tft\"\n"), ConfigError);
  CHECK_THROWS_AS(parse("[[models]]\nkind = \"mlp\"\nkernel = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[[models]]\nkind = \"mlp\"\nepochs = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[[models]]\nkind = \"mlp\"\n[[models]]\nkind = \"mlp\"\n"), ConfigError);
  CHECK_THROWS_AS(parse("[[models]]\nkind = \"mlp\"\nid = \"a b\"\n"), ConfigError);
  CHECK_THROWS_AS(parse("[[models]]\nkind = \"external\"\ncommand = []\n"), ConfigError);
  CHECK_THROWS_AS(parse("[[methods]]\nmethod = \"morris\"\ndelta = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[[methods]]\nmethod = \"ablation\"\nsamples_r = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[[methods]]\nmethod = \"ablation\"\n[[methods]]\nmethod = \"ablation\"\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("[[methods]]\nmethod = \"occlusion\"\nbaseline = \"median\"\n"), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/run.toml"), ConfigError);
}

TEST_CASE("config hash is stable and tracks meaningful fields") {
  const std::string base = parse(kGrid).hash();
  CHECK(base.size() == 64);
  CHECK(parse(kGrid).hash() == base);
  // Formatting and explicit defaults do not change the resolved config.
  std::string reformatted = kGrid;
  reformatted.insert(0, "# a comment\n\n");
  CHECK(parse(reformatted).hash() == base);
  std::string explicit_default = kGrid;
  explicit_default += "delta = 0.1\n";  // appended to the occlusion entry: rejected
  CHECK_THROWS_AS(parse(explicit_default), ConfigError);
  std::string morris_default = kGrid;
  morris_default.replace(morris_default.find("samples_r = 10"), 14, "samples_r = 10\ndelta = 0.1");
  CHECK(parse(morris_default).hash() == base);

  for (const auto& [from, to] : std::vector<std::pair<std::string, std::string>>{
           {"seed = 7", "seed = 8"},
           {"lookback = 5", "lookback = 6"},
           {"entities = 10", "entities = 11"},
           {"epochs = 5", "epochs = 6"},
           {"hidden_width = 4", "hidden_width = 5"},
           {"samples_r = 10", "samples_r = 11"},
           {"patch_length = 2", "patch_length = 1"},
           {"baseline = \"zero\"", "baseline = \"feature-mean\""},
           {"id = \"lin\"", "id = \"lin2\""}}) {
    std::string changed = kGrid;
    changed.replace(changed.find(from), from.size(), to);
    CHECK_MESSAGE(parse(changed).hash() != base, from);
  }
  CHECK(parse(kGrid, 8).hash() != base);
}
