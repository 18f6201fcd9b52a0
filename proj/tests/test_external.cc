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

#include <chrono>
#include <random>
#include <string>

#include "doctest.h"
#include "sensbench/error.h"
#include "sensbench/external_model.h"
#include "sensbench/file_util.h"
#include "sensbench/forecast_model.h"
#include "test_util.h"

using namespace sensbench;
using namespace std::chrono_literals;
using sensbench::testing::TempDir;

namespace {

ExternalOptions echo(std::vector<std::string> extra = {}) {
  ExternalOptions o;
  o.command = {SENSBENCH_ADAPTER, "--echo", "--lookback", "4", "--horizon", "3", "--k", "2"};
  o.command.insert(o.command.end(), extra.begin(), extra.end());
  o.timeout = 5000ms;
  return o;
}

const ModelSpec kEchoSpec{4, 3, 2};

Matrix ramp(double offset) {
  Matrix x(4, 2);
  for (std::size_t t = 0; t < 4; ++t) {
    x(t, 0) = offset + static_cast<double>(t);
    x(t, 1) = -offset;
  }
  return x;
}

}  // namespace

TEST_CASE("echo adapter handshake and prediction") {
  auto model = connect_external(echo(), kEchoSpec);
  CHECK(model->kind() == ModelKind::kExternal);
  CHECK(model->spec() == kEchoSpec);
  CHECK_FALSE(model->concurrent_predict());
  CHECK(model->predict(ramp(0.5)) == std::vector<double>{3.5, 3.5, 3.5});
  CHECK(model->predict(ramp(-2.0)) == std::vector<double>{1.0, 1.0, 1.0});
  CHECK_THROWS_AS(model->predict(Matrix(3, 2)), ContractError);
  model->shutdown();
  model->shutdown();
}

TEST_CASE("spec mismatch is a handshake error") {
  CHECK_THROWS_WITH_AS(connect_external(echo({"--declare-k", "7"}), ModelSpec{4, 3, 8}),
                       doctest::Contains("k 7"), HandshakeError);
  CHECK_THROWS_AS(connect_external(echo(), ModelSpec{13, 3, 2}), HandshakeError);
}

TEST_CASE("adapter exiting mid-stream is an adapter error and other work continues") {
  auto model = connect_external(echo({"--crash-after", "2"}), kEchoSpec);
  CHECK_NOTHROW(model->predict(ramp(0)));
  CHECK_NOTHROW(model->predict(ramp(1)));
  CHECK_THROWS_WITH_AS(model->predict(ramp(2)), doctest::Contains("request 3"), AdapterError);
  CHECK_THROWS_AS(model->predict(ramp(3)), AdapterError);

  auto sibling = connect_external(echo(), kEchoSpec);
  CHECK(sibling->predict(ramp(0)).size() == 3);
}

TEST_CASE("garbled replies are adapter errors") {
  auto model = connect_external(echo({"--garble-after", "0"}), kEchoSpec);
  CHECK_THROWS_AS(model->predict(ramp(0)), AdapterError);
}

TEST_CASE("unspawnable commands and silent adapters") {
  ExternalOptions missing;
  missing.command = {"/nonexistent/sensbench-adapter"};
  CHECK_THROWS_WITH_AS(connect_external(missing, kEchoSpec), doctest::Contains("spawn"),
                       AdapterError);

  ExternalOptions silent;
  silent.command = {"sleep", "10"};
  silent.timeout = 200ms;
  const auto start = std::chrono::steady_clock::now();
  CHECK_THROWS_WITH_AS(connect_external(silent, kEchoSpec), doctest::Contains("timed out"),
                       AdapterError);
  CHECK(std::chrono::steady_clock::now() - start < 5s);

  ExternalOptions empty;
  CHECK_THROWS_AS(connect_external(empty, kEchoSpec), AdapterError);
}

TEST_CASE("adapter wrapping a built-in model matches in-process predictions") {
  TempDir dir;
  Panel p = sensbench::testing::random_panel(5, 20, 3, 31);
  for (std::size_t c = 0; c < p.target.size(); ++c) p.target[c] = p.values[3 * c] * 0.7;
  const auto w = sensbench::testing::windows_of(p, 5, 4);
  TrainConfig config;
  config.epochs = 10;
  config.hidden_width = 5;
  for (ModelKind kind : {ModelKind::kLinearDecomp, ModelKind::kMlp}) {
    const auto local = train(kind, w, config);
    const auto path = dir / (model_kind_name(kind) + ".json");
    write_file_atomic(path, local->to_json().dump());
    ExternalOptions o;
    o.command = {SENSBENCH_ADAPTER, "--model", path.string()};
    auto remote = connect_external(o, local->spec());
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto a = local->predict(w.input(i));
      const auto b = remote->predict(w.input(i));
      REQUIRE(a.size() == b.size());
      for (std::size_t s = 0; s < a.size(); ++s) {
        CHECK(std::abs(a[s] - b[s]) <= 1e-9 * std::max(1.0, std::abs(a[s])));
      }
    }
    remote->shutdown();
  }
}

TEST_CASE("adapter arguments resolve against the working directory") {
  TempDir dir;
  Panel p = sensbench::testing::random_panel(3, 12, 2, 32);
  const auto w = sensbench::testing::windows_of(p, 3, 2);
  TrainConfig config;
  config.epochs = 2;
  config.moving_average_kernel = 1;
  const auto local = train(ModelKind::kLinearDecomp, w, config);
  write_file_atomic(dir / "m.json", local->to_json().dump());
  ExternalOptions o;
  o.command = {SENSBENCH_ADAPTER, "--model", "m.json"};
  o.timeout = 5000ms;
  CHECK_THROWS_AS(connect_external(o, local->spec()), AdapterError);
  o.working_dir = dir.path();
  auto remote = connect_external(o, local->spec());
  CHECK(remote->predict(w.input(0)) == local->predict(w.input(0)));
}
