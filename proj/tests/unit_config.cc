// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>

#include "config.h"
#include "doctest.h"
#include "experiment.h"
#include "oracles.h"

namespace hsm {
namespace {

namespace fs = std::filesystem;

fs::path Scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("hsm_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

TEST_CASE("shipped config matches the built-in defaults") {
  Config file = LoadConfig(std::string(HSM_SOURCE_DIR) + "/configs/default.yaml");
  CHECK(DumpConfig(file) == DumpConfig(DefaultConfig()));
}

TEST_CASE("config dump round trip") {
  Config c = DefaultConfig();
  c.rho = 0.35;
  c.contracts[0].penalty_kind = PenaltyKind::kHard;
  c.contracts[0].total_penalty = 7.25;
  c.utilities.common_quality = true;
  c.utilities.q_lo = 0.3;
  c.experiment.T_values = {20, 40};
  c.experiment.solver = SolverKind::kGreedy;
  std::string text = DumpConfig(c);
  CHECK(DumpConfig(ParseConfig(text)) == text);
}

TEST_CASE("config errors") {
  CHECK(CodeOf([] { ParseConfig("supply: {rho: 0.5, bogus: 1}"); }) ==
        ErrorCode::kParse);
  CHECK(CodeOf([] { ParseConfig("supply: [1, 2"); }) == ErrorCode::kParse);
  CHECK(CodeOf([] { ParseConfig("contracts:\n  - {penalty_kind: firm}"); }) ==
        ErrorCode::kParse);
  CHECK(CodeOf([] { LoadConfig("/nonexistent/file.yaml"); }) == ErrorCode::kIo);
}

TEST_CASE("graph files resolve against the config directory") {
  fs::path dir = Scratch("graph");
  oracle::ExampleMarket().Save((dir / "g.txt").string());
  std::ofstream(dir / "c.yaml") << "graph: {path: g.txt}\n"
                                   "contracts:\n"
                                   "  - {payment: 1, demand: 2, unit_penalty: 0.5}\n";
  Config c = LoadConfig((dir / "c.yaml").string());
  REQUIRE(c.graph_path);
  MarketInstance inst = BuildInstance(c, 1);
  CHECK(inst.N() == 4);
  CHECK(inst.contracts.size() == 4);
  CHECK(inst.contracts[3].demand == 2.0);
  CHECK(inst.graph.Edges() == oracle::ExampleMarket().Edges());
}

TEST_CASE("contract list must match the contract users") {
  Config c = DefaultConfig();
  c.contracts.resize(2);
  CHECK_THROWS_AS(BuildInstance(c, 1), Error);
}

TEST_CASE("generated topology depends on the seed only") {
  Config c = DefaultConfig();
  CHECK(BuildInstance(c, 3).graph.Edges() == BuildInstance(c, 3).graph.Edges());
  CHECK(BuildInstance(c, 3).graph.Edges() != BuildInstance(c, 4).graph.Edges());
}

TEST_CASE("policy file round trip is exact") {
  Config c = DefaultConfig();
  c.experiment.samples = 500;
  SeedContext ctx = PrepareSeed(c, 2);
  ctx.policy.notes.push_back("a note");
  std::string text = DumpPolicy(ctx.policy);
  Policy back = ParsePolicy(text);
  CHECK(back.lambdas == ctx.policy.lambdas);
  CHECK(back.expected_demand == ctx.policy.expected_demand);
  CHECK(back.expected_welfare == ctx.policy.expected_welfare);
  CHECK(back.trace == ctx.policy.trace);
  CHECK(back.notes == ctx.policy.notes);
  CHECK(DumpPolicy(back) == text);
  CHECK(CodeOf([] { ParsePolicy("lambdas: oops"); }) == ErrorCode::kParse);
}

TEST_CASE("csv headers") {
  CHECK(GapCsv({}) == "T,periods,expected_welfare,strict_welfare,gap\n");
  CHECK(TraceCsv({}) == "slot,su_id,role,bid,weight,won,payment\n");
  CHECK(StrategyCsv({}, 2, "irc", 100).rfind(
            "seed,irc,strategy,welfare,strict_welfare,spot_welfare,"
            "delivered_1,delivered_2\n",
            0) == 0);
  std::string lb = LossboundCsv({}, 1);
  CHECK(lb.rfind("e0,eps_bar,achieved_wr,bound_wr,gamma_1,t_1,", 0) == 0);
  CHECK(FormatNumber(0.1) == "0.1");
  CHECK(FormatNumber(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("simulate writes every output") {
  Config c = DefaultConfig();
  c.experiment.samples = 500;
  c.experiment.eval_samples = 500;
  c.experiment.eval_periods = 2;
  c.experiment.T_values = {10, 100};
  c.experiment.gap_periods = 2;
  fs::path dir = Scratch("simulate");
  Simulate(c, 5, dir.string());
  for (const char* f : {"policy.yaml", "strategies.csv", "welfare_vs_irc.csv",
                        "lossbound.csv", "gap.csv", "trace.csv", "ledger.csv",
                        "figgen.yaml", "manifest.yaml"}) {
    CHECK(fs::exists(dir / f));
  }
  Policy p = LoadPolicy((dir / "policy.yaml").string());
  CHECK(p.lambdas.size() == 3);
  std::string manifest = ReadFile((dir / "manifest.yaml").string());
  CHECK(manifest.find("seed: 5") != std::string::npos);
}

TEST_CASE("sweep validates its parameter") {
  Config c = DefaultConfig();
  CHECK_THROWS_AS(Sweep(c, "tau", {0.1}, 1, 1, Scratch("sweep").string()),
                  Error);
}

}  // namespace
}  // namespace hsm
