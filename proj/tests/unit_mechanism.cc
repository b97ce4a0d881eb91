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

#include <cmath>

#include "doctest.h"
#include "mechanism.h"
#include "oracles.h"

namespace hsm {
namespace {

MarketInstance SpotOnly(ConflictGraph g) {
  MarketInstance inst;
  inst.graph = std::move(g);
  return inst;
}

MarketInstance RandomMarket(Rng& rng) {
  MarketInstance inst;
  int spot = 2 + static_cast<int>(rng.Below(7));
  int contract = 1 + static_cast<int>(rng.Below(4));
  inst.graph = oracle::RandomGraph(spot, contract, rng.Uniform(0.2, 0.6), rng);
  for (int n = 0; n < contract; ++n) {
    Contract c;
    c.demand = 5;
    c.unit_penalty = rng.Uniform(0, 1.5);
    c.tau = rng.Uniform();
    inst.contracts.push_back(c);
  }
  return inst;
}

std::vector<double> RandomPrices(const MarketInstance& inst, Rng& rng) {
  std::vector<double> l(inst.N());
  for (double& x : l) x = rng.Uniform(0.0, 0.8);
  return l;
}

TEST_CASE("single bidder pays nothing") {
  MarketInstance inst = SpotOnly(ConflictGraph::Create(1, 0, {}));
  AuctionOutcome o = RunVcg(inst, {}, SpectrumDraw{{0.7}, true},
                            SolverKind::kExact);
  CHECK(o.winners == Bit(0));
  CHECK(o.payments[0] == 0.0);
}

TEST_CASE("two conflicting bidders") {
  MarketInstance inst = SpotOnly(ConflictGraph::Create(2, 0, {{1, 2}}));
  for (SolverKind s : {SolverKind::kExact, SolverKind::kGreedy}) {
    AuctionOutcome o = RunVcg(inst, {}, SpectrumDraw{{5, 3}, true}, s);
    CHECK(o.winners == Bit(0));
    CHECK(o.payments[0] == 3.0);
    CHECK(o.payments[1] == 0.0);
  }
  CHECK_THROWS_AS(RunVcg(inst, {}, SpectrumDraw{{5, 3}, false},
                         SolverKind::kExact),
                  Error);
}

TEST_CASE("greedy critical price on a star") {
  MarketInstance inst = SpotOnly(
      ConflictGraph::Create(4, 0, {{1, 2}, {1, 3}, {1, 4}}));
  SpectrumDraw truth{{2.0, 1.5, 1.5, 1.5}, true};
  AuctionOutcome greedy = RunVcg(inst, {}, truth, SolverKind::kGreedy);
  CHECK(greedy.winners == Bit(0));
  CHECK(greedy.payments[0] == 1.5);
  CHECK(TruthfulnessProbe(inst, {}, truth, 0, {0.0, 1.0, 1.6, 5.0},
                          SolverKind::kGreedy) == 0.0);

  // Re-running greedy without the centre charges 4.5 > 2, so under that
  // rule the centre gains by bidding low enough to lose.
  AuctionOutcome rerun = RunVcg(inst, {}, truth, SolverKind::kGreedy,
                                GreedyPricing::kRerun);
  CHECK(rerun.payments[0] == 4.5);
  CHECK(TruthfulnessProbe(inst, {}, truth, 0, {0.0}, SolverKind::kGreedy,
                          GreedyPricing::kRerun) == doctest::Approx(2.5));

  AuctionOutcome exact = RunVcg(inst, {}, truth, SolverKind::kExact);
  CHECK(exact.winners == 0xEu);
  for (int v = 1; v < 4; ++v) CHECK(exact.payments[v] == 0.0);
  exact = RunVcg(inst, {}, SpectrumDraw{{2.0, 0.8, 0.8, 0.8}, true},
                 SolverKind::kExact);
  CHECK(exact.winners == 0xEu);
  for (int v = 1; v < 4; ++v) {
    CHECK(exact.payments[v] == doctest::Approx(0.4).epsilon(1e-12));
  }
}

TEST_CASE("payment sanity on random markets") {
  Rng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    MarketInstance inst = RandomMarket(rng);
    std::vector<double> lambdas = RandomPrices(inst, rng);
    SpectrumDraw d = SampleSpectrum(inst, rng);
    d.xi = true;
    AuctionOutcome exact = RunVcg(inst, lambdas, d, SolverKind::kExact);
    AuctionOutcome greedy = RunVcg(inst, lambdas, d, SolverKind::kGreedy);
    CHECK(inst.graph.IsIndependent(exact.winners));
    CHECK(inst.graph.IsIndependent(greedy.winners));
    CHECK(greedy.total_weight <= exact.total_weight + 1e-12);
    for (int v = 0; v < inst.graph.num_vertices(); ++v) {
      CHECK(exact.payments[v] >= -1e-12);
      CHECK(greedy.payments[v] >= 0.0);
      if (!Contains(exact.winners, v)) CHECK(exact.payments[v] == 0.0);
      if (!Contains(greedy.winners, v)) CHECK(greedy.payments[v] == 0.0);
      if (Contains(exact.winners, v)) {
        CHECK(exact.payments[v] <= exact.weights[v] + 1e-12);
      }
    }
    // The auction implements the off-line allocation rule.
    CHECK(exact.winners == MwisExact(inst.graph,
                                     AuctionWeights(inst, lambdas, d),
                                     inst.graph.all())
                               .set);
  }
}

TEST_CASE("no profitable misreports on random markets") {
  Rng rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    MarketInstance inst = RandomMarket(rng);
    std::vector<double> lambdas = RandomPrices(inst, rng);
    SpectrumDraw d = SampleSpectrum(inst, rng);
    d.xi = true;
    std::vector<double> lies(20);
    for (double& x : lies) x = rng.Uniform(0.0, 2.0);
    for (int v = 0; v < inst.graph.num_vertices(); ++v) {
      for (SolverKind s : {SolverKind::kExact, SolverKind::kGreedy}) {
        CHECK(TruthfulnessProbe(inst, lambdas, d, v, lies, s) <= 1e-9);
        CHECK(TruthfulnessProbe(inst, lambdas, d, v, {d.theta[v]}, s) == 0.0);
      }
    }
  }
}

TEST_CASE("probe input checks") {
  MarketInstance inst = SpotOnly(ConflictGraph::Create(1, 0, {}));
  SpectrumDraw d{{0.5}, true};
  CHECK_THROWS_AS(TruthfulnessProbe(inst, {}, d, 3, {0.1}, SolverKind::kExact),
                  Error);
  CHECK_THROWS_AS(TruthfulnessProbe(inst, {}, d, 0, {-1}, SolverKind::kExact),
                  Error);
}

}  // namespace
}  // namespace hsm
