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

#ifndef HSM_SRC_SIMLAB_H_
#define HSM_SRC_SIMLAB_H_

#include <string>
#include <vector>

#include "graph.h"
#include "market.h"
#include "mechanism.h"
#include "policy.h"
#include "rng.h"

namespace hsm {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct TopologySpec {
  double area = 1000.0;  // side of the square, meters
  int M = 20;
  std::vector<Point> contract_positions{{300, 400}, {500, 600}, {700, 400}};
  double IRs = 300.0;
  double IRc = 100.0;
};

struct Topology {
  ConflictGraph graph;
  std::vector<Point> positions;  // spot users first
};

// Spot users uniform in the square, contract users at fixed points. Edge iff
// distance <= max of the two interference ranges.
Topology GenerateTopology(const TopologySpec& spec, Rng& rng);

enum class Strategy {
  kOptimal,
  kSpotOnly,
  kContractFirst,
  kContractRandom,
  kContractLast,
  kContractRandomDn,
};

const std::vector<Strategy>& AllStrategies();
std::string StrategyName(Strategy s);
Strategy ParseStrategy(const std::string& name);

// Simulated spectrums for a run of consecutive periods. Idle slots carry a
// sample with precomputed side welfare.
struct SlotBank {
  int slots_per_period = 0;
  int periods = 0;
  std::vector<int> sample_of_slot;  // -1 when busy
  SampleSet samples;
};

SlotBank DrawSlotBank(const MarketInstance& inst, const ContractSetTable& table,
                      int periods, int slots_per_period, Rng& availability,
                      Rng& utilities);
// Same spectrums regrouped into periods of a different length; trailing
// slots that do not fill a period are dropped.
SlotBank Regroup(const SlotBank& bank, int slots_per_period);

struct BankWelfare {
  double expected = 0.0;  // penalty at the mean delivered count
  double strict = 0.0;    // mean of per-period realized welfare
  double spot = 0.0;      // mean spot welfare per period
  std::vector<double> mean_delivered;
  std::vector<double> mean_utilization;
  std::vector<double> period_strict;
};

// Per-slot contract set labels (index into the table, -1 on busy slots).
std::vector<int> StrategyLabels(const MarketInstance& inst,
                                const ContractSetTable& table,
                                const Policy& policy, Strategy strategy,
                                const SlotBank& bank, Rng& rng);
BankWelfare SummarizeLabels(const MarketInstance& inst,
                            const ContractSetTable& table,
                            const SlotBank& bank, const std::vector<int>& labels);

BankWelfare RunBaseline(const MarketInstance& inst,
                        const ContractSetTable& table, const Policy& policy,
                        Strategy strategy, const SlotBank& bank, Rng& rng);

// 1 - W_strict / W_expected under the policy on the given bank.
double ExpectedVsStrictGap(const MarketInstance& inst,
                           const ContractSetTable& table, const Policy& policy,
                           const SlotBank& bank);

struct TraceRow {
  int slot = 0;
  int su_id = 0;
  bool contract = false;
  double bid = 0.0;
  double weight = 0.0;
  bool won = false;
  double payment = 0.0;
};

struct PeriodResult {
  WelfareLedger ledger;
  std::vector<TraceRow> trace;
  std::vector<double> payments;  // per vertex, summed over slots
  double total_weight = 0.0;     // sum of winning weights over slots
};

// K*T slot auctions with truthful bids.
PeriodResult RunPeriod(const MarketInstance& inst, const Policy& policy,
                       SolverKind solver, Rng& availability, Rng& utilities,
                       GreedyPricing pricing = GreedyPricing::kCritical);

}  // namespace hsm

#endif  // HSM_SRC_SIMLAB_H_
