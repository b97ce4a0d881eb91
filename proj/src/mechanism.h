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

#ifndef HSM_SRC_MECHANISM_H_
#define HSM_SRC_MECHANISM_H_

#include <vector>

#include "common.h"
#include "market.h"
#include "mwis.h"

namespace hsm {

// How the greedy mechanism prices a winner k.
//  kCritical: the smallest weight at which k would still be selected by the
//    greedy rule, read off the greedy run on G - k.
//  kRerun: greedy value on G - k minus the greedy value of the other winners.
enum class GreedyPricing { kCritical, kRerun };

struct AuctionOutcome {
  VertexSet winners = 0;
  std::vector<double> payments;  // per vertex; zero for losers
  VertexWeights weights;         // weights computed from the bids
  SolverKind solver = SolverKind::kExact;
  double total_weight = 0.0;
};

// One slot auction. `bids` carries reported utilities; its xi bit must be 1.
AuctionOutcome RunVcg(const MarketInstance& inst,
                      const std::vector<double>& lambdas,
                      const SpectrumDraw& bids, SolverKind solver,
                      GreedyPricing pricing = GreedyPricing::kCritical);

// Quasi-linear utility of vertex v: true weight when winning minus payment.
double BidderUtility(const MarketInstance& inst,
                     const std::vector<double>& lambdas,
                     const SpectrumDraw& truth, const AuctionOutcome& outcome,
                     int v);

// Largest utility gain of `deviant` over truthful bidding across the given
// misreports of its own utility. Zero when no deviation helps.
double TruthfulnessProbe(const MarketInstance& inst,
                         const std::vector<double>& lambdas,
                         const SpectrumDraw& truth, int deviant,
                         const std::vector<double>& deviations,
                         SolverKind solver,
                         GreedyPricing pricing = GreedyPricing::kCritical);

}  // namespace hsm

#endif  // HSM_SRC_MECHANISM_H_
