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

#include "mechanism.h"

#include <algorithm>

namespace hsm {

namespace {

// Critical weight for k under the greedy rule: k is selected iff its weight
// beats the first neighbour the greedy run on G - k picks (ties by id), or
// is positive when no neighbour is ever picked.
double GreedyCriticalWeight(const ConflictGraph& g, const VertexWeights& w,
                            int k) {
  VertexSet survivors = g.all() & ~Bit(k);
  while (true) {
    int pick = -1;
    for (VertexSet rest = survivors; rest; rest &= rest - 1) {
      int v = Lowest(rest);
      if (w[v] > 0.0 && (pick < 0 || w[v] > w[pick])) pick = v;
    }
    if (pick < 0) return 0.0;
    if (g.adjacent(k, pick)) return std::max(0.0, w[pick]);
    survivors &= ~(g.neighbors(pick) | Bit(pick));
  }
}

}  // namespace

AuctionOutcome RunVcg(const MarketInstance& inst,
                      const std::vector<double>& lambdas,
                      const SpectrumDraw& bids, SolverKind solver,
                      GreedyPricing pricing) {
  const ConflictGraph& g = inst.graph;
  AuctionOutcome out;
  out.solver = solver;
  out.weights = AuctionWeights(inst, lambdas, bids);
  if (solver == SolverKind::kExact && g.num_vertices() > kEnumerationLimit) {
    Fail(ErrorCode::kTooLarge, "instance too large for exact VCG");
  }
  MwisResult chosen = Solve(solver, g, out.weights, g.all());
  out.winners = chosen.set;
  out.total_weight = chosen.weight;
  out.payments.assign(g.num_vertices(), 0.0);
  for (int k : Members(out.winners)) {
    if (solver == SolverKind::kGreedy && pricing == GreedyPricing::kCritical) {
      out.payments[k] = GreedyCriticalWeight(g, out.weights, k);
      continue;
    }
    double without = Solve(solver, g, out.weights, g.all() & ~Bit(k)).weight;
    double others = SetWeight(out.weights, out.winners & ~Bit(k));
    out.payments[k] = without - others;
  }
  return out;
}

double BidderUtility(const MarketInstance& inst,
                     const std::vector<double>& lambdas,
                     const SpectrumDraw& truth, const AuctionOutcome& outcome,
                     int v) {
  if (!Contains(outcome.winners, v)) return -outcome.payments[v];
  VertexWeights w = AuctionWeights(inst, lambdas, truth);
  return w[v] - outcome.payments[v];
}

double TruthfulnessProbe(const MarketInstance& inst,
                         const std::vector<double>& lambdas,
                         const SpectrumDraw& truth, int deviant,
                         const std::vector<double>& deviations,
                         SolverKind solver, GreedyPricing pricing) {
  Require(deviant >= 0 && deviant < inst.graph.num_vertices(),
          "deviant out of range");
  AuctionOutcome honest = RunVcg(inst, lambdas, truth, solver, pricing);
  const double base = BidderUtility(inst, lambdas, truth, honest, deviant);
  double gain = 0.0;
  SpectrumDraw lie = truth;
  for (double report : deviations) {
    Require(report >= 0.0, "misreports must be nonnegative");
    lie.theta[deviant] = report;
    AuctionOutcome o = RunVcg(inst, lambdas, lie, solver, pricing);
    gain = std::max(gain, BidderUtility(inst, lambdas, truth, o, deviant) - base);
  }
  return gain;
}

}  // namespace hsm
