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

// Naive reference implementations used as test oracles. Everything here is
// written from the definitions, with no shortcuts shared with src/.

#ifndef HSM_TESTS_ORACLES_H_
#define HSM_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "graph.h"
#include "market.h"
#include "mwis.h"
#include "rng.h"

namespace hsm::oracle {

inline bool Independent(const ConflictGraph& g, VertexSet s) {
  for (int u : Members(s)) {
    for (int v : Members(s)) {
      if (u < v && g.adjacent(u, v)) return false;
    }
  }
  return true;
}

// Every subset of `restrict_to` checked pairwise.
inline std::vector<VertexSet> IndependentSets(const ConflictGraph& g,
                                              VertexSet restrict_to) {
  std::vector<int> verts = Members(restrict_to);
  std::vector<VertexSet> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << verts.size());
       ++code) {
    VertexSet s = 0;
    for (std::size_t j = 0; j < verts.size(); ++j) {
      if ((code >> j) & 1u) s |= Bit(verts[j]);
    }
    if (Independent(g, s)) out.push_back(s);
  }
  return out;
}

// Best independent subset by weight; ties go to the lexicographically
// smallest ascending id sequence.
inline MwisResult BruteMwis(const ConflictGraph& g, const VertexWeights& w,
                            VertexSet restrict_to) {
  MwisResult best;
  best.set = 0;
  best.weight = 0.0;
  for (VertexSet s : IndependentSets(g, restrict_to)) {
    double total = SetWeight(w, s);
    if (total > best.weight ||
        (total == best.weight && LexLess(s, best.set))) {
      best.set = s;
      best.weight = total;
    }
  }
  return best;
}

inline ConflictGraph RandomGraph(int spot, int contract, double density,
                                 Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  const int n = spot + contract;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      if (rng.Bernoulli(density)) edges.emplace_back(u, v);
    }
  }
  return ConflictGraph::Create(spot, contract, edges);
}

inline ConflictGraph Ring(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i) edges.emplace_back(i, i % n + 1);
  return ConflictGraph::Create(n, 0, edges);
}

// Eight-user example with four spot and four contract users. The edge
// labels put contract users at 1-4 and spot users at 5-8, while ids here
// list spot users first, so label k maps to k + 4 (k <= 4) or k - 4.
inline ConflictGraph ExampleMarket() {
  const std::vector<std::pair<int, int>> labelled = {
      {1, 2}, {1, 3}, {1, 5}, {2, 3}, {2, 5}, {3, 4}, {3, 5},
      {3, 6}, {4, 5}, {4, 6}, {4, 7}, {4, 8}, {6, 7}, {7, 8}};
  auto id = [](int k) { return k <= 4 ? k + 4 : k - 4; };
  std::vector<std::pair<int, int>> edges;
  for (auto [a, b] : labelled) edges.emplace_back(id(a), id(b));
  return ConflictGraph::Create(4, 4, edges);
}

// Spot welfare best response on the side market of contract set `c`.
inline double SideWelfare(const ConflictGraph& g, VertexSet c,
                          const std::vector<double>& theta) {
  VertexSet side = 0;
  for (int m = 0; m < g.num_spot(); ++m) {
    bool free = true;
    for (int v : Members(c)) free = free && !g.adjacent(m, v);
    if (free) side |= Bit(m);
  }
  return BruteMwis(g, theta, side).weight;
}

// C-MW of contract set `c` term by term, divided by rho*S.
inline double CoreMarginal(const MarketInstance& inst,
                           const std::vector<double>& lambdas,
                           const std::vector<double>& theta, VertexSet c) {
  const ConflictGraph& g = inst.graph;
  double value = SideWelfare(g, c, theta) - SideWelfare(g, 0, theta);
  for (int v : Members(c)) {
    const int n = v - g.num_spot();
    const Contract& k = inst.contracts[n];
    value += k.tau * k.UnitValue() + (1.0 - k.tau) * theta[v] - lambdas[n];
  }
  return value;
}

// Utility grid of a discrete instance: every theta with its probability.
struct GridPoint {
  std::vector<double> theta;
  double prob = 1.0;
};

inline std::vector<GridPoint> Grid(const MarketInstance& inst) {
  std::vector<GridPoint> points{GridPoint{}};
  for (int v = 0; v < inst.graph.num_vertices(); ++v) {
    const Marginal& m = inst.utilities.For(v);
    std::vector<GridPoint> next;
    for (const GridPoint& p : points) {
      for (std::size_t j = 0; j < m.values.size(); ++j) {
        GridPoint q = p;
        q.theta.push_back(m.values[j]);
        q.prob *= m.probs[j];
        next.push_back(q);
      }
    }
    points = next;
  }
  return points;
}

// Single contract user: gain of allocating it on theta over the best
// spot-only outcome, excluding the penalty term.
inline double MicroGain(const MarketInstance& inst,
                        const std::vector<double>& theta) {
  const ConflictGraph& g = inst.graph;
  const int c = g.num_spot();
  const double tau = inst.contracts[0].tau;
  return SideWelfare(g, Bit(c), theta) - SideWelfare(g, 0, theta) +
         (1.0 - tau) * theta[c];
}

// Expected welfare of allocating the contract user exactly on `chosen`
// grid points.
inline double MicroWelfare(const MarketInstance& inst,
                           const std::vector<GridPoint>& grid,
                           const std::vector<char>& chosen) {
  const ConflictGraph& g = inst.graph;
  const Contract& k = inst.contracts[0];
  const double rho_s = inst.RhoS();
  double value = 0.0;
  double demand = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    value += grid[i].prob * SideWelfare(g, 0, grid[i].theta);
    if (chosen[i]) {
      value += grid[i].prob * MicroGain(inst, grid[i].theta);
      demand += grid[i].prob;
    }
  }
  demand *= rho_s;
  return rho_s * value +
         k.tau * (k.payment - k.unit_penalty * std::max(0.0, k.demand - demand));
}

// Best deterministic per-theta policy with E[d] <= D, for equiprobable grids.
// Any feasible policy allocating on k points is dominated by the k points of
// largest gain, so scanning k covers the whole policy space.
inline double MicroOptimum(const MarketInstance& inst) {
  std::vector<GridPoint> grid = Grid(inst);
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> gain(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    gain[i] = MicroGain(inst, grid[i].theta);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });
  const double p = grid[0].prob;
  std::vector<char> chosen(grid.size(), 0);
  double best = MicroWelfare(inst, grid, chosen);
  for (std::size_t k = 1; k <= order.size(); ++k) {
    if (inst.RhoS() * p * k > inst.contracts[0].demand) break;
    chosen[order[k - 1]] = 1;
    best = std::max(best, MicroWelfare(inst, grid, chosen));
  }
  return best;
}

// Same optimum by visiting every subset of grid points. Small grids only.
inline double MicroOptimumBySubsets(const MarketInstance& inst) {
  std::vector<GridPoint> grid = Grid(inst);
  double best = -1e300;
  std::vector<char> chosen(grid.size());
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << grid.size());
       ++code) {
    double demand = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      chosen[i] = (code >> i) & 1u;
      if (chosen[i]) demand += grid[i].prob;
    }
    if (inst.RhoS() * demand > inst.contracts[0].demand + 1e-12) continue;
    best = std::max(best, MicroWelfare(inst, grid, chosen));
  }
  return best;
}

// Demand levels reachable by a threshold on the gain, lowest first. Gains
// equal up to rounding count as one tie group.
inline std::vector<double> MicroDemandLevels(const MarketInstance& inst) {
  std::vector<GridPoint> grid = Grid(inst);
  std::vector<double> gain;
  for (const auto& p : grid) gain.push_back(MicroGain(inst, p.theta));
  std::sort(gain.begin(), gain.end(), std::greater<double>());
  std::vector<double> levels;
  for (std::size_t k = 1; k <= gain.size(); ++k) {
    if (k == gain.size() || gain[k - 1] - gain[k] > 1e-12) {
      levels.push_back(inst.RhoS() * grid[0].prob * k);
    }
  }
  return levels;
}

}  // namespace hsm::oracle

#endif  // HSM_TESTS_ORACLES_H_
