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

#include "simlab.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hsm {

Topology GenerateTopology(const TopologySpec& spec, Rng& rng) {
  Require(spec.area >= 0.0 && spec.M >= 0, "invalid topology size");
  Require(spec.IRs >= 0.0 && spec.IRc >= 0.0,
          "interference ranges must be nonnegative");
  Topology t;
  for (int m = 0; m < spec.M; ++m) {
    Point p;
    p.x = rng.Uniform(0.0, spec.area);
    p.y = rng.Uniform(0.0, spec.area);
    t.positions.push_back(p);
  }
  for (const Point& p : spec.contract_positions) t.positions.push_back(p);
  const int v_count = static_cast<int>(t.positions.size());
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < v_count; ++i) {
    double ri = i < spec.M ? spec.IRs : spec.IRc;
    for (int j = i + 1; j < v_count; ++j) {
      double rj = j < spec.M ? spec.IRs : spec.IRc;
      double d = std::hypot(t.positions[i].x - t.positions[j].x,
                            t.positions[i].y - t.positions[j].y);
      if (d <= std::max(ri, rj)) edges.emplace_back(i + 1, j + 1);
    }
  }
  t.graph = ConflictGraph::Create(
      spec.M, static_cast<int>(spec.contract_positions.size()), edges);
  return t;
}

const std::vector<Strategy>& AllStrategies() {
  static const std::vector<Strategy> all = {
      Strategy::kOptimal,        Strategy::kSpotOnly,
      Strategy::kContractFirst,  Strategy::kContractRandom,
      Strategy::kContractLast,   Strategy::kContractRandomDn};
  return all;
}

std::string StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kOptimal:
      return "Optimal";
    case Strategy::kSpotOnly:
      return "SpotOnly";
    case Strategy::kContractFirst:
      return "ContractFirst";
    case Strategy::kContractRandom:
      return "ContractRandom";
    case Strategy::kContractLast:
      return "ContractLast";
    case Strategy::kContractRandomDn:
      return "ContractRandomDn";
  }
  return "";
}

Strategy ParseStrategy(const std::string& name) {
  for (Strategy s : AllStrategies()) {
    if (StrategyName(s) == name) return s;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown strategy: " + name);
}

SlotBank DrawSlotBank(const MarketInstance& inst, const ContractSetTable& table,
                      int periods, int slots_per_period, Rng& availability,
                      Rng& utilities) {
  Require(periods >= 1 && slots_per_period >= 1, "empty slot bank");
  Require(inst.M() <= kEnumerationLimit, "spot market too large");
  SlotBank bank;
  bank.periods = periods;
  bank.slots_per_period = slots_per_period;
  const int v_count = inst.graph.num_vertices();
  bank.samples.num_vertices = v_count;
  bank.samples.num_sets = table.size();
  const std::int64_t total = static_cast<std::int64_t>(periods) * slots_per_period;
  bank.sample_of_slot.assign(total, -1);
  std::vector<double> theta(v_count);
  std::vector<double> z(table.size());
  int idle = 0;
  for (std::int64_t k = 0; k < total; ++k) {
    if (!availability.Bernoulli(inst.rho)) continue;
    SampleTheta(inst, utilities, theta.data());
    ComputeSideValues(inst.graph, table, theta.data(), z.data());
    bank.samples.theta.insert(bank.samples.theta.end(), theta.begin(),
                              theta.end());
    bank.samples.z.insert(bank.samples.z.end(), z.begin(), z.end());
    bank.sample_of_slot[k] = idle++;
  }
  bank.samples.prob.assign(idle, idle > 0 ? 1.0 / idle : 0.0);
  return bank;
}

SlotBank Regroup(const SlotBank& bank, int slots_per_period) {
  Require(slots_per_period >= 1, "period length must be positive");
  SlotBank out = bank;
  out.slots_per_period = slots_per_period;
  out.periods = static_cast<int>(bank.sample_of_slot.size() / slots_per_period);
  Require(out.periods >= 1, "slot bank shorter than one period");
  out.sample_of_slot.resize(static_cast<std::size_t>(out.periods) *
                            slots_per_period);
  return out;
}

namespace {

std::uint32_t ContractConflicts(const MarketInstance& inst, int n) {
  return static_cast<std::uint32_t>(
      inst.graph.neighbors(inst.graph.contract_vertex(n)) >> inst.M());
}

std::vector<int> ContractFillLabels(const MarketInstance& inst,
                                    const ContractSetTable& table,
                                    const std::vector<double>& counts,
                                    Strategy strategy, const SlotBank& bank,
                                    Rng& rng) {
  const int n_count = inst.N();
  std::vector<int> labels(bank.sample_of_slot.size(), -1);
  std::vector<std::uint32_t> members(bank.sample_of_slot.size(), 0);
  for (int p = 0; p < bank.periods; ++p) {
    const std::size_t first = static_cast<std::size_t>(p) * bank.slots_per_period;
    const std::size_t last = first + bank.slots_per_period;
    for (int n = 0; n < n_count; ++n) {
      const long want = std::lround(counts[n]);
      if (want <= 0) continue;
      const std::uint32_t conflicts = ContractConflicts(inst, n);
      std::vector<std::size_t> eligible;
      for (std::size_t k = first; k < last; ++k) {
        if (bank.sample_of_slot[k] >= 0 && (members[k] & conflicts) == 0) {
          eligible.push_back(k);
        }
      }
      auto z0 = [&](std::size_t k) {
        return bank.samples.Z(bank.sample_of_slot[k])[0];
      };
      if (strategy == Strategy::kContractFirst) {
        std::stable_sort(eligible.begin(), eligible.end(),
                         [&](std::size_t a, std::size_t b) { return z0(a) > z0(b); });
      } else if (strategy == Strategy::kContractLast) {
        std::stable_sort(eligible.begin(), eligible.end(),
                         [&](std::size_t a, std::size_t b) { return z0(a) < z0(b); });
      } else {
        rng.Shuffle(eligible);
      }
      const std::size_t take =
          std::min(eligible.size(), static_cast<std::size_t>(want));
      for (std::size_t j = 0; j < take; ++j) members[eligible[j]] |= 1u << n;
    }
    for (std::size_t k = first; k < last; ++k) {
      if (bank.sample_of_slot[k] < 0) continue;
      labels[k] = table.IndexOf(members[k]);
      if (labels[k] < 0) Fail(ErrorCode::kInternal, "baseline set not in table");
    }
  }
  return labels;
}

}  // namespace

std::vector<int> StrategyLabels(const MarketInstance& inst,
                                const ContractSetTable& table,
                                const Policy& policy, Strategy strategy,
                                const SlotBank& bank, Rng& rng) {
  std::vector<int> labels(bank.sample_of_slot.size(), -1);
  switch (strategy) {
    case Strategy::kOptimal: {
      Evaluator eval(inst, table, bank.samples, policy.active);
      for (std::size_t k = 0; k < labels.size(); ++k) {
        int s = bank.sample_of_slot[k];
        if (s >= 0) labels[k] = eval.Classify(s, policy.lambdas);
      }
      return labels;
    }
    case Strategy::kSpotOnly:
      for (std::size_t k = 0; k < labels.size(); ++k) {
        if (bank.sample_of_slot[k] >= 0) labels[k] = 0;
      }
      return labels;
    case Strategy::kContractRandomDn: {
      std::vector<double> counts;
      for (const auto& c : inst.contracts) counts.push_back(c.demand);
      return ContractFillLabels(inst, table, counts, strategy, bank, rng);
    }
    case Strategy::kContractFirst:
    case Strategy::kContractRandom:
    case Strategy::kContractLast: {
      Require(static_cast<int>(policy.expected_demand.size()) == inst.N(),
              "policy lacks expected demand");
      return ContractFillLabels(inst, table, policy.expected_demand, strategy,
                                bank, rng);
    }
  }
  Fail(ErrorCode::kInvalidArgument, "unknown strategy");
}

BankWelfare SummarizeLabels(const MarketInstance& inst,
                            const ContractSetTable& table,
                            const SlotBank& bank,
                            const std::vector<int>& labels) {
  Require(labels.size() == bank.sample_of_slot.size(), "one label per slot");
  const int m = inst.M();
  const int n_count = inst.N();
  BankWelfare out;
  out.mean_delivered.assign(n_count, 0.0);
  out.mean_utilization.assign(n_count, 0.0);
  double base_sum = 0.0;
  for (int p = 0; p < bank.periods; ++p) {
    std::vector<double> d(n_count, 0.0), u(n_count, 0.0);
    double spot = 0.0;
    const std::size_t first = static_cast<std::size_t>(p) * bank.slots_per_period;
    for (std::size_t k = first; k < first + bank.slots_per_period; ++k) {
      const int s = bank.sample_of_slot[k];
      if (s < 0) continue;
      const int i = labels[k];
      spot += bank.samples.Z(s)[i];
      for (std::uint32_t rest = table.members[i]; rest; rest &= rest - 1) {
        int n = std::countr_zero(rest);
        d[n] += 1.0;
        u[n] += bank.samples.Theta(s)[m + n];
      }
    }
    double base = spot;
    double strict = 0.0;
    for (int n = 0; n < n_count; ++n) {
      const Contract& c = inst.contracts[n];
      base += (1.0 - c.tau) * u[n];
      strict += c.tau * (c.payment - Penalty(c, d[n]));
      out.mean_delivered[n] += d[n];
      out.mean_utilization[n] += u[n];
    }
    out.spot += spot;
    base_sum += base;
    out.period_strict.push_back(base + strict);
  }
  const double periods = bank.periods;
  out.spot /= periods;
  out.expected = base_sum / periods;
  for (int n = 0; n < n_count; ++n) {
    const Contract& c = inst.contracts[n];
    out.mean_delivered[n] /= periods;
    out.mean_utilization[n] /= periods;
    out.expected += c.tau * (c.payment - Penalty(c, out.mean_delivered[n]));
  }
  out.strict = std::accumulate(out.period_strict.begin(),
                               out.period_strict.end(), 0.0) /
               periods;
  return out;
}

BankWelfare RunBaseline(const MarketInstance& inst,
                        const ContractSetTable& table, const Policy& policy,
                        Strategy strategy, const SlotBank& bank, Rng& rng) {
  return SummarizeLabels(inst, table, bank,
                         StrategyLabels(inst, table, policy, strategy, bank, rng));
}

double ExpectedVsStrictGap(const MarketInstance& inst,
                           const ContractSetTable& table, const Policy& policy,
                           const SlotBank& bank) {
  Rng unused(0);
  BankWelfare w = RunBaseline(inst, table, policy, Strategy::kOptimal, bank, unused);
  Require(w.expected > 0.0, "gap needs positive expected welfare");
  return 1.0 - w.strict / w.expected;
}

PeriodResult RunPeriod(const MarketInstance& inst, const Policy& policy,
                       SolverKind solver, Rng& availability, Rng& utilities,
                       GreedyPricing pricing) {
  const int v_count = inst.graph.num_vertices();
  const int m = inst.M();
  PeriodResult out;
  out.payments.assign(v_count, 0.0);
  std::vector<SpectrumDraw> draws(inst.S());
  std::vector<VertexSet> allocations(inst.S(), 0);
  for (int slot = 0; slot < inst.S(); ++slot) {
    SpectrumDraw& draw = draws[slot];
    draw.xi = availability.Bernoulli(inst.rho);
    draw.theta.assign(v_count, 0.0);
    if (!draw.xi) continue;
    SampleTheta(inst, utilities, draw.theta.data());
    AuctionOutcome o = RunVcg(inst, policy.lambdas, draw, solver, pricing);
    allocations[slot] = o.winners;
    out.total_weight += o.total_weight;
    for (int v = 0; v < v_count; ++v) {
      TraceRow row;
      row.slot = slot;
      row.su_id = v + 1;
      row.contract = v >= m;
      row.bid = draw.theta[v];
      row.weight = o.weights[v];
      row.won = Contains(o.winners, v);
      row.payment = o.payments[v];
      out.payments[v] += o.payments[v];
      out.trace.push_back(row);
    }
  }
  const std::vector<double>* expected =
      static_cast<int>(policy.expected_demand.size()) == inst.N()
          ? &policy.expected_demand
          : nullptr;
  out.ledger = RealizedWelfare(inst, allocations, draws, expected);
  return out;
}

}  // namespace hsm
