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

#include "market.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hsm {

double Contract::UnitValue() const {
  if (penalty_kind == PenaltyKind::kSoft) return unit_penalty;
  return demand > 0.0 ? total_penalty / demand : 0.0;
}

double Penalty(const Contract& c, double delivered) {
  if (c.penalty_kind == PenaltyKind::kSoft) {
    return std::max(0.0, c.demand - delivered) * c.unit_penalty;
  }
  return delivered < c.demand ? c.total_penalty : 0.0;
}

double Marginal::Sample(Rng& rng) const {
  switch (kind) {
    case MarginalKind::kUniform:
      return rng.Uniform(lo, hi);
    case MarginalKind::kShannon: {
      double gain = rng.Exponential(fading_mean);
      double alpha = rng.Uniform(alpha_lo, alpha_hi);
      return alpha * bandwidth * std::log2(1.0 + power * gain / noise);
    }
    case MarginalKind::kDiscrete: {
      double r = rng.Uniform();
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        acc += probs[i];
        if (r < acc) return values[i];
      }
      return values.back();
    }
  }
  return 0.0;
}

double Marginal::UpperBound() const {
  switch (kind) {
    case MarginalKind::kUniform:
      return hi;
    case MarginalKind::kShannon:
      return std::numeric_limits<double>::infinity();
    case MarginalKind::kDiscrete:
      return *std::max_element(values.begin(), values.end());
  }
  return 0.0;
}

void Marginal::Validate() const {
  switch (kind) {
    case MarginalKind::kUniform:
      Require(lo >= 0.0 && hi >= lo, "uniform utility needs 0 <= lo <= hi");
      break;
    case MarginalKind::kShannon:
      Require(bandwidth >= 0 && power >= 0 && noise > 0 && fading_mean > 0 &&
                  alpha_lo >= 0 && alpha_hi >= alpha_lo,
              "invalid shannon utility parameters");
      break;
    case MarginalKind::kDiscrete: {
      Require(!values.empty() && values.size() == probs.size(),
              "discrete utility needs matching values and probs");
      double total = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        Require(values[i] >= 0.0 && probs[i] >= 0.0,
                "discrete utility entries must be nonnegative");
        total += probs[i];
      }
      Require(std::fabs(total - 1.0) < 1e-9, "discrete probs must sum to 1");
      break;
    }
  }
}

bool UtilityModel::IsDiscrete() const {
  for (const auto& m : marginals) {
    if (m.kind != MarginalKind::kDiscrete) return false;
  }
  return !common_quality;
}

void MarketInstance::Validate() const {
  Require(static_cast<int>(contracts.size()) == N(),
          "contract count must match the graph's contract vertices");
  Require(rho >= 0.0 && rho <= 1.0, "rho must lie in [0,1]");
  Require(K >= 1 && T >= 1, "K and T must be positive");
  for (const auto& c : contracts) {
    Require(c.tau >= 0.0 && c.tau <= 1.0, "tau must lie in [0,1]");
    Require(c.payment >= 0.0 && c.demand >= 0.0 && c.unit_penalty >= 0.0 &&
                c.total_penalty >= 0.0,
            "contract fields must be nonnegative");
  }
  Require(utilities.marginals.size() == 1 ||
              static_cast<int>(utilities.marginals.size()) ==
                  graph.num_vertices(),
          "utilities need one marginal or one per SU");
  for (const auto& m : utilities.marginals) m.Validate();
  Require(!utilities.common_quality ||
              (utilities.q_lo >= 0.0 && utilities.q_hi >= utilities.q_lo),
          "common quality needs 0 <= q_lo <= q_hi");
}

void SampleTheta(const MarketInstance& inst, Rng& rng, double* out) {
  const auto& u = inst.utilities;
  double q = u.common_quality ? rng.Uniform(u.q_lo, u.q_hi) : 1.0;
  for (int v = 0; v < inst.graph.num_vertices(); ++v) {
    out[v] = q * u.For(v).Sample(rng);
  }
}

SpectrumDraw SampleSpectrum(const MarketInstance& inst, Rng& rng) {
  SpectrumDraw draw;
  draw.xi = rng.Bernoulli(inst.rho);
  draw.theta.resize(inst.graph.num_vertices());
  SampleTheta(inst, rng, draw.theta.data());
  return draw;
}

void AuctionWeightsInto(const MarketInstance& inst,
                         const std::vector<double>& lambdas,
                         const double* theta, double* out) {
  const int m = inst.M();
  for (int v = 0; v < m; ++v) out[v] = theta[v];
  for (int n = 0; n < inst.N(); ++n) {
    const Contract& c = inst.contracts[n];
    out[m + n] =
        c.tau * c.UnitValue() + (1.0 - c.tau) * theta[m + n] - lambdas[n];
  }
}

VertexWeights AuctionWeights(const MarketInstance& inst,
                              const std::vector<double>& lambdas,
                              const SpectrumDraw& draw) {
  if (!draw.xi) Fail(ErrorCode::kBusySlot, "busy spectrum cannot be allocated");
  Require(static_cast<int>(lambdas.size()) == inst.N(),
          "one shadow price per contract user");
  Require(static_cast<int>(draw.theta.size()) == inst.graph.num_vertices(),
          "draw size mismatch");
  VertexWeights w(inst.graph.num_vertices());
  AuctionWeightsInto(inst, lambdas, draw.theta.data(), w.data());
  return w;
}

double ComposeWelfare(const MarketInstance& inst, double spot_total,
                      const std::vector<double>& personal,
                      const std::vector<double>& utilization) {
  double total = spot_total;
  for (int n = 0; n < inst.N(); ++n) {
    double tau = inst.contracts[n].tau;
    total += tau * personal[n] + (1.0 - tau) * utilization[n];
  }
  return total;
}

WelfareLedger RealizedWelfare(const MarketInstance& inst,
                              const std::vector<VertexSet>& allocations,
                              const std::vector<SpectrumDraw>& draws,
                              const std::vector<double>* expected_demand) {
  Require(allocations.size() == draws.size(),
          "one allocation per spectrum draw");
  const int m = inst.M();
  const int n_count = inst.N();
  WelfareLedger ledger;
  ledger.spot_welfare.assign(m, 0.0);
  ledger.delivered.assign(n_count, 0.0);
  ledger.contract_utilization.assign(n_count, 0.0);
  for (std::size_t s = 0; s < draws.size(); ++s) {
    VertexSet winners = allocations[s];
    if (winners == 0) continue;
    Require((winners & ~inst.graph.all()) == 0, "winner outside the graph");
    if (!draws[s].xi) {
      Fail(ErrorCode::kBusySlot,
           "winners on busy spectrum " + std::to_string(s));
    }
    if (!inst.graph.IsIndependent(winners)) {
      Fail(ErrorCode::kNotIndependent,
           "winner set of spectrum " + std::to_string(s) +
               " is not independent");
    }
    for (int v : Members(winners)) {
      if (v < m) {
        ledger.spot_welfare[v] += draws[s].theta[v];
      } else {
        ledger.delivered[v - m] += 1.0;
        ledger.contract_utilization[v - m] += draws[s].theta[v];
      }
    }
  }
  ledger.penalties.resize(n_count);
  ledger.contract_personal.resize(n_count);
  for (int n = 0; n < n_count; ++n) {
    const Contract& c = inst.contracts[n];
    ledger.penalties[n] = Penalty(c, ledger.delivered[n]);
    ledger.contract_personal[n] = c.payment - ledger.penalties[n];
  }
  double spot_total = std::accumulate(ledger.spot_welfare.begin(),
                                      ledger.spot_welfare.end(), 0.0);
  ledger.total = ComposeWelfare(inst, spot_total, ledger.contract_personal,
                                ledger.contract_utilization);
  if (expected_demand) {
    Require(static_cast<int>(expected_demand->size()) == n_count,
            "one expected demand per contract user");
    ledger.expected_personal.resize(n_count);
    for (int n = 0; n < n_count; ++n) {
      const Contract& c = inst.contracts[n];
      ledger.expected_personal[n] =
          c.payment - Penalty(c, (*expected_demand)[n]);
    }
    ledger.total_expected_demand =
        ComposeWelfare(inst, spot_total, ledger.expected_personal,
                       ledger.contract_utilization);
  }
  return ledger;
}

}  // namespace hsm
