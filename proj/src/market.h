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

#ifndef HSM_SRC_MARKET_H_
#define HSM_SRC_MARKET_H_

#include <optional>
#include <vector>

#include "common.h"
#include "graph.h"
#include "mwis.h"
#include "rng.h"

namespace hsm {

enum class PenaltyKind { kSoft, kHard };

struct Contract {
  double payment = 0.0;         // B
  double demand = 0.0;          // D, expected spectrum count per period
  PenaltyKind penalty_kind = PenaltyKind::kSoft;
  double unit_penalty = 0.0;    // P-hat, soft contracts
  double total_penalty = 0.0;   // B-hat, hard contracts
  double tau = 0.5;

  // Per-unit contract value entering the vertex weight. Hard contracts use
  // B-hat / D.
  double UnitValue() const;
};

// [D - d]^+ * P-hat for soft contracts, B-hat on any shortfall for hard.
double Penalty(const Contract& c, double delivered);

enum class MarginalKind { kUniform, kShannon, kDiscrete };

struct Marginal {
  MarginalKind kind = MarginalKind::kUniform;
  double lo = 0.0;
  double hi = 1.0;
  // Shannon rate alpha * bandwidth * log2(1 + power * |H|^2 / noise) with
  // |H|^2 exponential of mean fading_mean and alpha ~ U[alpha_lo, alpha_hi].
  double bandwidth = 1.0;
  double power = 1.0;
  double noise = 1.0;
  double fading_mean = 1.0;
  double alpha_lo = 1.0;
  double alpha_hi = 1.0;
  // Discrete support.
  std::vector<double> values;
  std::vector<double> probs;

  double Sample(Rng& rng) const;
  // Largest attainable value, or +inf when unbounded.
  double UpperBound() const;
  void Validate() const;
};

struct UtilityModel {
  // One marginal per SU, spot users first. A single entry applies to all.
  std::vector<Marginal> marginals{Marginal{}};
  // Optional common multiplicative quality q ~ U[q_lo, q_hi] per draw.
  bool common_quality = false;
  double q_lo = 1.0;
  double q_hi = 1.0;

  const Marginal& For(int v) const {
    return marginals.size() == 1 ? marginals[0] : marginals[v];
  }
  bool IsDiscrete() const;
};

struct MarketInstance {
  ConflictGraph graph;
  std::vector<Contract> contracts;
  UtilityModel utilities;
  double rho = 1.0;
  int K = 1;
  int T = 1;

  int S() const { return K * T; }
  double RhoS() const { return rho * S(); }
  int M() const { return graph.num_spot(); }
  int N() const { return graph.num_contract(); }
  void Validate() const;
};

struct SpectrumDraw {
  std::vector<double> theta;  // v_1..v_M then u_1..u_N
  bool xi = true;
};

// Utility vector for one idle spectrum.
void SampleTheta(const MarketInstance& inst, Rng& rng, double* out);
SpectrumDraw SampleSpectrum(const MarketInstance& inst, Rng& rng);

// Spot vertex weight v_m, contract weight tau*P + (1-tau)*u - lambda.
VertexWeights AuctionWeights(const MarketInstance& inst,
                              const std::vector<double>& lambdas,
                              const SpectrumDraw& draw);
void AuctionWeightsInto(const MarketInstance& inst,
                         const std::vector<double>& lambdas,
                         const double* theta, double* out);

struct WelfareLedger {
  std::vector<double> spot_welfare;          // per spot user
  std::vector<double> delivered;             // d_n
  std::vector<double> penalties;             // realized
  std::vector<double> contract_personal;     // B - penalty(d)
  std::vector<double> contract_utilization;  // sum of allocated u
  double total = 0.0;                        // W with realized penalty
  // Variant with the penalty evaluated at supplied expected demands.
  std::vector<double> expected_personal;
  std::optional<double> total_expected_demand;
};

double ComposeWelfare(const MarketInstance& inst, double spot_total,
                      const std::vector<double>& personal,
                      const std::vector<double>& utilization);

WelfareLedger RealizedWelfare(
    const MarketInstance& inst, const std::vector<VertexSet>& allocations,
    const std::vector<SpectrumDraw>& draws,
    const std::vector<double>* expected_demand = nullptr);

}  // namespace hsm

#endif  // HSM_SRC_MARKET_H_
