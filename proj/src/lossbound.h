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

#ifndef HSM_SRC_LOSSBOUND_H_
#define HSM_SRC_LOSSBOUND_H_

#include <vector>

#include "market.h"
#include "policy.h"
#include "rng.h"

namespace hsm {

// Per-set C-MW with side welfare z_0, z_i scaled by eps[0], eps[i]. Scaled
// by rho*S like CoreMarginalWelfare; entry 0 is 0.
std::vector<double> ApproximateCmw(const MarketInstance& inst,
                                   const ContractSetTable& table,
                                   const std::vector<double>& lambdas,
                                   const SpectrumDraw& draw,
                                   const std::vector<double>& eps);

struct LossBoundReport {
  double e0 = 1.0;
  double eps_bar = 1.0;                  // min over sets of E[eps_i]
  std::vector<double> eps_bar_by_set;
  std::vector<double> phi;               // rho S E[(1 - eps_i) z_i; class i]
  std::vector<std::vector<double>> beta; // [precise class][degraded class]
  std::vector<double> delta;             // Pr(precise = i) - Pr(degraded = i)
  std::vector<double> gamma;
  std::vector<double> x;                 // P - lambda
  std::vector<double> y;                 // sum of x over members of set i
  std::vector<double> t;
  std::vector<double> degraded_demand;
  double optimal_welfare = 0.0;
  std::vector<double> optimal_contract_welfare;
  double achieved_welfare = 0.0;
  double achieved_wr = 1.0;
  double bound_wr = 1.0;
  // Batch-means standard errors; zero for exact sample sets.
  std::vector<double> gamma_stderr;
  std::vector<double> t_stderr;
  double achieved_wr_stderr = 0.0;
  double bound_wr_stderr = 0.0;
};

// Lower bound on the welfare ratio assembled from stored components.
// Throws when optimal_welfare <= 0.
double AnalyticalWrBound(double eps_bar, const std::vector<double>& t,
                         double rho_s, double optimal_welfare,
                         const std::vector<double>& contract_welfare);

// Draws eps ~ U[e0, 1] per (sample, set) and compares precise and degraded
// allocation on the evaluator's samples. All components share one sample
// set; standard errors come from `batches` contiguous batches.
LossBoundReport AnalyzeLoss(const Evaluator& eval,
                            const std::vector<double>& lambdas, double e0,
                            Rng& eps_rng, int batches = 20);

// Convenience wrapper drawing a fresh sample set.
LossBoundReport MeasureAchievedWr(const MarketInstance& inst,
                                  const Policy& policy, double e0,
                                  const MonteCarloSpec& mc);

}  // namespace hsm

#endif  // HSM_SRC_LOSSBOUND_H_
