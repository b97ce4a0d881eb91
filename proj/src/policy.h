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

#ifndef HSM_SRC_POLICY_H_
#define HSM_SRC_POLICY_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "common.h"
#include "graph.h"
#include "market.h"
#include "rng.h"

namespace hsm {

// Independent sets of the contract subgraph. Index 0 is the empty set; the
// rest are ordered by size, then lexicographically.
struct ContractSetTable {
  std::vector<VertexSet> sets;            // contract vertex masks
  std::vector<VertexSet> side;            // side-market spot masks
  std::vector<std::uint32_t> members;     // bit n set when user n belongs

  int size() const { return static_cast<int>(sets.size()); }
  bool Has(int i, int n) const { return (members[i] >> n) & 1u; }
  int IndexOf(std::uint32_t member_mask) const;
};

ContractSetTable BuildContractSets(const ConflictGraph& g);

// Side welfare z_i of every contract set for one utility vector.
void ComputeSideValues(const ConflictGraph& g, const ContractSetTable& table,
                       const double* theta, double* z);

// Utility vectors of idle spectrums with precomputed side welfare. Each
// sample carries a probability weight (1/count for Monte Carlo).
struct SampleSet {
  int num_vertices = 0;
  int num_sets = 0;
  std::vector<double> theta;
  std::vector<double> z;
  std::vector<double> prob;
  bool exact = false;  // true for full enumeration of a discrete model

  int count() const { return static_cast<int>(prob.size()); }
  const double* Theta(int s) const { return &theta[s * num_vertices]; }
  const double* Z(int s) const { return &z[s * num_sets]; }
};

SampleSet DrawSamples(const MarketInstance& inst, const ContractSetTable& t,
                      int count, Rng& rng);
// Full product grid of a discrete utility model.
SampleSet EnumerateGrid(const MarketInstance& inst, const ContractSetTable& t,
                        std::int64_t max_points = 2000000);

struct MonteCarloSpec {
  int samples = 20000;
  std::uint64_t seed = 1;
};

struct WelfareDecomposition {
  double spot = 0.0;                      // sum of expected side welfare
  std::vector<double> side_by_set;        // E[W^s_i] per contract set
  std::vector<double> expected_demand;
  std::vector<double> personal;           // B - penalty(E[d])
  std::vector<double> utilization;        // expected allocated utility
  std::vector<double> contract_welfare;   // tau*personal + (1-tau)*util
  double total = 0.0;
};

struct Policy {
  PenaltyKind kind = PenaltyKind::kSoft;
  std::vector<double> lambdas;
  std::vector<int> satisfied_set;  // hard contracts with E[d] = D
  std::uint32_t active = 0;        // users admitted to contract sets
  std::vector<double> expected_demand;
  std::vector<double> expected_demand_stderr;
  std::vector<bool> atom;          // demand level not reachable exactly
  std::vector<std::vector<double>> trace;
  int sweeps = 0;
  bool converged = false;
  double expected_welfare = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

// Precomputed C-MW terms over one sample set. All C-MW values are
// returned divided by rho*S.
class Evaluator {
 public:
  Evaluator(const MarketInstance& inst, const ContractSetTable& table,
            const SampleSet& samples, std::uint32_t active);

  // H_i: z_i - z_0 + sum over members of tau*P + (1-tau)*u.
  double H(int s, int i) const { return h_[s * num_sets_ + i]; }
  double Cmw(int s, int i, const std::vector<double>& lambdas) const;
  // Largest C-MW set if positive, else 0; ties to the lowest index.
  int Classify(int s, const std::vector<double>& lambdas) const;
  std::vector<int> ClassifyAll(const std::vector<double>& lambdas) const;

  std::pair<double, double> ExpectedDemand(const std::vector<double>& lambdas,
                                           int n) const;
  std::vector<double> DemandFromLabels(const std::vector<int>& labels) const;
  WelfareDecomposition Welfare(const std::vector<int>& labels) const;
  WelfareDecomposition Welfare(const std::vector<double>& lambdas) const {
    return Welfare(ClassifyAll(lambdas));
  }

  // Per-sample allocation threshold for user n with the other prices fixed:
  // n is allocated iff lambda_n < threshold (ties resolved by index).
  void Thresholds(const std::vector<double>& lambdas, int n,
                  std::vector<double>* thresholds,
                  std::vector<char>* tie_wins) const;

  const MarketInstance& instance() const { return inst_; }
  const ContractSetTable& table() const { return table_; }
  const SampleSet& samples() const { return samples_; }
  const std::vector<int>& allowed() const { return allowed_; }
  std::uint32_t active() const { return active_; }

 private:
  const MarketInstance& inst_;
  const ContractSetTable& table_;
  const SampleSet& samples_;
  std::uint32_t active_;
  int num_sets_;
  std::vector<int> allowed_;  // set indices whose members are all active
  std::vector<double> h_;
};

class SolveError : public Error {
 public:
  SolveError(const std::string& message,
             std::vector<std::vector<double>> trace)
      : Error(ErrorCode::kNotConverged, message), trace_(std::move(trace)) {}
  const std::vector<std::vector<double>>& trace() const { return trace_; }

 private:
  std::vector<std::vector<double>> trace_;
};

std::uint32_t DefaultActiveMask(const MarketInstance& inst);

double CoreMarginalWelfare(const MarketInstance& inst,
                           const ContractSetTable& table,
                           const std::vector<double>& lambdas,
                           const SpectrumDraw& draw, int set_index);
int ClassifyTheta(const MarketInstance& inst, const ContractSetTable& table,
                  const std::vector<double>& lambdas,
                  const SpectrumDraw& draw);

// Soft-contract shadow prices on a fixed sample set.
Policy SolveShadowPrices(const Evaluator& eval, double tol, int max_iter);
Policy SolveShadowPrices(const MarketInstance& inst, const MonteCarloSpec& mc,
                         double tol, int max_iter);

Policy SolveHardContracts(const MarketInstance& inst,
                          const ContractSetTable& table,
                          const SampleSet& samples, double tol,
                          int max_iter = 200);
Policy SolveHardContracts(const MarketInstance& inst, const MonteCarloSpec& mc,
                          double tol);

// Fills expected demand, standard errors and welfare on `eval`'s samples.
void AttachDiagnostics(const Evaluator& eval, Policy* policy);

struct DualCertificate {
  double mu_range_violation = 0.0;
  double eta_range_violation = 0.0;
  double complementarity_violation = 0.0;  // D.1 and D.2, per sample
  std::int64_t sign_rule_mismatches = 0;
  std::vector<double> slackness;           // |lambda (D - E[d])| / (rho S)
  std::vector<double> primal_excess;       // [E[d] - D]^+ / (rho S)
  double dual_sign_violation = 0.0;
  double mean_eta = 0.0;
  bool pass = true;
};

DualCertificate VerifyKkt(const MarketInstance& inst, const Policy& policy,
                          const ContractSetTable& table,
                          const SampleSet& samples, double tol);

struct SemSolution {
  std::vector<VertexSet> allocation;  // per draw; 0 on busy draws
  double welfare = 0.0;
  WelfareLedger ledger;
};

// Exact per-period optimum subject to d_n <= D_n by branch and bound.
SemSolution SemOracleDeterministic(const MarketInstance& inst,
                                   const std::vector<SpectrumDraw>& draws);

}  // namespace hsm

#endif  // HSM_SRC_POLICY_H_
