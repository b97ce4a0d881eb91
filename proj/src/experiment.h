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

#ifndef HSM_SRC_EXPERIMENT_H_
#define HSM_SRC_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "config.h"
#include "lossbound.h"
#include "policy.h"
#include "simlab.h"

namespace hsm {

// Fits the policy on `settings.samples` draws of the seed's "mc" stream,
// dispatching on the contracts' penalty kind.
Policy FitPolicy(const MarketInstance& inst, const ContractSetTable& table,
                 const ExperimentSettings& settings, std::uint64_t seed);

struct SeedContext {
  MarketInstance inst;
  ContractSetTable table;
  Policy policy;
};

SeedContext PrepareSeed(const Config& config, std::uint64_t seed);

struct StrategyRow {
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::kOptimal;
  BankWelfare welfare;
};

// All strategies on one shared bank of simulated periods.
std::vector<StrategyRow> CompareStrategies(const SeedContext& ctx,
                                           const ExperimentSettings& settings,
                                           std::uint64_t seed);

// Loss analysis on one shared sample set; every e0 reuses the same uniform
// draws so the ratios are coupled across the grid.
std::vector<LossBoundReport> LossSweep(const MarketInstance& inst,
                                       const ContractSetTable& table,
                                       const Policy& policy,
                                       const ExperimentSettings& settings,
                                       std::uint64_t seed,
                                       const std::vector<double>& e0_grid);

struct GapRow {
  int T = 0;
  double expected = 0.0;
  double strict = 0.0;
  double gap = 0.0;
  int periods = 0;
};

// Demand and payment scale with T relative to the configured T. One slot
// stream is cut into periods of each length.
std::vector<GapRow> GapSweep(const Config& config, const MarketInstance& inst,
                             std::uint64_t seed);

std::string FormatNumber(double x);

std::string StrategyCsv(const std::vector<StrategyRow>& rows, int num_contract,
                        const std::string& param, double value);
// Mean and standard error across seeds for each (value, strategy).
struct SweepPoint {
  double value = 0.0;
  std::vector<StrategyRow> rows;
};
std::string WelfareSweepCsv(const std::string& param,
                            const std::vector<SweepPoint>& points);
std::string LossboundCsv(const std::vector<LossBoundReport>& reports,
                         int num_contract);
std::string GapCsv(const std::vector<GapRow>& rows);
std::string TraceCsv(const std::vector<TraceRow>& rows);
std::string LedgerCsv(const MarketInstance& inst, const PeriodResult& period);
std::string FiggenSpec(const std::vector<std::string>& kinds);

// Full single-seed run written into `out_dir`.
void Simulate(const Config& config, std::uint64_t seed,
              const std::string& out_dir);

// Strategy comparison over a parameter sweep (irc, irs or rho).
void Sweep(const Config& config, const std::string& param,
           const std::vector<double>& values, std::uint64_t first_seed,
           int seeds, const std::string& out_dir);

}  // namespace hsm

#endif  // HSM_SRC_EXPERIMENT_H_
