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

#ifndef HSM_SRC_CONFIG_H_
#define HSM_SRC_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "market.h"
#include "mwis.h"
#include "policy.h"
#include "simlab.h"

namespace hsm {

struct ExperimentSettings {
  int seeds = 200;              // sweep and acceptance replications
  int samples = 4000;           // Monte Carlo samples for the policy fit
  int eval_samples = 4000;      // fresh samples for loss analysis
  int eval_periods = 20;        // periods simulated for strategy comparison
  double tol = 1e-3;
  int max_iter = 200;
  int batches = 20;
  std::vector<double> e0_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<int> T_values{10, 100, 1000};
  int gap_periods = 10;         // periods at the largest T in the gap run
  std::vector<double> irc_values{100, 200, 300, 400, 500};
  SolverKind solver = SolverKind::kExact;
};

struct Config {
  std::optional<std::string> graph_path;  // resolved against the config dir
  TopologySpec generator;
  std::vector<Contract> contracts;        // one entry applies to every user
  UtilityModel utilities;
  double rho = 0.6;
  int K = 3;
  int T = 100;
  ExperimentSettings experiment;
};

Config DefaultConfig();
Config ParseConfig(const std::string& text, const std::string& base_dir = ".");
Config LoadConfig(const std::string& path);
std::string DumpConfig(const Config& config);

// Instance for one replication; the generator draws spot positions from the
// seed's "topology" stream.
MarketInstance BuildInstance(const Config& config, std::uint64_t seed);

std::string DumpPolicy(const Policy& policy);
Policy ParsePolicy(const std::string& text);
void SavePolicy(const Policy& policy, const std::string& path);
Policy LoadPolicy(const std::string& path);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace hsm

#endif  // HSM_SRC_CONFIG_H_
