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

// Command-line front end over the C interface.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hsm/hsm.h"

namespace {

int Report(hsm_status status, const char* what) {
  if (status == HSM_OK) return 0;
  std::fprintf(stderr, "%s failed (%s): %s\n", what, hsm_status_name(status),
               hsm_last_error());
  return static_cast<int>(status);
}

hsm_solver ParseSolver(const std::string& name) {
  return name == "greedy" ? HSM_SOLVER_GREEDY : HSM_SOLVER_EXACT;
}

// Loads the instance and policy shared by several subcommands.
struct Loaded {
  hsm_instance* inst = nullptr;
  hsm_policy* policy = nullptr;
  ~Loaded() {
    hsm_policy_free(policy);
    hsm_instance_free(inst);
  }
};

int LoadBoth(const std::string& config, const std::string& policy,
             std::uint64_t seed, Loaded* out) {
  if (int rc = Report(hsm_instance_load(config.c_str(), seed, &out->inst),
                      "loading config")) {
    return rc;
  }
  return Report(hsm_policy_load(policy.c_str(), &out->policy),
                "loading policy");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid futures/spot spectrum market engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hsm_version()));

  std::string config, out, policy_path, solver = "exact", param = "irc";
  std::uint64_t seed = 1;
  std::uint64_t first_seed = 1;
  int samples = 0, max_iter = 0, seeds = 0;
  double tol = 0.0;
  std::vector<double> e0, values;

  auto* solve = app.add_subcommand("solve-policy", "fit shadow prices");
  solve->add_option("--config", config, "market config (YAML)")->required();
  solve->add_option("--seed", seed, "master seed");
  solve->add_option("--samples", samples, "Monte Carlo samples");
  solve->add_option("--tol", tol, "solver tolerance");
  solve->add_option("--max-iter", max_iter, "maximum Gauss-Seidel sweeps");
  solve->add_option("--out", out, "policy output file")->required();

  auto* trace = app.add_subcommand("auction-trace", "per-slot auction CSV");
  trace->add_option("--config", config, "market config (YAML)")->required();
  trace->add_option("--policy", policy_path, "policy file")->required();
  trace->add_option("--seed", seed, "master seed");
  trace->add_option("--solver", solver, "exact or greedy")
      ->check(CLI::IsMember({"exact", "greedy"}));
  trace->add_option("--out", out, "CSV output file")->required();

  auto* loss = app.add_subcommand("lossbound", "welfare-ratio analysis CSV");
  loss->add_option("--config", config, "market config (YAML)")->required();
  loss->add_option("--policy", policy_path, "policy file")->required();
  loss->add_option("--seed", seed, "master seed");
  loss->add_option("--e0", e0, "comma-separated e0 grid")->delimiter(',');
  loss->add_option("--out", out, "CSV output file")->required();

  auto* sim = app.add_subcommand("simulate", "full single-seed experiment");
  sim->add_option("--config", config, "market config (YAML)")->required();
  sim->add_option("--seed", seed, "master seed");
  sim->add_option("--out", out, "output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "strategy comparison sweep");
  sweep->add_option("--config", config, "market config (YAML)")->required();
  sweep->add_option("--param", param, "irc, irs or rho")
      ->check(CLI::IsMember({"irc", "irs", "rho"}));
  sweep->add_option("--values", values, "comma-separated values")
      ->delimiter(',');
  sweep->add_option("--seeds", seeds, "number of seeds");
  sweep->add_option("--first-seed", first_seed, "first seed");
  sweep->add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (*solve) {
    Loaded h;
    if (int rc = Report(hsm_instance_load(config.c_str(), seed, &h.inst),
                        "loading config")) {
      return rc;
    }
    if (int rc = Report(
            hsm_policy_solve(h.inst, seed, samples, tol, max_iter, &h.policy),
            "solving policy")) {
      return rc;
    }
    return Report(hsm_policy_save(h.policy, out.c_str()), "saving policy");
  }
  if (*trace) {
    Loaded h;
    if (int rc = LoadBoth(config, policy_path, seed, &h)) return rc;
    return Report(hsm_write_auction_trace(h.inst, h.policy, seed,
                                          ParseSolver(solver), out.c_str()),
                  "writing auction trace");
  }
  if (*loss) {
    Loaded h;
    if (int rc = LoadBoth(config, policy_path, seed, &h)) return rc;
    return Report(hsm_write_lossbound(h.inst, h.policy, seed, e0.data(),
                                      e0.size(), out.c_str()),
                  "writing loss bound");
  }
  if (*sim) {
    return Report(hsm_simulate(config.c_str(), seed, out.c_str()),
                  "simulation");
  }
  if (*sweep) {
    return Report(hsm_sweep(config.c_str(), param.c_str(), values.data(),
                            values.size(), first_seed, seeds, out.c_str()),
                  "sweep");
  }
  return 0;
}
