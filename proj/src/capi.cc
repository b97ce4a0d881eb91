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

#include "hsm/hsm.h"

#include <exception>
#include <new>
#include <string>

#include "config.h"
#include "experiment.h"
#include "graph.h"
#include "mwis.h"
#include "policy.h"

struct hsm_graph {
  hsm::ConflictGraph graph;
};

struct hsm_instance {
  hsm::Config config;
  hsm::MarketInstance inst;
};

struct hsm_policy {
  hsm::Policy policy;
};

namespace {

thread_local std::string last_error;

hsm_status ToStatus(hsm::ErrorCode code) {
  return static_cast<hsm_status>(static_cast<int>(code));
}

template <typename F>
hsm_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return HSM_OK;
  } catch (const hsm::Error& e) {
    last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return HSM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HSM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return HSM_ERR_INTERNAL;
  }
}

void NotNull(const void* p, const char* what) {
  hsm::Require(p != nullptr, std::string(what) + " must not be null");
}

hsm::VertexSet IdsToSet(const hsm::ConflictGraph& g, const int* ids,
                        size_t n) {
  hsm::VertexSet s = 0;
  for (size_t i = 0; i < n; ++i) {
    hsm::Require(ids[i] >= 1 && ids[i] <= g.num_vertices(),
                 "vertex id out of range: " + std::to_string(ids[i]));
    s |= hsm::Bit(ids[i] - 1);
  }
  return s;
}

void SetToIds(hsm::VertexSet s, int* out, size_t capacity, size_t* count) {
  std::vector<int> members = hsm::Members(s);
  if (count) *count = members.size();
  for (size_t i = 0; i < members.size() && i < capacity; ++i) {
    out[i] = members[i] + 1;
  }
}

void CopyOut(const std::vector<double>& v, double* out, size_t capacity,
             size_t* count) {
  if (count) *count = v.size();
  for (size_t i = 0; i < v.size() && i < capacity; ++i) out[i] = v[i];
}

hsm::SolverKind ToSolver(hsm_solver s) {
  hsm::Require(s == HSM_SOLVER_EXACT || s == HSM_SOLVER_GREEDY,
               "unknown solver");
  return s == HSM_SOLVER_EXACT ? hsm::SolverKind::kExact
                               : hsm::SolverKind::kGreedy;
}

}  // namespace

extern "C" {

const char* hsm_version(void) { return "1.0.0"; }

const char* hsm_status_name(hsm_status status) {
  switch (status) {
    case HSM_OK:
      return "ok";
    case HSM_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case HSM_ERR_TOO_LARGE:
      return "too large";
    case HSM_ERR_NOT_INDEPENDENT:
      return "not independent";
    case HSM_ERR_NOT_CONVERGED:
      return "not converged";
    case HSM_ERR_IO:
      return "i/o error";
    case HSM_ERR_PARSE:
      return "parse error";
    case HSM_ERR_BUSY_SLOT:
      return "busy slot";
    case HSM_ERR_INFEASIBLE:
      return "infeasible";
    case HSM_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* hsm_last_error(void) { return last_error.c_str(); }

hsm_status hsm_graph_create(int num_spot, int num_contract, const int* edges,
                            size_t num_edges, hsm_graph** out) {
  return Guard([&] {
    NotNull(out, "out");
    if (num_edges) NotNull(edges, "edges");
    std::vector<std::pair<int, int>> list;
    for (size_t i = 0; i < num_edges; ++i) {
      list.emplace_back(edges[2 * i], edges[2 * i + 1]);
    }
    *out = new hsm_graph{
        hsm::ConflictGraph::Create(num_spot, num_contract, list)};
  });
}

hsm_status hsm_graph_load(const char* path, hsm_graph** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new hsm_graph{hsm::ConflictGraph::Load(path)};
  });
}

hsm_status hsm_graph_save(const hsm_graph* g, const char* path) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(path, "path");
    g->graph.Save(path);
  });
}

void hsm_graph_free(hsm_graph* g) { delete g; }

hsm_status hsm_graph_size(const hsm_graph* g, int* num_spot,
                          int* num_contract) {
  return Guard([&] {
    NotNull(g, "graph");
    if (num_spot) *num_spot = g->graph.num_spot();
    if (num_contract) *num_contract = g->graph.num_contract();
  });
}

hsm_status hsm_graph_count_independent_sets(const hsm_graph* g, const int* ids,
                                            size_t num_ids, uint64_t* count) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(count, "count");
    if (num_ids) NotNull(ids, "ids");
    *count = hsm::EnumerateIndependentSets(g->graph,
                                           IdsToSet(g->graph, ids, num_ids))
                 .size();
  });
}

hsm_status hsm_graph_side_market(const hsm_graph* g, const int* contract_ids,
                                 size_t n, int* out_ids, size_t capacity,
                                 size_t* count) {
  return Guard([&] {
    NotNull(g, "graph");
    if (n) NotNull(contract_ids, "contract_ids");
    if (capacity) NotNull(out_ids, "out_ids");
    hsm::VertexSet s = IdsToSet(g->graph, contract_ids, n);
    hsm::Require((s & ~g->graph.contract_mask()) == 0,
                 "side market takes contract users only");
    SetToIds(hsm::SideMarket(g->graph, s), out_ids, capacity, count);
  });
}

hsm_status hsm_mwis(const hsm_graph* g, const double* weights,
                    hsm_solver solver, int* out_ids, size_t capacity,
                    size_t* count, double* weight) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(weights, "weights");
    if (capacity) NotNull(out_ids, "out_ids");
    hsm::VertexWeights w(weights, weights + g->graph.num_vertices());
    hsm::MwisResult r =
        hsm::Solve(ToSolver(solver), g->graph, w, g->graph.all());
    SetToIds(r.set, out_ids, capacity, count);
    if (weight) *weight = r.weight;
  });
}

hsm_status hsm_graph_schedulable(const hsm_graph* g, const double* alloc,
                                 int* feasible) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(alloc, "alloc");
    NotNull(feasible, "feasible");
    hsm::FractionalAllocation a(alloc, alloc + g->graph.num_vertices());
    *feasible = hsm::CheckSchedulable(g->graph, a).has_value() ? 1 : 0;
  });
}

hsm_status hsm_instance_load(const char* config_path, uint64_t seed,
                             hsm_instance** out) {
  return Guard([&] {
    NotNull(config_path, "config_path");
    NotNull(out, "out");
    auto* h = new hsm_instance;
    try {
      h->config = hsm::LoadConfig(config_path);
      h->inst = hsm::BuildInstance(h->config, seed);
    } catch (...) {
      delete h;
      throw;
    }
    *out = h;
  });
}

void hsm_instance_free(hsm_instance* inst) { delete inst; }

hsm_status hsm_instance_graph(const hsm_instance* inst, hsm_graph** out) {
  return Guard([&] {
    NotNull(inst, "instance");
    NotNull(out, "out");
    *out = new hsm_graph{inst->inst.graph};
  });
}

hsm_status hsm_policy_solve(const hsm_instance* inst, uint64_t seed,
                            int samples, double tol, int max_iter,
                            hsm_policy** out) {
  return Guard([&] {
    NotNull(inst, "instance");
    NotNull(out, "out");
    hsm::ExperimentSettings settings = inst->config.experiment;
    if (samples > 0) settings.samples = samples;
    if (tol > 0.0) settings.tol = tol;
    if (max_iter > 0) settings.max_iter = max_iter;
    hsm::ContractSetTable table = hsm::BuildContractSets(inst->inst.graph);
    *out = new hsm_policy{hsm::FitPolicy(inst->inst, table, settings, seed)};
  });
}

hsm_status hsm_policy_load(const char* path, hsm_policy** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new hsm_policy{hsm::LoadPolicy(path)};
  });
}

hsm_status hsm_policy_save(const hsm_policy* p, const char* path) {
  return Guard([&] {
    NotNull(p, "policy");
    NotNull(path, "path");
    hsm::SavePolicy(p->policy, path);
  });
}

void hsm_policy_free(hsm_policy* p) { delete p; }

hsm_status hsm_policy_lambdas(const hsm_policy* p, double* out,
                              size_t capacity, size_t* count) {
  return Guard([&] {
    NotNull(p, "policy");
    if (capacity) NotNull(out, "out");
    CopyOut(p->policy.lambdas, out, capacity, count);
  });
}

hsm_status hsm_policy_expected_demand(const hsm_policy* p, double* out,
                                      size_t capacity, size_t* count) {
  return Guard([&] {
    NotNull(p, "policy");
    if (capacity) NotNull(out, "out");
    CopyOut(p->policy.expected_demand, out, capacity, count);
  });
}

hsm_status hsm_policy_expected_welfare(const hsm_policy* p, double* welfare) {
  return Guard([&] {
    NotNull(p, "policy");
    NotNull(welfare, "welfare");
    *welfare = p->policy.expected_welfare;
  });
}

namespace {

void CheckPolicyFits(const hsm_instance* inst, const hsm_policy* p) {
  NotNull(inst, "instance");
  NotNull(p, "policy");
  hsm::Require(static_cast<int>(p->policy.lambdas.size()) == inst->inst.N(),
               "policy has " + std::to_string(p->policy.lambdas.size()) +
                   " prices for " + std::to_string(inst->inst.N()) +
                   " contract users");
}

}  // namespace

hsm_status hsm_write_auction_trace(const hsm_instance* inst,
                                   const hsm_policy* p, uint64_t seed,
                                   hsm_solver solver, const char* csv_path) {
  return Guard([&] {
    CheckPolicyFits(inst, p);
    NotNull(csv_path, "csv_path");
    hsm::Rng availability = hsm::Rng::Stream(seed, "period-availability");
    hsm::Rng utilities = hsm::Rng::Stream(seed, "period-utilities");
    hsm::PeriodResult period = hsm::RunPeriod(
        inst->inst, p->policy, ToSolver(solver), availability, utilities);
    hsm::WriteFile(csv_path, hsm::TraceCsv(period.trace));
  });
}

hsm_status hsm_write_lossbound(const hsm_instance* inst, const hsm_policy* p,
                               uint64_t seed, const double* e0, size_t n,
                               const char* csv_path) {
  return Guard([&] {
    CheckPolicyFits(inst, p);
    NotNull(csv_path, "csv_path");
    std::vector<double> grid = inst->config.experiment.e0_grid;
    if (n) {
      NotNull(e0, "e0");
      grid.assign(e0, e0 + n);
    }
    hsm::ContractSetTable table = hsm::BuildContractSets(inst->inst.graph);
    auto reports = hsm::LossSweep(inst->inst, table, p->policy,
                                  inst->config.experiment, seed, grid);
    hsm::WriteFile(csv_path, hsm::LossboundCsv(reports, inst->inst.N()));
  });
}

hsm_status hsm_simulate(const char* config_path, uint64_t seed,
                        const char* out_dir) {
  return Guard([&] {
    NotNull(config_path, "config_path");
    NotNull(out_dir, "out_dir");
    hsm::Simulate(hsm::LoadConfig(config_path), seed, out_dir);
  });
}

hsm_status hsm_sweep(const char* config_path, const char* param,
                     const double* values, size_t n, uint64_t first_seed,
                     int seeds, const char* out_dir) {
  return Guard([&] {
    NotNull(config_path, "config_path");
    NotNull(param, "param");
    NotNull(out_dir, "out_dir");
    hsm::Config config = hsm::LoadConfig(config_path);
    std::vector<double> grid = config.experiment.irc_values;
    if (n) {
      NotNull(values, "values");
      grid.assign(values, values + n);
    }
    hsm::Sweep(config, param, grid, first_seed,
               seeds > 0 ? seeds : config.experiment.seeds, out_dir);
  });
}

}  // extern "C"
