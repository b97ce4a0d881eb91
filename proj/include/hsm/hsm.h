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

// C interface to the hybrid spectrum market engine. All handles are opaque
// and owned by the caller once returned; release them with the matching
// *_free function. Every call returns a status code; on failure a message
// for the calling thread is available from hsm_last_error().

#ifndef HSM_HSM_H_
#define HSM_HSM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HSM_API __declspec(dllexport)
#else
#define HSM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hsm_status {
  HSM_OK = 0,
  HSM_ERR_INVALID_ARGUMENT = 1,
  HSM_ERR_TOO_LARGE = 2,
  HSM_ERR_NOT_INDEPENDENT = 3,
  HSM_ERR_NOT_CONVERGED = 4,
  HSM_ERR_IO = 5,
  HSM_ERR_PARSE = 6,
  HSM_ERR_BUSY_SLOT = 7,
  HSM_ERR_INFEASIBLE = 8,
  HSM_ERR_INTERNAL = 9,
} hsm_status;

typedef enum hsm_solver {
  HSM_SOLVER_EXACT = 0,
  HSM_SOLVER_GREEDY = 1,
} hsm_solver;

typedef struct hsm_graph hsm_graph;
typedef struct hsm_instance hsm_instance;
typedef struct hsm_policy hsm_policy;

HSM_API const char* hsm_version(void);
HSM_API const char* hsm_status_name(hsm_status status);
// Message of the last failed call on this thread; empty after success.
HSM_API const char* hsm_last_error(void);

// Graphs. Vertex ids are 1..M for spot users and M+1..M+N for contract
// users. `edges` holds 2*num_edges ids.
HSM_API hsm_status hsm_graph_create(int num_spot, int num_contract,
                                    const int* edges, size_t num_edges,
                                    hsm_graph** out);
HSM_API hsm_status hsm_graph_load(const char* path, hsm_graph** out);
HSM_API hsm_status hsm_graph_save(const hsm_graph* g, const char* path);
HSM_API void hsm_graph_free(hsm_graph* g);
HSM_API hsm_status hsm_graph_size(const hsm_graph* g, int* num_spot,
                                  int* num_contract);
// Number of independent sets (including the empty one) among `ids`.
HSM_API hsm_status hsm_graph_count_independent_sets(const hsm_graph* g,
                                                    const int* ids,
                                                    size_t num_ids,
                                                    uint64_t* count);
// Spot users outside the neighbourhood of the given contract users. Writes
// at most `capacity` ids; `count` receives the full size.
HSM_API hsm_status hsm_graph_side_market(const hsm_graph* g,
                                         const int* contract_ids, size_t n,
                                         int* out_ids, size_t capacity,
                                         size_t* count);
// Maximum weight independent set over all vertices; `weights` has one entry
// per vertex in id order.
HSM_API hsm_status hsm_mwis(const hsm_graph* g, const double* weights,
                            hsm_solver solver, int* out_ids, size_t capacity,
                            size_t* count, double* weight);
// Whether a per-vertex allocation probability vector is a mixture of
// independent sets.
HSM_API hsm_status hsm_graph_schedulable(const hsm_graph* g,
                                         const double* alloc, int* feasible);

// Market instances built from a YAML config. `seed` drives the topology
// generator when the config does not name a graph file.
HSM_API hsm_status hsm_instance_load(const char* config_path, uint64_t seed,
                                     hsm_instance** out);
HSM_API void hsm_instance_free(hsm_instance* inst);
HSM_API hsm_status hsm_instance_graph(const hsm_instance* inst,
                                      hsm_graph** out);

// Shadow-price policy. samples <= 0, tol <= 0 or max_iter <= 0 fall back to
// the config's experiment settings.
HSM_API hsm_status hsm_policy_solve(const hsm_instance* inst, uint64_t seed,
                                    int samples, double tol, int max_iter,
                                    hsm_policy** out);
HSM_API hsm_status hsm_policy_load(const char* path, hsm_policy** out);
HSM_API hsm_status hsm_policy_save(const hsm_policy* p, const char* path);
HSM_API void hsm_policy_free(hsm_policy* p);
HSM_API hsm_status hsm_policy_lambdas(const hsm_policy* p, double* out,
                                      size_t capacity, size_t* count);
HSM_API hsm_status hsm_policy_expected_demand(const hsm_policy* p,
                                              double* out, size_t capacity,
                                              size_t* count);
HSM_API hsm_status hsm_policy_expected_welfare(const hsm_policy* p,
                                               double* welfare);

// One simulated period of slot auctions written as CSV.
HSM_API hsm_status hsm_write_auction_trace(const hsm_instance* inst,
                                           const hsm_policy* p, uint64_t seed,
                                           hsm_solver solver,
                                           const char* csv_path);
// Welfare-ratio analysis over an e0 grid written as CSV.
HSM_API hsm_status hsm_write_lossbound(const hsm_instance* inst,
                                       const hsm_policy* p, uint64_t seed,
                                       const double* e0, size_t n,
                                       const char* csv_path);

HSM_API hsm_status hsm_simulate(const char* config_path, uint64_t seed,
                                const char* out_dir);
// `param` is "irc", "irs" or "rho"; seeds <= 0 uses the config's count.
HSM_API hsm_status hsm_sweep(const char* config_path, const char* param,
                             const double* values, size_t n,
                             uint64_t first_seed, int seeds,
                             const char* out_dir);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // HSM_HSM_H_
