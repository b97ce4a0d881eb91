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

#ifndef HSM_SRC_GRAPH_H_
#define HSM_SRC_GRAPH_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "common.h"

namespace hsm {

// Conflict graph over M spot users and N contract users. Internal vertex
// index v corresponds to external id v + 1: spot users take indices
// [0, M), contract users [M, M + N).
class ConflictGraph {
 public:
  ConflictGraph() = default;

  // `edges` holds external ids (1-based). Throws on self-loops or unknown
  // endpoints. Duplicate edges are merged.
  static ConflictGraph Create(int num_spot, int num_contract,
                              const std::vector<std::pair<int, int>>& edges);

  int num_spot() const { return num_spot_; }
  int num_contract() const { return num_contract_; }
  int num_vertices() const { return num_spot_ + num_contract_; }

  VertexSet all() const { return FirstN(num_vertices()); }
  VertexSet spot_mask() const { return FirstN(num_spot_); }
  VertexSet contract_mask() const { return all() & ~spot_mask(); }
  int contract_vertex(int n) const { return num_spot_ + n; }

  VertexSet neighbors(int v) const { return adj_[v]; }
  bool adjacent(int u, int v) const { return Contains(adj_[u], v); }
  const std::vector<VertexSet>& adjacency() const { return adj_; }
  bool IsIndependent(VertexSet s) const;

  // Edges as external id pairs (u < v), sorted.
  std::vector<std::pair<int, int>> Edges() const;

  // Edge-list text format: "spot M contract N" then one "u v" per line.
  static ConflictGraph Parse(std::istream& in);
  static ConflictGraph Load(const std::string& path);
  void Write(std::ostream& out) const;
  void Save(const std::string& path) const;

 private:
  int num_spot_ = 0;
  int num_contract_ = 0;
  std::vector<VertexSet> adj_;
};

inline constexpr int kEnumerationLimit = 25;

// All independent sets of the subgraph induced by `restrict_to`, including
// the empty set.
std::vector<VertexSet> EnumerateIndependentSets(const ConflictGraph& g,
                                                VertexSet restrict_to);

// Spot users with no edge to any member of `contract_set`. The checked
// form rejects sets that are not independent.
VertexSet SideMarket(const ConflictGraph& g, VertexSet contract_set);
VertexSet SideMarketUnchecked(const ConflictGraph& g, VertexSet contract_set);

// Maximal cliques of the induced subgraph (Bron-Kerbosch with pivoting).
std::vector<VertexSet> MaximalCliques(const ConflictGraph& g,
                                      VertexSet restrict_to);

using FractionalAllocation = std::vector<double>;

bool CheckCliqueConstraints(const ConflictGraph& g,
                            const FractionalAllocation& alloc);

struct ScheduleEntry {
  VertexSet set;
  double fraction;
};
using Schedule = std::vector<ScheduleEntry>;

// Decides whether `alloc` is a mixture of independent sets by LP
// feasibility. Returns the nonzero part of a feasible mixture.
std::optional<Schedule> CheckSchedulable(const ConflictGraph& g,
                                         const FractionalAllocation& alloc);

}  // namespace hsm

#endif  // HSM_SRC_GRAPH_H_
