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

#include "graph.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "lp.h"

namespace hsm {

ConflictGraph ConflictGraph::Create(
    int num_spot, int num_contract,
    const std::vector<std::pair<int, int>>& edges) {
  Require(num_spot >= 0 && num_contract >= 0, "negative vertex count");
  Require(num_spot + num_contract <= kMaxVertices,
          "graph exceeds " + std::to_string(kMaxVertices) + " vertices");
  ConflictGraph g;
  g.num_spot_ = num_spot;
  g.num_contract_ = num_contract;
  g.adj_.assign(num_spot + num_contract, 0);
  const int n = num_spot + num_contract;
  for (const auto& [u, v] : edges) {
    Require(u >= 1 && u <= n && v >= 1 && v <= n,
            "edge endpoint out of range: " + std::to_string(u) + " " +
                std::to_string(v));
    Require(u != v, "self-loop at vertex " + std::to_string(u));
    g.adj_[u - 1] |= Bit(v - 1);
    g.adj_[v - 1] |= Bit(u - 1);
  }
  return g;
}

bool ConflictGraph::IsIndependent(VertexSet s) const {
  for (VertexSet rest = s; rest; rest &= rest - 1) {
    if (adj_[Lowest(rest)] & s) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> ConflictGraph::Edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < num_vertices(); ++u) {
    for (VertexSet rest = adj_[u] & ~FirstN(u + 1); rest; rest &= rest - 1) {
      out.emplace_back(u + 1, Lowest(rest) + 1);
    }
  }
  return out;
}

ConflictGraph ConflictGraph::Parse(std::istream& in) {
  std::string line;
  int m = -1;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (m < 0) {
      std::string contract_word;
      if (first != "spot" || !(fields >> m) || !(fields >> contract_word) ||
          contract_word != "contract" || !(fields >> n) || m < 0 || n < 0) {
        Fail(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                    ": expected 'spot M contract N'");
      }
      continue;
    }
    int u = 0;
    int v = 0;
    std::istringstream pair_fields(line);
    std::string extra;
    if (!(pair_fields >> u >> v) || (pair_fields >> extra)) {
      Fail(ErrorCode::kParse,
           "line " + std::to_string(line_no) + ": expected 'u v'");
    }
    edges.emplace_back(u, v);
  }
  if (m < 0) Fail(ErrorCode::kParse, "missing 'spot M contract N' header");
  try {
    return Create(m, n, edges);
  } catch (const Error& e) {
    Fail(ErrorCode::kParse, e.what());
  }
}

ConflictGraph ConflictGraph::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open graph file " + path);
  return Parse(in);
}

void ConflictGraph::Write(std::ostream& out) const {
  out << "spot " << num_spot_ << " contract " << num_contract_ << "\n";
  for (const auto& [u, v] : Edges()) out << u << " " << v << "\n";
}

void ConflictGraph::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write graph file " + path);
  Write(out);
}

std::vector<VertexSet> EnumerateIndependentSets(const ConflictGraph& g,
                                                VertexSet restrict_to) {
  restrict_to &= g.all();
  if (Count(restrict_to) > kEnumerationLimit) {
    Fail(ErrorCode::kTooLarge, "instance too large for enumeration (" +
                                   std::to_string(Count(restrict_to)) +
                                   " vertices, limit " +
                                   std::to_string(kEnumerationLimit) + ")");
  }
  std::vector<VertexSet> out;
  const auto& adj = g.adjacency();
  std::function<void(VertexSet, VertexSet)> rec = [&](VertexSet candidates,
                                                      VertexSet current) {
    if (candidates == 0) {
      out.push_back(current);
      return;
    }
    int v = Lowest(candidates);
    VertexSet rest = candidates & ~Bit(v);
    rec(rest, current);
    rec(rest & ~adj[v], current | Bit(v));
  };
  rec(restrict_to, 0);
  return out;
}

VertexSet SideMarketUnchecked(const ConflictGraph& g, VertexSet contract_set) {
  VertexSet blocked = 0;
  for (VertexSet rest = contract_set; rest; rest &= rest - 1) {
    blocked |= g.neighbors(Lowest(rest));
  }
  return g.spot_mask() & ~blocked;
}

VertexSet SideMarket(const ConflictGraph& g, VertexSet contract_set) {
  Require((contract_set & ~g.contract_mask()) == 0,
          "side market takes contract users only");
  if (!g.IsIndependent(contract_set)) {
    Fail(ErrorCode::kNotIndependent, "contract set is not independent");
  }
  return SideMarketUnchecked(g, contract_set);
}

std::vector<VertexSet> MaximalCliques(const ConflictGraph& g,
                                      VertexSet restrict_to) {
  restrict_to &= g.all();
  const auto& adj = g.adjacency();
  std::vector<VertexSet> out;
  std::function<void(VertexSet, VertexSet, VertexSet)> expand =
      [&](VertexSet r, VertexSet p, VertexSet x) {
        if (p == 0 && x == 0) {
          out.push_back(r);
          return;
        }
        // Pivot maximising |P ∩ N(u)|.
        int pivot = -1;
        int best = -1;
        for (VertexSet px = p | x; px; px &= px - 1) {
          int u = Lowest(px);
          int c = Count(p & adj[u]);
          if (c > best) {
            best = c;
            pivot = u;
          }
        }
        for (VertexSet cand = p & ~adj[pivot]; cand; cand &= cand - 1) {
          int v = Lowest(cand);
          expand(r | Bit(v), p & adj[v], x & adj[v]);
          p &= ~Bit(v);
          x |= Bit(v);
        }
      };
  if (restrict_to) expand(0, restrict_to, 0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void ValidateAllocation(const ConflictGraph& g,
                        const FractionalAllocation& alloc) {
  Require(static_cast<int>(alloc.size()) == g.num_vertices(),
          "allocation must cover every vertex");
  for (double a : alloc) {
    Require(a >= 0.0 && a <= 1.0, "allocation entries must lie in [0,1]");
  }
}

}  // namespace

bool CheckCliqueConstraints(const ConflictGraph& g,
                            const FractionalAllocation& alloc) {
  ValidateAllocation(g, alloc);
  for (VertexSet clique : MaximalCliques(g, g.all())) {
    double total = 0.0;
    for (int v : Members(clique)) total += alloc[v];
    if (total > 1.0 + 1e-12) return false;
  }
  return true;
}

std::optional<Schedule> CheckSchedulable(const ConflictGraph& g,
                                         const FractionalAllocation& alloc) {
  ValidateAllocation(g, alloc);
  std::vector<VertexSet> sets = EnumerateIndependentSets(g, g.all());
  // Columns: nonempty independent sets, then the idle share (empty set).
  std::vector<VertexSet> columns;
  for (VertexSet s : sets) {
    if (s != 0) columns.push_back(s);
  }
  const int v_count = g.num_vertices();
  const std::size_t width = columns.size() + 1;
  std::vector<std::vector<double>> a(v_count + 1,
                                     std::vector<double>(width, 0.0));
  std::vector<double> b(v_count + 1, 0.0);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (int v : Members(columns[j])) a[v][j] = 1.0;
    a[v_count][j] = 1.0;
  }
  a[v_count][columns.size()] = 1.0;
  for (int v = 0; v < v_count; ++v) b[v] = alloc[v];
  b[v_count] = 1.0;

  auto x = lp::FindFeasiblePoint(a, b);
  if (!x) return std::nullopt;
  Schedule schedule;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if ((*x)[j] > 1e-12) schedule.push_back({columns[j], (*x)[j]});
  }
  return schedule;
}

}  // namespace hsm
