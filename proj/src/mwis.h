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

#ifndef HSM_SRC_MWIS_H_
#define HSM_SRC_MWIS_H_

#include <optional>
#include <vector>

#include "common.h"
#include "graph.h"
#include "rng.h"

namespace hsm {

using VertexWeights = std::vector<double>;

struct MwisResult {
  VertexSet set = 0;
  double weight = 0.0;
  bool exact = true;
  std::optional<double> ratio_sample;
};

enum class SolverKind { kExact, kGreedy };

// Sum of member weights in ascending vertex order.
double SetWeight(const VertexWeights& w, VertexSet s);

// Maximum-weight independent subset of `restrict_to`. Only strictly
// positive vertices are used; among optimal sets the lexicographically
// smallest id sequence is returned.
MwisResult MwisExact(const ConflictGraph& g, const VertexWeights& w,
                     VertexSet restrict_to);

// Repeatedly takes the heaviest surviving positive vertex (lowest id on
// ties) and removes it with its neighbours.
MwisResult MwisGreedy(const ConflictGraph& g, const VertexWeights& w,
                      VertexSet restrict_to);

// Exact set with its value scaled by a ratio drawn from Uniform[e0, 1].
MwisResult MwisDegraded(const ConflictGraph& g, const VertexWeights& w,
                        VertexSet restrict_to, double e0, Rng& rng);

MwisResult Solve(SolverKind kind, const ConflictGraph& g,
                 const VertexWeights& w, VertexSet restrict_to);

namespace internal {

// Exact search over raw adjacency masks; no size guard.
MwisResult ExactSearch(const VertexSet* adj, const double* w,
                       VertexSet candidates);

}  // namespace internal

}  // namespace hsm

#endif  // HSM_SRC_MWIS_H_
