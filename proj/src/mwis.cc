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

#include "mwis.h"

#include <string>

namespace hsm {

double SetWeight(const VertexWeights& w, VertexSet s) {
  double total = 0.0;
  for (; s; s &= s - 1) total += w[Lowest(s)];
  return total;
}

namespace internal {
namespace {

// Include-first depth-first search in ascending vertex order, so the first
// optimum reached is the lexicographically smallest one.
class ExactSearcher {
 public:
  ExactSearcher(const VertexSet* adj, const double* w, double slack)
      : adj_(adj), w_(w), slack_(slack) {}

  void Run(VertexSet p, VertexSet cur, double cur_w) {
    if (p == 0) {
      Offer(cur, cur_w);
      return;
    }
    double bound = cur_w;
    bool independent = true;
    for (VertexSet rest = p; rest; rest &= rest - 1) {
      int u = Lowest(rest);
      bound += w_[u];
      if (adj_[u] & p) independent = false;
    }
    if (bound + slack_ < best_w_) return;
    if (independent) {
      for (VertexSet rest = p; rest; rest &= rest - 1) cur_w += w_[Lowest(rest)];
      Offer(cur | p, cur_w);
      return;
    }
    int v = Lowest(p);
    VertexSet rest = p & ~Bit(v);
    Run(rest & ~adj_[v], cur | Bit(v), cur_w + w_[v]);
    Run(rest, cur, cur_w);
  }

  VertexSet best_set() const { return best_set_; }
  double best_weight() const { return best_w_; }

 private:
  void Offer(VertexSet s, double weight) {
    if (weight > best_w_ || (weight == best_w_ && LexLess(s, best_set_))) {
      best_w_ = weight;
      best_set_ = s;
    }
  }

  const VertexSet* adj_;
  const double* w_;
  double slack_;
  VertexSet best_set_ = 0;
  double best_w_ = 0.0;
};

}  // namespace

MwisResult ExactSearch(const VertexSet* adj, const double* w,
                       VertexSet candidates) {
  VertexSet positive = 0;
  double total = 0.0;
  for (VertexSet rest = candidates; rest; rest &= rest - 1) {
    int v = Lowest(rest);
    if (w[v] > 0.0) {
      positive |= Bit(v);
      total += w[v];
    }
  }
  ExactSearcher search(adj, w, 1e-12 * (1.0 + total));
  search.Run(positive, 0, 0.0);
  MwisResult result;
  result.set = search.best_set();
  result.weight = search.best_weight();
  result.exact = true;
  return result;
}

}  // namespace internal

namespace {

void CheckWeights(const ConflictGraph& g, const VertexWeights& w) {
  Require(static_cast<int>(w.size()) == g.num_vertices(),
          "one weight per vertex required");
}

}  // namespace

MwisResult MwisExact(const ConflictGraph& g, const VertexWeights& w,
                     VertexSet restrict_to) {
  CheckWeights(g, w);
  restrict_to &= g.all();
  if (Count(restrict_to) > kEnumerationLimit) {
    Fail(ErrorCode::kTooLarge,
         "instance too large for exact MWIS (" +
             std::to_string(Count(restrict_to)) + " vertices)");
  }
  return internal::ExactSearch(g.adjacency().data(), w.data(), restrict_to);
}

MwisResult MwisGreedy(const ConflictGraph& g, const VertexWeights& w,
                      VertexSet restrict_to) {
  CheckWeights(g, w);
  VertexSet survivors = restrict_to & g.all();
  MwisResult result;
  result.exact = false;
  while (true) {
    int pick = -1;
    for (VertexSet rest = survivors; rest; rest &= rest - 1) {
      int v = Lowest(rest);
      if (w[v] > 0.0 && (pick < 0 || w[v] > w[pick])) pick = v;
    }
    if (pick < 0) break;
    result.set |= Bit(pick);
    survivors &= ~(g.neighbors(pick) | Bit(pick));
  }
  result.weight = SetWeight(w, result.set);
  return result;
}

MwisResult MwisDegraded(const ConflictGraph& g, const VertexWeights& w,
                        VertexSet restrict_to, double e0, Rng& rng) {
  Require(e0 >= 0.0 && e0 <= 1.0, "epsilon interval must satisfy 0<=e0<=1");
  MwisResult result = MwisExact(g, w, restrict_to);
  double eps = e0 == 1.0 ? 1.0 : rng.Uniform(e0, 1.0);
  result.weight *= eps;
  result.exact = false;
  result.ratio_sample = eps;
  return result;
}

MwisResult Solve(SolverKind kind, const ConflictGraph& g,
                 const VertexWeights& w, VertexSet restrict_to) {
  return kind == SolverKind::kExact ? MwisExact(g, w, restrict_to)
                                    : MwisGreedy(g, w, restrict_to);
}

}  // namespace hsm
