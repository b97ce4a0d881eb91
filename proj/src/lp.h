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

#ifndef HSM_SRC_LP_H_
#define HSM_SRC_LP_H_

#include <optional>
#include <vector>

namespace hsm::lp {

// Phase-one dense simplex with Bland's rule. Finds x >= 0 with A x = b,
// or returns nullopt when the system is infeasible. `a` is row-major with
// a.size() rows; every row must have the same length.
std::optional<std::vector<double>> FindFeasiblePoint(
    const std::vector<std::vector<double>>& a, const std::vector<double>& b,
    double tolerance = 1e-10);

}  // namespace hsm::lp

#endif  // HSM_SRC_LP_H_
