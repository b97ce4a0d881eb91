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

#include "lp.h"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "common.h"

namespace hsm::lp {

std::optional<std::vector<double>> FindFeasiblePoint(
    const std::vector<std::vector<double>>& a, const std::vector<double>& b,
    double tolerance) {
  const std::size_t rows = a.size();
  Require(b.size() == rows, "lp: row count mismatch");
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  for (const auto& r : a) Require(r.size() == cols, "lp: ragged matrix");

  // Tableau columns: structural, artificial, rhs. Rows are sign-normalised
  // so that the artificial basis starts feasible.
  const std::size_t width = cols + rows + 1;
  std::vector<std::vector<double>> t(rows + 1, std::vector<double>(width));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    double sign = b[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < cols; ++j) t[i][j] = sign * a[i][j];
    t[i][cols + i] = 1.0;
    t[i][width - 1] = sign * b[i];
    basis[i] = cols + i;
  }
  // Objective row holds reduced costs of minimising the artificial sum.
  std::vector<double>& obj = t[rows];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) obj[j] -= t[i][j];
    obj[width - 1] -= t[i][width - 1];
  }

  const std::size_t max_pivots = 50 * (rows + cols) + 1000;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_pivots) Fail(ErrorCode::kInternal, "lp: pivot limit");
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (obj[j] < -tolerance) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = rows;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] > tolerance) {
        double ratio = t[i][width - 1] / t[i][enter];
        if (leave == rows || ratio < best_ratio - 1e-15 ||
            (std::fabs(ratio - best_ratio) <= 1e-15 &&
             basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave == rows) break;  // Unbounded direction; cannot occur here.
    double pivot = t[leave][enter];
    for (double& x : t[leave]) x /= pivot;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      double factor = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= factor * t[leave][j];
    }
    basis[leave] = enter;
  }

  double infeasibility = -obj[width - 1];
  double scale = 1.0;
  for (double v : b) scale += std::fabs(v);
  if (infeasibility > 1e-9 * scale) return std::nullopt;

  std::vector<double> x(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < cols) x[basis[i]] = std::max(0.0, t[i][width - 1]);
  }
  return x;
}

}  // namespace hsm::lp
