// Copyright 2026 The dynamic_gap Authors
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

#include "dgap/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dgap/common.hpp"

namespace dgap {

namespace {

// Shortest augmenting path with row/column potentials; requires rows <= cols.
// Indices are 1-based internally, column 0 is the virtual start column.
std::vector<int> hungarian_rows_le_cols(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<int> match(static_cast<std::size_t>(m + 1), 0);  // column -> row
  std::vector<int> way(static_cast<std::size_t>(m + 1), 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), kInf);
    std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = a(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (match[static_cast<std::size_t>(j)] > 0) row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return row_to_col;
}

}  // namespace

std::vector<std::pair<int, int>> solve_assignment(const Eigen::MatrixXd& cost) {
  std::vector<std::pair<int, int>> out;
  if (cost.rows() == 0 || cost.cols() == 0) return out;
  for (Eigen::Index i = 0; i < cost.size(); ++i) {
    const double c = cost.data()[i];
    if (!std::isfinite(c) || c < 0.0) throw InvalidInput("solve_assignment: costs must be finite and nonnegative");
  }
  if (cost.rows() <= cost.cols()) {
    const auto r2c = hungarian_rows_le_cols(cost);
    for (std::size_t r = 0; r < r2c.size(); ++r) out.emplace_back(static_cast<int>(r), r2c[r]);
  } else {
    const Eigen::MatrixXd t = cost.transpose();
    const auto c2r = hungarian_rows_le_cols(t);
    for (std::size_t c = 0; c < c2r.size(); ++c) out.emplace_back(c2r[c], static_cast<int>(c));
    std::sort(out.begin(), out.end());
  }
  return out;
}

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<std::pair<int, int>>& matching) {
  double total = 0.0;
  for (const auto& [r, c] : matching) total += cost(r, c);
  return total;
}

}  // namespace dgap
