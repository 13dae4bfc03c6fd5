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

#ifndef DGAP_ASSIGNMENT_HPP
#define DGAP_ASSIGNMENT_HPP

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dgap {

/**
 * Minimum-cost rectangular assignment (Hungarian method with potentials).
 *
 * Returns min(rows, cols) (row, col) pairs sorted by row. Costs must be finite
 * and nonnegative; an empty matrix yields an empty matching.
 */
std::vector<std::pair<int, int>> solve_assignment(const Eigen::MatrixXd& cost);

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<std::pair<int, int>>& matching);

}  // namespace dgap

#endif  // DGAP_ASSIGNMENT_HPP
