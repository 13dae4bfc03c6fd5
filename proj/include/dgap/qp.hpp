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

#ifndef DGAP_QP_HPP
#define DGAP_QP_HPP

#include <Eigen/Core>

namespace dgap {

/// Nonnegative least squares, min |A x - b| subject to x >= 0 (Lawson and Hanson).
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iterations = 0);

struct LdpResult {
  Eigen::VectorXd x;
  bool feasible{false};
  double min_slack{0.0};  ///< min_i (G x - h)_i
};

/**
 * Least distance programming: min |x|^2 subject to G x >= h.
 *
 * Solved through the dual nonnegative least squares problem
 * min |E u - f|, u >= 0 with E = [G^T; h^T] and f = e_{n+1}. Rows of G are
 * normalised first; that leaves the feasible set and the minimiser unchanged.
 */
LdpResult solve_ldp(const Eigen::MatrixXd& G, const Eigen::VectorXd& h);

}  // namespace dgap

#endif  // DGAP_QP_HPP
