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

#include "dgap/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/QR>

#include "dgap/common.hpp"

namespace dgap {

namespace {

Eigen::VectorXd passive_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<int>& passive) {
  Eigen::MatrixXd ap(A.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = A.col(passive[k]);
  return ap.colPivHouseholderQr().solve(b);
}

}  // namespace

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iterations) {
  if (A.rows() != b.size()) throw InvalidInput("nnls: dimension mismatch");
  const Eigen::Index n = A.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * std::max<double>(1.0, A.cwiseAbs().maxCoeff()) *
                     static_cast<double>(std::max(A.rows(), n));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<char> in_passive(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd w = A.transpose() * (b - A * x);

  for (int outer = 0; outer < max_iterations; ++outer) {
    int best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!in_passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = static_cast<int>(j);
      }
    }
    if (best < 0) break;
    in_passive[static_cast<std::size_t>(best)] = 1;

    for (int inner = 0; inner < max_iterations; ++inner) {
      std::vector<int> passive;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (in_passive[static_cast<std::size_t>(j)]) passive.push_back(static_cast<int>(j));
      }
      const Eigen::VectorXd zp = passive_solve(A, b, passive);
      bool all_positive = true;
      for (Eigen::Index k = 0; k < zp.size(); ++k) all_positive = all_positive && zp(k) > 0.0;
      if (all_positive) {
        x.setZero();
        for (std::size_t k = 0; k < passive.size(); ++k) x(passive[k]) = zp(static_cast<Eigen::Index>(k));
        break;
      }
      // Step toward z until the first passive variable hits zero.
      double alpha = 1.0;
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double z = zp(static_cast<Eigen::Index>(k));
        if (z <= 0.0) {
          const double xj = x(passive[k]);
          alpha = std::min(alpha, xj / (xj - z));
        }
      }
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const int j = passive[k];
        x(j) += alpha * (zp(static_cast<Eigen::Index>(k)) - x(j));
        if (x(j) <= tol) {
          x(j) = 0.0;
          in_passive[static_cast<std::size_t>(j)] = 0;
        }
      }
    }
    w = A.transpose() * (b - A * x);
  }
  return x;
}

LdpResult solve_ldp(const Eigen::MatrixXd& G, const Eigen::VectorXd& h) {
  if (G.rows() != h.size()) throw InvalidInput("solve_ldp: dimension mismatch");
  const Eigen::Index m = G.rows();
  const Eigen::Index n = G.cols();
  LdpResult out;
  out.x = Eigen::VectorXd::Zero(n);
  if (m == 0) {
    out.feasible = true;
    out.min_slack = std::numeric_limits<double>::infinity();
    return out;
  }

  Eigen::MatrixXd gs = G;
  Eigen::VectorXd hs = h;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double norm = gs.row(i).norm();
    if (norm > 0.0) {
      gs.row(i) /= norm;
      hs(i) /= norm;
    } else if (hs(i) > 0.0) {
      return out;  // 0 >= positive: infeasible
    }
  }

  Eigen::MatrixXd e(n + 1, m);
  e.topRows(n) = gs.transpose();
  e.row(n) = hs.transpose();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n + 1);
  f(n) = 1.0;

  const Eigen::VectorXd u = nnls(e, f);
  const Eigen::VectorXd r = e * u - f;
  if (r.norm() < 1e-12 || std::abs(r(n)) < 1e-14) return out;
  out.x = -r.head(n) / r(n);
  const Eigen::VectorXd slack = G * out.x - h;
  out.min_slack = slack.minCoeff();
  out.feasible = true;
  return out;
}

}  // namespace dgap
