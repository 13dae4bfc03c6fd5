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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dgap/assignment.hpp"
#include "dgap/common.hpp"
#include "support/brute_force.hpp"

namespace dgap {
namespace {

using Pairs = std::vector<std::pair<int, int>>;

TEST(Assignment, DiagonalOptimum) {
  Eigen::MatrixXd c(2, 2);
  c << 1, 2, 2, 1;
  const auto m = solve_assignment(c);
  EXPECT_EQ(m, (Pairs{{0, 0}, {1, 1}}));
  EXPECT_DOUBLE_EQ(assignment_cost(c, m), 2.0);
  EXPECT_DOUBLE_EQ(testing::brute_force_assignment(c), 2.0);
}

TEST(Assignment, AntiDiagonalOptimum) {
  Eigen::MatrixXd c(2, 2);
  c << 3, 1, 1, 3;
  const auto m = solve_assignment(c);
  EXPECT_EQ(m, (Pairs{{0, 1}, {1, 0}}));
  EXPECT_DOUBLE_EQ(assignment_cost(c, m), 2.0);
  EXPECT_DOUBLE_EQ(testing::brute_force_assignment(c), 2.0);
}

TEST(Assignment, SingleRowPicksArgmin) {
  Eigen::MatrixXd c(1, 3);
  c << 5, 1, 7;
  EXPECT_EQ(solve_assignment(c), (Pairs{{0, 1}}));
}

TEST(Assignment, EmptyMatrixGivesEmptyMatching) {
  EXPECT_TRUE(solve_assignment(Eigen::MatrixXd(0, 0)).empty());
  EXPECT_TRUE(solve_assignment(Eigen::MatrixXd(0, 4)).empty());
}

TEST(Assignment, RejectsNegativeOrNonFiniteCosts) {
  Eigen::MatrixXd c(2, 2);
  c << 1, -1, 0, 2;
  EXPECT_THROW(solve_assignment(c), InvalidInput);
  c(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve_assignment(c), InvalidInput);
}

TEST(AssignmentProperty, MatchesBruteForceOnSquareAndRectangular) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 400; ++trial) {
    const int r = dim(rng);
    const int c = dim(rng);
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = trial % 5 == 0 ? std::floor(u(rng)) : u(rng);  // ties included
    const auto match = solve_assignment(m);
    ASSERT_EQ(static_cast<int>(match.size()), std::min(r, c));
    std::vector<int> rows, cols;
    for (const auto& [a, b] : match) {
      rows.push_back(a);
      cols.push_back(b);
    }
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    EXPECT_EQ(std::adjacent_find(rows.begin(), rows.end()), rows.end());
    EXPECT_EQ(std::adjacent_find(cols.begin(), cols.end()), cols.end());
    EXPECT_NEAR(assignment_cost(m, match), testing::brute_force_assignment(m), 1e-9) << r << "x" << c;
  }
}

}  // namespace
}  // namespace dgap
