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

#include <random>

#include <Eigen/Dense>

#include "dgap/ahpf.hpp"
#include "dgap/qp.hpp"
#include "support/fields.hpp"
#include "support/random_gaps.hpp"

namespace dgap {
namespace {

HarmonicField single_term(const Vec2& center, double w) {
  HarmonicField f;
  f.centers = {center};
  f.weights = Eigen::VectorXd::Constant(1, w);
  f.goal = center;
  return f;
}

// Region with straight unit-length sides at bearings 100 and 80 degrees.
NavigableGap straight_wedge() {
  const Vec2 pl = polar(100.0 * kPi / 180.0, 1.0);
  const Vec2 pr = polar(80.0 * kPi / 180.0, 1.0);
  NavigableGap g;
  g.left = BezierSide{Vec2::Zero(), 0.5 * pl, pl, 1.0};
  g.right = BezierSide{Vec2::Zero(), 0.5 * pr, pr, 1.0};
  g.goal = {0.0, 0.7};
  g.horizon = 5.0;
  g.refresh_outline();
  return g;
}

NavigableGap symmetric_static_gap(double half_width) {
  const auto prop = propagate_gap(SideMotion{{-half_width, 3}, {0, 0}}, SideMotion{{half_width, 3}, {0, 0}});
  return build_navigable_gap(prop, {0, 8});
}

TEST(Discretize, StraightSideHasUniformCentersAndEqualNormals) {
  const NavigableGap g = straight_wedge();
  AhpfConfig on_curve;
  on_curve.center_offset = 0.0;
  const auto d = discretize_boundary(g, 25, on_curve);
  ASSERT_EQ(d.centers.size(), 50u);
  for (int j = 0; j < 25; ++j) {
    EXPECT_NEAR((d.centers[static_cast<std::size_t>(j)] - g.left.p1 * (j / 24.0)).norm(), 0.0, 1e-12);
  }
  const Vec2 n0 = d.samples.front().n;
  for (const auto& s : d.samples) {
    if (s.part == BoundaryPart::Left) EXPECT_NEAR((s.n - n0).norm(), 0.0, 1e-12);
  }

  // Default: the same spacing on a parallel line three spacings outside the side.
  const auto off = discretize_boundary(g, 25);
  const Vec2 dir = g.left.p1.normalized();
  for (int j = 0; j + 1 < 25; ++j) {
    const Vec2 a = off.centers[static_cast<std::size_t>(j)];
    const Vec2 b = off.centers[static_cast<std::size_t>(j + 1)];
    EXPECT_NEAR((b - a).norm(), 1.0 / 24.0, 1e-12);
    EXPECT_NEAR(std::abs(cross(dir, a)), 3.0 / 24.0, 1e-12);
    EXPECT_FALSE(g.contains(a));
  }
}

TEST(Discretize, SymmetricGapHasMirroredCenters) {
  const NavigableGap g = symmetric_static_gap(1.0);
  const auto d = discretize_boundary(g, 25);
  for (std::size_t j = 0; j < 25; ++j) {
    const Vec2 l = d.centers[j];
    const Vec2 r = d.centers[25 + j];
    EXPECT_NEAR(l.x(), -r.x(), 1e-9);
    EXPECT_NEAR(l.y(), r.y(), 1e-9);
  }
}

TEST(Discretize, CurvedSideSpacingIsNearUniform) {
  NavigableGap g;
  g.left = BezierSide{{0, 0}, {0, 1}, {-1, 1}, 1.0};
  g.right = BezierSide{{0, 0}, {1, 0}, {1, 1}, 1.0};
  g.refresh_outline();
  AhpfConfig on_curve;
  on_curve.center_offset = 0.0;
  const auto d = discretize_boundary(g, 10, on_curve);
  // Arc length between consecutive centers on the right side, by fine quadrature.
  std::vector<double> gaps;
  for (int j = 0; j + 1 < 10; ++j) {
    double s = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double u0 = (j + k / 1000.0) / 9.0;
      const double u1 = (j + (k + 1) / 1000.0) / 9.0;
      s += (g.right.point(u1) - g.right.point(u0)).norm();
    }
    gaps.push_back(s);
  }
  const double mean = g.right.length(4096) / 9.0;
  for (double s : gaps) EXPECT_NEAR(s / mean, 1.0, 0.2);
  EXPECT_NEAR((d.centers[10 + 4] - g.right.point(4.0 / 9.0)).norm(), 0.0, 1e-12);
}

TEST(Discretize, DegenerateSideIsOneCenter) {
  NavigableGap g = straight_wedge();
  g.left = BezierSide{{0, 0}, {0, 0}, {0, 0}, 1.0};
  const auto d = discretize_boundary(g, 12);
  EXPECT_EQ(d.centers.size(), 13u);
}

TEST(Discretize, RejectsTooFewCenters) {
  EXPECT_THROW(discretize_boundary(straight_wedge(), 9), InvalidInput);
}

TEST(Potential, Examples) {
  EXPECT_DOUBLE_EQ(potential({1, 0}, single_term({0, 0}, 1.0)), 0.0);
  EXPECT_NEAR(potential({std::exp(1.0), 0}, single_term({0, 0}, 1.0)), 1.0, 1e-15);
  HarmonicField two;
  two.centers = {{1, 0}, {-1, 0}};
  two.weights = Eigen::Vector2d(1.0, -1.0);
  EXPECT_DOUBLE_EQ(potential({0, 3}, two), 0.0);
  EXPECT_THROW(potential({0, 0}, single_term({0, 0}, 1.0)), Singularity);
}

TEST(Gradient, Examples) {
  EXPECT_NEAR((gradient({1, 0}, single_term({0, 0}, 1.0)) - Vec2(1, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((gradient({2, 0}, single_term({0, 0}, 1.0)) - Vec2(0.5, 0)).norm(), 0.0, 1e-15);
  EXPECT_THROW(gradient({0, 0}, single_term({0, 0}, 1.0)), Singularity);
}

TEST(Qp, SingleConstraintMinimumNorm) {
  Eigen::MatrixXd G(1, 3);
  G << 1.0, -2.0, 0.5;
  const Eigen::VectorXd h = Eigen::VectorXd::Constant(1, 0.7);
  const auto res = solve_ldp(G, h);
  ASSERT_TRUE(res.feasible);
  const Eigen::VectorXd expect = 0.7 * G.row(0).transpose() / G.row(0).squaredNorm();
  EXPECT_NEAR((res.x - expect).norm(), 0.0, 1e-12);
}

TEST(Qp, InfeasibleSystemIsReported) {
  Eigen::MatrixXd G(2, 1);
  G << 1.0, -1.0;
  const auto res = solve_ldp(G, Eigen::Vector2d(1.0, 1.0));  // x >= 1 and x <= -1
  EXPECT_FALSE(res.feasible);
}

// Minimum-norm feasible point by enumerating candidate active sets.
Eigen::VectorXd ldp_oracle(const Eigen::MatrixXd& G, const Eigen::VectorXd& h) {
  const auto m = G.rows();
  Eigen::VectorXd best;
  double best_norm = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> rows;
    for (int i = 0; i < m; ++i)
      if (mask & (1 << i)) rows.push_back(i);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(G.cols());
    if (!rows.empty()) {
      Eigen::MatrixXd gs(static_cast<Eigen::Index>(rows.size()), G.cols());
      Eigen::VectorXd hs(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t k = 0; k < rows.size(); ++k) {
        gs.row(static_cast<Eigen::Index>(k)) = G.row(rows[k]);
        hs(static_cast<Eigen::Index>(k)) = h(rows[k]);
      }
      const Eigen::MatrixXd gram = gs * gs.transpose();
      if (std::abs(gram.determinant()) < 1e-10) continue;
      x = gs.transpose() * gram.ldlt().solve(hs);
    }
    if ((G * x - h).minCoeff() < -1e-9) continue;
    if (x.norm() < best_norm) {
      best_norm = x.norm();
      best = x;
    }
  }
  return best;
}

TEST(QpProperty, LdpMatchesActiveSetEnumeration) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n(0.0, 1.0);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 2 + trial % 4;
    const int m = 1 + trial % 6;
    Eigen::MatrixXd G(m, dim);
    Eigen::VectorXd h(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < dim; ++j) G(i, j) = n(rng);
      h(i) = n(rng);
    }
    const auto res = solve_ldp(G, h);
    const Eigen::VectorXd oracle = ldp_oracle(G, h);
    if (oracle.size() == 0) {
      EXPECT_FALSE(res.feasible) << "trial " << trial;
      continue;
    }
    ASSERT_TRUE(res.feasible) << "trial " << trial;
    EXPECT_GE((G * res.x - h).minCoeff(), -1e-9);
    EXPECT_NEAR((res.x - oracle).norm(), 0.0, 1e-8) << "trial " << trial;
    ++compared;
  }
  EXPECT_GT(compared, 200);
}

TEST(QpProperty, NnlsSatisfiesKkt) {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int rows = 3 + trial % 8;
    const int cols = 1 + trial % 7;
    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) A(i, j) = n(rng);
      b(i) = n(rng);
    }
    const Eigen::VectorXd x = nnls(A, b);
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    for (int j = 0; j < cols; ++j) {
      EXPECT_GE(x(j), 0.0);
      if (x(j) > 0.0) {
        EXPECT_NEAR(w(j), 0.0, 1e-9) << "trial " << trial;
      } else {
        EXPECT_LE(w(j), 1e-9) << "trial " << trial;
      }
    }
  }
}

TEST(SolveWeights, SingleActiveConstraintHasClosedForm) {
  const std::vector<Vec2> centers{{0, -1}};
  const BoundarySample s{{1, 0}, {-1, 0}, BoundaryPart::Left, 0.0};
  const Vec2 goal(3, 0);  // the goal pulls outward through this sample
  AhpfConfig cfg;
  cfg.sign_constrained = false;
  const Eigen::VectorXd w = solve_weights(centers, {s}, goal, cfg);
  const Vec2 d = s.p - centers[0];
  const double a = -(d / d.squaredNorm()).dot(s.n);
  const Vec2 d0 = s.p - goal;
  const double b = cfg.flow_margin + cfg.goal_weight * (d0 / d0.squaredNorm()).dot(s.n);
  ASSERT_GT(b, 0.0);
  EXPECT_EQ(w(0), cfg.goal_weight);
  EXPECT_NEAR(w(1), b * a / (a * a), 1e-6);
}

TEST(SolveWeights, GoalAloneSufficesInsideAWideGap) {
  const NavigableGap g = symmetric_static_gap(3.0);
  const auto d = discretize_boundary(g, 25);
  const Vec2 goal(0, 2);
  // Precondition: the goal term alone already meets every flow constraint.
  for (const auto& s : d.samples) {
    const Vec2 d0 = s.p - goal;
    ASSERT_GE(-(d0 / d0.squaredNorm()).dot(s.n), AhpfConfig{}.flow_margin);
  }
  const Eigen::VectorXd w = solve_weights(d.centers, d.samples, goal);
  EXPECT_NEAR(w.tail(w.size() - 1).norm(), 0.0, 1e-12);
}

TEST(SolveWeights, SymmetricGapHasSymmetricWeights) {
  // A deep, narrow region: the goal term alone leaves too little flow at the sides.
  const auto prop = propagate_gap(SideMotion{{-0.7, 5}, {0, 0}}, SideMotion{{0.7, 5}, {0, 0}});
  const NavigableGap g = build_navigable_gap(prop, {0, 8});
  ASSERT_NEAR(g.goal.x(), 0.0, 1e-9);
  const HarmonicField f = synthesize_field(g);
  for (Eigen::Index j = 0; j < 25; ++j) EXPECT_NEAR(f.weights(1 + j), f.weights(26 + j), 1e-6);
  EXPECT_GT(f.weights.tail(50).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SolveWeights, InfeasibleProblemThrows) {
  // One sample whose two constraints disagree: flow must point both ways.
  const std::vector<Vec2> centers{{0, -1}};
  const BoundarySample a{{1, 0}, {-1, 0}, BoundaryPart::Left, 0.0};
  const BoundarySample b{{1, 0}, {1, 0}, BoundaryPart::Left, 0.0};
  AhpfConfig cfg;
  cfg.goal_weight = 0.0;
  EXPECT_THROW(solve_weights(centers, {a, b}, {3, 0}, cfg), SynthesisFailure);
}

TEST(VelocityCommand, Examples) {
  HarmonicField f = single_term({1, 1}, 1.0);
  f.gain = 2.0;
  f.v_max = 0.5;
  EXPECT_EQ(velocity_command({1, 1}, f), Vec2::Zero());

  // Far from the goal the raw command exceeds v_max and is clamped along -grad.
  const Vec2 u = velocity_command({4, 5}, f);
  EXPECT_NEAR(u.norm(), 0.5, 1e-15);
  EXPECT_NEAR(cross(u, Vec2(1, 1) - Vec2(4, 5)), 0.0, 1e-12);
  EXPECT_GT(u.dot(Vec2(1, 1) - Vec2(4, 5)), 0.0);

  // Same boundary terms, goal twice as far: the gradient is unchanged and the
  // prefactor grows fourfold.
  HarmonicField near;
  near.centers = {{1, 0}, {0, -2}};
  near.weights = Eigen::Vector2d(0.0, -0.3);
  near.goal = {1, 0};
  near.gain = 1.0;
  near.v_max = 1e9;
  HarmonicField far = near;
  far.centers[0] = far.goal = {2, 0};
  const Vec2 u1 = velocity_command({0, 0}, near);
  const Vec2 u2 = velocity_command({0, 0}, far);
  EXPECT_NEAR((u2 - 4.0 * u1).norm(), 0.0, 1e-14);
}

// Properties over synthesised fields.

TEST(AhpfProperty, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(3);
  const auto fields = testing::random_fields(101, 40);
  ASSERT_EQ(fields.size(), 40u);
  const double h = 1e-6;
  for (const auto& c : fields) {
    for (int i = 0; i < 100; ++i) {
      const Vec2 p = testing::random_interior(rng, c.navgap, c.field, 0.0);
      const Vec2 g = gradient(p, c.field);
      const Vec2 fd((potential(p + Vec2(h, 0), c.field) - potential(p - Vec2(h, 0), c.field)) / (2 * h),
                    (potential(p + Vec2(0, h), c.field) - potential(p - Vec2(0, h), c.field)) / (2 * h));
      EXPECT_LT((fd - g).norm() / g.norm(), 1e-6);
    }
  }
}

TEST(AhpfProperty, AnalyticLaplacianVanishes) {
  std::mt19937_64 rng(4);
  for (const auto& c : testing::random_fields(202, 20)) {
    for (int i = 0; i < 100; ++i) {
      const Vec2 p = testing::random_interior(rng, c.navgap, c.field, 1e-3);
      const Eigen::Matrix2d H = hessian(p, c.field);
      EXPECT_LE(std::abs(H.trace()), 1e-10 * H.cwiseAbs().sum() + 1e-12);
    }
  }
}

// The 5-point stencil applied to ln r has leading error -h^2 cos(4 theta) / r^4.
// Matching that prediction shows the stencil residual is truncation, not a
// departure from harmonicity.
TEST(AhpfProperty, StencilLaplacianIsPureTruncationError) {
  std::mt19937_64 rng(5);
  const double h = 1e-4;
  for (const auto& c : testing::random_fields(303, 20)) {
    for (int i = 0; i < 100; ++i) {
      const Vec2 p = testing::random_interior(rng, c.navgap, c.field, 0.1);
      const double lap = (potential(p + Vec2(h, 0), c.field) + potential(p - Vec2(h, 0), c.field) +
                          potential(p + Vec2(0, h), c.field) + potential(p - Vec2(0, h), c.field) -
                          4.0 * potential(p, c.field)) /
                         (h * h);
      double predicted = 0.0;
      double scale = 0.0;
      for (std::size_t k = 0; k < c.field.centers.size(); ++k) {
        const Vec2 d = p - c.field.centers[k];
        const double w = c.field.weights(static_cast<Eigen::Index>(k));
        predicted -= w * h * h * std::cos(4.0 * std::atan2(d.y(), d.x())) / std::pow(d.norm(), 4);
        scale += std::abs(w * std::log(d.norm()));
      }
      // Round-off of the stencil is about eps * |Phi| / h^2.
      EXPECT_NEAR(lap, predicted, 1e-6 + 4.0 * std::numeric_limits<double>::epsilon() * scale / (h * h));
    }
  }
}

TEST(AhpfProperty, FourthOrderStencilLaplacianVanishes) {
  std::mt19937_64 rng(7);
  for (const auto& c : testing::random_fields(606, 20)) {
    for (int i = 0; i < 100; ++i) {
      const Vec2 p = testing::random_interior(rng, c.navgap, c.field, 0.1);
      EXPECT_LT(std::abs(testing::stencil_laplacian4(c.field, p, 1e-3)), 1e-5);
    }
  }
}

TEST(AhpfProperty, CriticalPointsAreSaddles) {
  std::mt19937_64 rng(6);
  int found = 0;
  for (const auto& c : testing::random_fields(404, 20)) {
    for (int start = 0; start < 50; ++start) {
      Vec2 p = testing::random_interior(rng, c.navgap, c.field, 0.05);
      bool converged = false;
      for (int it = 0; it < 50 && c.navgap.contains(p); ++it) {
        const Vec2 g = gradient(p, c.field);
        if (g.norm() < 1e-9) {
          converged = true;
          break;
        }
        const Eigen::Matrix2d H = hessian(p, c.field);
        if (std::abs(H.determinant()) < 1e-14) break;
        p -= H.lu().solve(g);
      }
      if (!converged || !c.navgap.contains(p)) continue;
      ++found;
      const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hessian(p, c.field));
      EXPECT_LT(es.eigenvalues()(0), 0.0);
      EXPECT_GT(es.eigenvalues()(1), 0.0);
    }
  }
  RecordProperty("critical_points", found);
}

TEST(AhpfProperty, InwardFlowHoldsAtSamplesAndFinerBoundary) {
  const auto fields = testing::random_fields(505, 100);
  ASSERT_EQ(fields.size(), 100u);
  const AhpfConfig cfg;
  std::size_t fine_total = 0;
  std::size_t fine_ok = 0;
  for (const auto& c : fields) {
    for (const auto& s : c.field.samples) EXPECT_GE(inward_flow(c.field, s) - cfg.flow_margin, -1e-8);
    for (const auto& s : fine_boundary_samples(c.navgap, cfg.centers_per_side, 10)) {
      ++fine_total;
      if (inward_flow(c.field, s) >= 0.0) ++fine_ok;
    }
  }
  EXPECT_GE(static_cast<double>(fine_ok), 0.999 * static_cast<double>(fine_total));
}

}  // namespace
}  // namespace dgap
