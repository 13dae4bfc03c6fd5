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
#include <limits>
#include <random>

#include "dgap/navigable_gap.hpp"
#include "support/fields.hpp"
#include "support/random_gaps.hpp"

namespace dgap {
namespace {

constexpr double kDeg = kPi / 180.0;

Gap polar_gap(double left_deg, double left_range, double right_deg, double right_range) {
  Gap g;
  g.left = GapPoint::from_polar(0, left_deg * kDeg, left_range);
  g.right = GapPoint::from_polar(0, right_deg * kDeg, right_range);
  return g;
}

PropagationResult static_prop(const Vec2& left, const Vec2& right, double horizon = 5.0) {
  return propagate_gap(SideMotion{left, {0, 0}}, SideMotion{right, {0, 0}}, PropagationConfig{horizon});
}

TEST(Inflate, ArcLengthInflation) {
  const Gap g = inflate_gap(polar_gap(100, 2.0, 40, 3.0), 0.2);
  // Independent recomputation in degrees.
  EXPECT_NEAR(g.left.bearing / kDeg, 100.0 - 0.1 * 180.0 / kPi, 1e-9);
  EXPECT_NEAR(g.left.bearing / kDeg, 94.27, 5e-3);
  EXPECT_NEAR(g.left.range, 2.4, 1e-12);
  EXPECT_NEAR(g.right.bearing, 40 * kDeg + 0.2 / 3.0, 1e-12);
  EXPECT_NEAR(g.right.range, 3.4, 1e-12);
}

TEST(Inflate, ZeroRadiusIsIdentity) {
  const Gap in = polar_gap(100, 2.0, 40, 3.0);
  const Gap g = inflate_gap(in, 0.0);
  EXPECT_DOUBLE_EQ(g.left.bearing, in.left.bearing);
  EXPECT_DOUBLE_EQ(g.right.range, in.right.range);
  EXPECT_NEAR((inflate_point(in.left.p, Side::Left, 1e-12) - in.left.p).norm(), 0.0, 1e-11);
}

TEST(Inflate, SymmetricGapStaysSymmetric) {
  const Gap g = inflate_gap(polar_gap(120, 2.5, 60, 2.5), 0.25);
  EXPECT_NEAR(g.center_bearing(), 90 * kDeg, 1e-12);
  EXPECT_NEAR(g.left.range, g.right.range, 1e-15);
}

TEST(Inflate, TooNarrowGapIsRejected) {
  EXPECT_THROW(inflate_gap(polar_gap(92, 1.0, 88, 1.0), 0.25), SynthesisFailure);
}

TEST(Bezier, EndpointsAndMidpoint) {
  const BezierSide b{{0, 0}, {1, 0}, {2, 2}, 1.0};
  EXPECT_EQ(b.point(0.0), Vec2(0, 0));
  EXPECT_EQ(b.point(1.0), Vec2(2, 2));
  EXPECT_NEAR((b.point(0.5) - Vec2(1.0, 0.5)).norm(), 0.0, 1e-15);
  // Weighted control: w0 p0 = (1, 0) as well.
  const BezierSide w{{0, 0}, {2, 0}, {2, 2}, 0.5};
  EXPECT_NEAR((w.point(0.5) - Vec2(1.0, 0.5)).norm(), 0.0, 1e-15);
}

TEST(Bezier, TangentMatchesFiniteDifference) {
  const BezierSide b{{0, 0}, {1.5, 0.3}, {2, 2}, 0.7};
  for (double u : {0.01, 0.2, 0.5, 0.9}) {
    const double h = 1e-6;
    const Vec2 fd = (b.point(std::min(u + h, 1.0)) - b.point(std::max(u - h, 0.0))) /
                    (std::min(u + h, 1.0) - std::max(u - h, 0.0));
    EXPECT_NEAR((b.tangent(u) - fd).norm(), 0.0, 1e-6);
  }
}

TEST(Bezier, DegenerateCollinearSideIsASegment) {
  const BezierSide b{{0, 0}, {1, 1}, {3, 3}, 1.0};
  for (double u = 0.0; u <= 1.0; u += 0.1) EXPECT_NEAR(cross(b.point(u), Vec2(1, 1)), 0.0, 1e-12);
  EXPECT_NEAR(b.length(), std::sqrt(18.0), 1e-9);
}

TEST(SideWeight, RatioAndClamp) {
  EXPECT_DOUBLE_EQ(side_weight({0.3, 0}, 0.6), 0.5);
  EXPECT_DOUBLE_EQ(side_weight({0, 0}, 0.6), 0.05);
  EXPECT_DOUBLE_EQ(side_weight({3, 0}, 0.6), 1.0);
}

TEST(PlaceGoal, BeyondTheCrossingPoint) {
  PropagationResult prop;
  prop.event = TerminalEvent::Closed;
  prop.terminal_left = {-0.1, 2};
  prop.terminal_right = {0.1, 2};
  NavGapConfig cfg;
  cfg.r_infl = 0.2;
  const Vec2 goal = place_goal(NavigableGap{}, prop, {5, 5}, cfg);
  EXPECT_NEAR((goal - Vec2(0, 2.4)).norm(), 0.0, 1e-12);
  EXPECT_GT(goal.norm(), prop.terminal_midpoint().norm());
}

TEST(PlaceGoal, StaticGapWaypointInsideIsKept) {
  const auto prop = static_prop({-1, 3}, {1, 3});
  const NavigableGap g = build_navigable_gap(prop, {0, 2});
  ASSERT_TRUE(g.contains({0, 2}));
  EXPECT_EQ(place_goal(g, prop, {0, 2}), Vec2(0, 2));
}

TEST(PlaceGoal, WaypointBeyondCapProjectsOntoCap) {
  const auto prop = static_prop({-1, 3}, {1, 3});
  const NavigableGap g = build_navigable_gap(prop, {0, 10});
  const Vec2 goal = place_goal(g, prop, {0, 10});
  EXPECT_NEAR(segment_distance(g.right.p1, g.left.p1, goal), 0.0, 1e-12);
  EXPECT_NEAR(goal.x(), 0.0, 1e-9);
}

TEST(PlaceGoal, WaypointFarLeftClampsToLeftEdgeMinusMargin) {
  NavGapConfig cfg;
  const auto prop = static_prop({-1, 3}, {1, 3});
  const NavigableGap g = build_navigable_gap(prop, {-10, 0.5}, cfg);
  const Vec2 goal = place_goal(g, prop, {-10, 0.5}, cfg);
  const double margin = cfg.r_infl / g.left.p1.norm();
  EXPECT_NEAR(std::atan2(goal.y(), goal.x()), std::atan2(g.left.p1.y(), g.left.p1.x()) - margin, 1e-9);
  EXPECT_NEAR(segment_distance(g.right.p1, g.left.p1, goal), 0.0, 1e-12);
}

TEST(NavigableGap, StaticRegionContainsGoalAndStartsAtRobot) {
  const auto prop = static_prop({-1, 3}, {1, 3});
  const NavigableGap g = build_navigable_gap(prop, {0, 8});
  EXPECT_EQ(g.left.point(0), Vec2::Zero());
  EXPECT_EQ(g.right.point(0), Vec2::Zero());
  EXPECT_TRUE(g.contains(g.goal));
  EXPECT_GE(track_clearance(g), 0.25);
  EXPECT_GT(g.terminal_bearing_left(), g.terminal_bearing_right());
}

TEST(NavigableGap, ClosingRegionEndsInACuspShortOfTheClosure) {
  // Sides slide toward each other and close after about 4.3 s.
  const auto prop = propagate_gap(SideMotion{{-0.9, 1.2}, {0.15, 0}}, SideMotion{{0.9, 1.2}, {-0.15, 0}});
  ASSERT_EQ(prop.event, TerminalEvent::Closed);
  const NavigableGap g = build_navigable_gap(prop, {0, 8});
  EXPECT_EQ(g.event, TerminalEvent::Closed);
  EXPECT_EQ(g.horizon, prop.t_terminal);
  EXPECT_EQ(g.left.p1, g.right.p1);
  EXPECT_LT(g.left.p1.y(), 1.2);
  EXPECT_GE((g.left.p1 - prop.terminal_left).norm(), 0.25);
  EXPECT_GE((g.left.p1 - prop.terminal_right).norm(), 0.25);
  EXPECT_GE(track_clearance(g), 0.25);
  EXPECT_TRUE(g.contains(g.goal));
}

TEST(NavigableGap, SidesCrossingAtDifferentRangesGetAShortWedge) {
  // The near right side sweeps under the far left side; no region reaching the
  // sides stays clear of both tracks, and the thin curved prefixes leave no goal margin.
  const auto prop = propagate_gap(SideMotion{{0.358776, -1.63604}, {-0.0758562, -0.016635}},
                                  SideMotion{{-0.396804, -0.934154}, {0.101351, -0.0430512}});
  ASSERT_EQ(prop.event, TerminalEvent::Crossed);
  const NavigableGap g = build_navigable_gap(prop, {-4.2, -4.1});
  EXPECT_EQ(g.event, TerminalEvent::HorizonEnd);
  EXPECT_EQ(g.horizon, prop.t_terminal);
  EXPECT_GE(track_clearance(g), 0.25);
  EXPECT_TRUE(g.contains(g.goal));
  EXPECT_GE(g.boundary_distance(g.goal), NavGapConfig{}.goal_min_boundary_margin);
  // Everything in the wedge is nearer the robot than any track point, less r_infl.
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& track : {prop.track_left, prop.track_right})
    for (const Vec2& q : track) nearest = std::min(nearest, q.norm());
  for (const Vec2& p : g.polygon()) EXPECT_LE(p.norm(), nearest - 0.25 + 1e-9);
}

TEST(NavigableGap, PolygonHelpers) {
  const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_TRUE(polygon_contains(sq, {0.5, 0.5}));
  EXPECT_FALSE(polygon_contains(sq, {1.5, 0.5}));
  EXPECT_NEAR(polygon_boundary_distance(sq, {0.5, 0.3}), 0.3, 1e-15);
  EXPECT_NEAR(segment_distance({0, 0}, {1, 0}, {2, 1}), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(segment_segment_distance({0, 0}, {1, 0}, {0, 1}, {1, 2}), 1.0, 1e-15);
  EXPECT_NEAR(segment_segment_distance({0, 0}, {1, 1}, {0, 1}, {1, 0}), 0.0, 1e-15);
}

// Properties.

TEST(NavigableGapProperty, BezierStaysInControlHull) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const BezierSide b{{0, 0},
                       {testing::uniform(rng, -3, 3), testing::uniform(rng, -3, 3)},
                       {testing::uniform(rng, -3, 3), testing::uniform(rng, -3, 3)},
                       testing::uniform(rng, 0.05, 1.0)};
    const Vec2 a = b.origin, c = b.control(), d = b.p1;
    const double area = cross(c - a, d - a);
    for (int i = 0; i <= 50; ++i) {
      const Vec2 p = b.point(i / 50.0);
      if (std::abs(area) < 1e-9) continue;
      // Barycentric coordinates.
      const double l1 = cross(c - p, d - p) / area;
      const double l2 = cross(d - p, a - p) / area;
      const double l3 = 1.0 - l1 - l2;
      EXPECT_GE(std::min({l1, l2, l3}), -1e-12) << "trial " << trial;
    }
  }
}

TEST(NavigableGapProperty, RegionIsFreeOverTheHorizon) {
  std::mt19937_64 rng(99);
  const double r_infl = NavGapConfig{}.r_infl;
  int built = 0;
  for (int seed = 0; built < 300 && seed < 3000; ++seed) {
    const auto b = testing::build_random_gap(rng, testing::cycle_category(seed));
    if (b.status != testing::BuildStatus::Ok) continue;
    ++built;
    const auto& g = b.navgap;
    for (const Vec2& p : testing::interior_samples(g, 10)) {
      for (int k = 0; k < 10; ++k) {
        const double t = g.horizon * k / 9.0;
        const Vec2 l = b.prop.left.position + b.prop.left.velocity * t;
        const Vec2 r = b.prop.right.position + b.prop.right.velocity * t;
        EXPECT_GE((p - l).norm(), r_infl - 1e-6) << "seed " << seed;
        EXPECT_GE((p - r).norm(), r_infl - 1e-6) << "seed " << seed;
      }
    }
  }
  EXPECT_EQ(built, 300);
}

TEST(NavigableGapProperty, GoalIsInsideRegionAndTerminalSpan) {
  std::mt19937_64 rng(5);
  int built = 0;
  for (int seed = 0; built < 500 && seed < 5000; ++seed) {
    const auto b = testing::build_random_gap(rng, testing::cycle_category(seed));
    if (b.status != testing::BuildStatus::Ok) continue;
    ++built;
    const auto& g = b.navgap;
    EXPECT_TRUE(g.contains(g.goal)) << "seed " << seed;
    const double br = g.terminal_bearing_right();
    const double span = ccw_angle(br, g.terminal_bearing_left());
    const double at = ccw_angle(br, std::atan2(g.goal.y(), g.goal.x()));
    if (span > 1e-9) {
      EXPECT_GT(at, 0.0) << "seed " << seed;
      EXPECT_LT(at, span) << "seed " << seed;
    }
  }
  EXPECT_EQ(built, 500);
}

}  // namespace
}  // namespace dgap
