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

#include <cmath>
#include <random>

#include "dgap/simworld.hpp"

namespace dgap {
namespace {

Agent disc(const Vec2& c, double r, const Vec2& v = Vec2::Zero()) {
  Agent a;
  a.position = c;
  a.radius = r;
  a.velocity = v;
  return a;
}

TEST(Raycast, DiscStraightAhead) {
  WorldState w;
  w.agents.push_back(disc({2, 0}, 0.5));
  const EgoCircle scan = raycast_scan(w, kTwoPi, 360, 10.0);
  const int ahead = scan.beam_at(0.0);
  ASSERT_GE(ahead, 0);
  EXPECT_NEAR(scan.angle(static_cast<std::size_t>(ahead)), 0.0, 1e-12);
  EXPECT_NEAR(scan.ranges[static_cast<std::size_t>(ahead)], 1.5, 1e-12);
}

TEST(Raycast, EmptyWorldIsAllMaxRange) {
  const EgoCircle scan = raycast_scan(WorldState{}, kTwoPi, 64, 7.5);
  for (double r : scan.ranges) EXPECT_EQ(r, 7.5);
}

TEST(Raycast, NearerHitWins) {
  WorldState w;
  w.walls.push_back({{3, -1}, {3, 1}});
  w.agents.push_back(disc({2, 0}, 0.25));
  const EgoCircle scan = raycast_scan(w, kTwoPi, 360, 10.0);
  EXPECT_NEAR(scan.ranges[static_cast<std::size_t>(scan.beam_at(0.0))], 1.75, 1e-12);
  w.agents.clear();
  EXPECT_NEAR(raycast_scan(w, kTwoPi, 360, 10.0).ranges[static_cast<std::size_t>(scan.beam_at(0.0))], 3.0, 1e-12);
}

TEST(Raycast, SceneFidelity) {
  // Random discs and walls from a random ego position, checked per beam against an
  // independent parametric root for each obstacle.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_real_distribution<double> rad(0.1, 0.6);
  for (int scene = 0; scene < 50; ++scene) {
    WorldState w;
    w.ego.position = {u(rng) * 0.25, u(rng) * 0.25};
    for (int i = 0; i < 4; ++i) w.agents.push_back(disc({u(rng), u(rng)}, rad(rng)));
    for (int i = 0; i < 2; ++i) w.walls.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
    const EgoCircle scan = raycast_scan(w, kTwoPi, 256, 10.0);
    for (std::size_t b = 0; b < scan.size(); ++b) {
      const Vec2 o = w.ego.position;
      const Vec2 d(std::cos(scan.angle(b)), std::sin(scan.angle(b)));
      double best = 10.0;
      for (const auto& a : w.agents) {
        // |o + s d - c|^2 = r^2, smallest s >= 0; an origin inside the disc hits at the far root.
        const Vec2 m = o - a.position;
        const double bq = m.dot(d);
        const double cq = m.squaredNorm() - a.radius * a.radius;
        const double disc2 = bq * bq - cq;
        if (disc2 < 0.0) continue;
        const double s0 = -bq - std::sqrt(disc2);
        const double s1 = -bq + std::sqrt(disc2);
        const double s = s0 >= 0.0 ? s0 : s1;
        if (s >= 0.0) best = std::min(best, s);
      }
      for (const auto& seg : w.walls) {
        // o + s d = a + t (b - a) by Cramer's rule.
        const Vec2 e = seg.b - seg.a;
        const double den = d.x() * (-e.y()) - d.y() * (-e.x());
        if (std::abs(den) < 1e-14) continue;
        const Vec2 rhs = seg.a - o;
        const double s = (rhs.x() * (-e.y()) - rhs.y() * (-e.x())) / den;
        const double t = (d.x() * rhs.y() - d.y() * rhs.x()) / den;
        if (s >= 0.0 && t >= 0.0 && t <= 1.0) best = std::min(best, s);
      }
      EXPECT_NEAR(scan.ranges[b], std::max(best, 1e-6), 1e-9) << "scene " << scene << " beam " << b;
    }
  }
}

TEST(StepWorld, ZeroCommandMovesOnlyAgents) {
  WorldState w;
  w.agents.push_back(disc({2, 0}, 0.3, {0, 0.4}));
  const WorldState n = step_world(w, Vec2::Zero(), 0.5);
  EXPECT_EQ(n.ego.position, w.ego.position);
  EXPECT_NEAR((n.agents[0].position - Vec2(2, 0.2)).norm(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(n.t, 0.5);
}

TEST(StepWorld, CommandIntegratesFirstOrder) {
  const WorldState n = step_world(WorldState{}, {0.5, 0}, 0.1);
  EXPECT_NEAR((n.ego.position - Vec2(0.05, 0)).norm(), 0.0, 1e-15);
  EXPECT_EQ(n.ego.velocity, Vec2(0.5, 0));
  EXPECT_EQ(n.clamp_count, 0);
}

TEST(StepWorld, OverspeedIsClampedAndCounted) {
  const WorldState n = step_world(WorldState{}, {0, 2.0}, 0.1);
  EXPECT_NEAR((n.ego.position - Vec2(0, 0.05)).norm(), 0.0, 1e-15);
  EXPECT_EQ(n.clamp_count, 1);
}

TEST(StepWorld, WaypointAgentRetargets) {
  WorldState w;
  Agent a = disc({0, 3}, 0.3);
  a.speed = 1.0;
  a.waypoints = {{1, 3}, {1, 4}};
  a.velocity = {1, 0};
  w.agents.push_back(a);
  for (int k = 0; k < 10; ++k) w = step_world(w, Vec2::Zero(), 0.1);
  EXPECT_NEAR((w.agents[0].position - Vec2(1, 3)).norm(), 0.0, 1e-9);
  w = step_world(w, Vec2::Zero(), 0.1);
  EXPECT_NEAR((w.agents[0].velocity - Vec2(0, 1)).norm(), 0.0, 1e-12);
  for (int k = 0; k < 20; ++k) w = step_world(w, Vec2::Zero(), 0.1);
  EXPECT_NEAR((w.agents[0].position - Vec2(1, 4)).norm(), 0.0, 1e-9);
  EXPECT_EQ(w.agents[0].velocity, Vec2::Zero());
}

TEST(Collision, Examples) {
  WorldState w;
  w.agents.push_back(disc({0.4, 0}, 0.3));
  EXPECT_EQ(collision_kind(w), CollisionKind::Dynamic);
  EXPECT_TRUE(check_collision(w));

  w.agents[0].position = {5, 0};
  EXPECT_FALSE(check_collision(w));

  w.agents[0].position = {0.5, 0};  // exact tangency
  EXPECT_FALSE(check_collision(w));
  EXPECT_NEAR(clearance(w), 0.0, 1e-15);

  w.agents.clear();
  w.walls.push_back({{0.15, -1}, {0.15, 1}});
  EXPECT_EQ(collision_kind(w), CollisionKind::Static);
  w.walls[0] = {{0.2, -1}, {0.2, 1}};
  EXPECT_FALSE(check_collision(w));
}

TEST(Kinematics, DisplacementNeverExceedsSpeedLimit) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  WorldState w;
  for (int k = 0; k < 2000; ++k) {
    const Vec2 before = w.ego.position;
    w = step_world(w, {u(rng), u(rng)}, 0.02);
    EXPECT_LE((w.ego.position - before).norm(), w.ego.v_max * 0.02 + 1e-15);
  }
}

TEST(Trial, StaticPairsSucceed) {
  for (std::uint64_t seed = 0; seed < 30; seed += 3) {
    const TrialConfig cfg = TrialConfig::single_gap(seed);
    ASSERT_EQ(cfg.category, Category::Static);
    const WorldState w = make_world(cfg);
    ASSERT_EQ(w.agents.size(), 2u);
    const double surface_gap =
        (w.agents[0].position - w.agents[1].position).norm() - w.agents[0].radius - w.agents[1].radius;
    EXPECT_GE(surface_gap, 1.2);
    const TrialResult r = run_trial(cfg);
    EXPECT_EQ(r.outcome, Outcome::Success) << "seed " << seed << " " << r.diagnostic;
    EXPECT_LE((r.time), cfg.timeout);
  }
}

TEST(Trial, ShrinkingPairsNeverCollide) {
  for (std::uint64_t seed = 1; seed < 30; seed += 3) {
    const TrialConfig cfg = TrialConfig::single_gap(seed);
    ASSERT_EQ(cfg.category, Category::Shrinking);
    const TrialResult r = run_trial(cfg);
    EXPECT_NE(r.outcome, Outcome::DynamicCollision) << "seed " << seed;
    EXPECT_NE(r.outcome, Outcome::StaticCollision) << "seed " << seed;
    EXPECT_NE(r.outcome, Outcome::PlannerError) << "seed " << seed << " " << r.diagnostic;
  }
}

TEST(Trial, CategoriesAreRealized) {
  const auto velocities = [](std::uint64_t seed) {
    const WorldState w = make_world(TrialConfig::single_gap(seed));
    return std::make_pair(w.agents[0].velocity, w.agents[1].velocity);
  };
  const auto [sl, sr] = velocities(0);
  EXPECT_EQ(sl, Vec2::Zero());
  EXPECT_EQ(sr, Vec2::Zero());
  const auto [hl, hr] = velocities(1);  // shrinking: left moves down, right moves up
  EXPECT_LT(hl.y(), 0.0);
  EXPECT_GT(hr.y(), 0.0);
  EXPECT_NEAR(hl.norm(), 0.15, 1e-12);
  const auto [el, er] = velocities(5);  // expanding at 0.30 m/s
  EXPECT_GT(el.y(), 0.0);
  EXPECT_LT(er.y(), 0.0);
  EXPECT_NEAR(er.norm(), 0.30, 1e-12);
}

TEST(Trial, RerunIsIdentical) {
  for (std::uint64_t seed : {2u, 7u}) {
    const TrialConfig cfg = TrialConfig::single_gap(seed, 1.5 * kPi);
    const TrialResult a = run_trial(cfg);
    const TrialResult b = run_trial(cfg);
    EXPECT_EQ(a.outcome, b.outcome);
    EXPECT_EQ(a.time, b.time);
    EXPECT_EQ(a.min_clearance, b.min_clearance);
    EXPECT_EQ(a.switches, b.switches);
  }
}

TEST(Benchmark, CorridorDensity) {
  TrialConfig cfg;
  cfg.corridor = true;
  ASSERT_DOUBLE_EQ(cfg.corridor_length * cfg.corridor_width, 200.0);
  const WorldState w = make_world(cfg);
  EXPECT_EQ(w.agents.size(), 7u);
  EXPECT_EQ(w.walls.size(), 4u);
}

TEST(Benchmark, SummaryIsDeterministicAndCountsGroups) {
  SuiteConfig suite;
  suite.trials = 6;
  suite.jobs = 2;
  const BenchmarkSummary a = run_benchmark(suite);
  suite.jobs = 1;
  const BenchmarkSummary b = run_benchmark(suite);
  EXPECT_EQ(summary_json(a), summary_json(b));
  EXPECT_EQ(summary_svg(a), summary_svg(b));
  int total = 0;
  for (const auto& [name, count] : a.totals) total += count;
  EXPECT_EQ(total, 6);
  EXPECT_EQ(a.groups.size(), 6u);  // 3 categories x 2 speeds at one fov
  EXPECT_NE(summary_svg(a).find("<svg"), std::string::npos);
}

}  // namespace
}  // namespace dgap
