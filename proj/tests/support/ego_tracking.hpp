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

#ifndef DGAP_TESTS_EGO_TRACKING_HPP
#define DGAP_TESTS_EGO_TRACKING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dgap/gap_tracking.hpp"

namespace dgap::testing {

// Smooth ego trajectory with nonzero yaw rate; returns pose and body-frame motion at t.
struct EgoSample {
  Vec2 position;
  double yaw;
  EgoMotion motion;
};

inline EgoSample ego_at(double t, double phase) {
  const double w = 0.4 * std::sin(0.7 * t + phase) + 0.3;
  const double yaw = -0.4 / 0.7 * std::cos(0.7 * t + phase) + 0.3 * t;
  // World velocity: speed along heading, speed varying smoothly.
  const double speed = 0.3 + 0.1 * std::sin(1.3 * t);
  const double dspeed = 0.13 * std::cos(1.3 * t);
  // Position via closed form is awkward; integrate finely from the caller instead.
  EgoSample s;
  s.yaw = yaw;
  s.position = Vec2::Zero();
  s.motion.linear_velocity = {speed, 0.0};
  // Inertial acceleration in the body frame: tangential dspeed, centripetal w*speed.
  s.motion.linear_acceleration = {dspeed, w * speed};
  s.motion.angular_velocity = w;
  return s;
}

// Tracks a point moving at constant world velocity while the robot follows ego_at().
// Scans at 50 Hz with Gaussian position noise; returns the worst gap-only velocity
// error after a 2 s burn-in.
inline double track_error(std::uint64_t seed, const Vec2& world_velocity, double noise_sigma) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, noise_sigma);
  const double phase = 3.0 * u(rng);
  Vec2 target = Vec2(3.0 + u(rng), 2.0 * u(rng));
  Vec2 robot = Vec2::Zero();
  const double dt = 0.02;
  const int sub = 50;
  GapTracker tracker;
  double worst = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double t = k * dt;
    const EgoSample e = ego_at(t, phase);
    const Vec2 rel = rotate(target - robot, -e.yaw);
    const std::vector<Vec2> pts{rel + Vec2(noise(rng), noise(rng))};
    const auto step = tracker.step(pts, e.motion, t);
    if (t >= 2.0) {
      const auto* m = tracker.find(step.ids[0]);
      const Vec2 truth = rotate(world_velocity, -e.yaw);
      worst = std::max(worst, (gap_only_velocity(*m, e.motion) - truth).norm());
    }
    for (int i = 0; i < sub; ++i) {
      const double ts = t + i * dt / sub;
      const EgoSample es = ego_at(ts, phase);
      robot += dt / sub * rotate(es.motion.linear_velocity, es.yaw);
    }
    target += dt * world_velocity;
  }
  return worst;
}

}  // namespace dgap::testing

#endif  // DGAP_TESTS_EGO_TRACKING_HPP
