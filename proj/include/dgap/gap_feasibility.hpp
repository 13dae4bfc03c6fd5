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

#ifndef DGAP_GAP_FEASIBILITY_HPP
#define DGAP_GAP_FEASIBILITY_HPP

#include <string_view>
#include <vector>

#include "dgap/common.hpp"
#include "dgap/gap_tracking.hpp"

namespace dgap {

enum class Category { Static, Expanding, Shrinking };
enum class Side { Left, Right };
enum class TerminalEvent { HorizonEnd, Crossed, Closed, ReachableExpansion };

std::string_view to_string(Category c);
std::string_view to_string(TerminalEvent e);

/// Angular rate of a point seen from the origin: (px vy - py vx) / |p|^2.
double bearing_rate(const Vec2& p, const Vec2& v);

Category categorize_point(Side side, double beta_dot, double eps = 1e-3);
Category categorize_gap(double beta_dot_left, double beta_dot_right, double eps = 1e-3);

struct GapCategorization {
  Category left{Category::Static};
  Category right{Category::Static};
  Category gap{Category::Static};
  double beta_dot_left{0.0};
  double beta_dot_right{0.0};
};

/// Gap-only motion of one side: body-frame position, ego motion removed from the velocity.
struct SideMotion {
  Vec2 position{Vec2::Zero()};
  Vec2 velocity{Vec2::Zero()};
};

GapCategorization categorize(const SideMotion& left, const SideMotion& right, double eps = 1e-3);
GapCategorization categorize(const GapPointModel& left, const GapPointModel& right, const EgoMotion& ego,
                             double eps = 1e-3);

/// Signed angle swept counterclockwise from the right bearing to the left bearing, in (-pi, pi].
double clockwise_gap_angle(const Vec2& left, const Vec2& right);

/// Bearings of the two sides swapped and both passed the previous gap centre.
bool check_crossing(const Vec2& prev_left, const Vec2& prev_right, const Vec2& curr_left,
                    const Vec2& curr_right, const Vec2& prev_center_bearing);

/// Sides closer than one inflated robot diameter (strict).
bool check_closing(const Vec2& left, const Vec2& right, double r_infl);

/// A robot leaving the origin at v_max could be at p by time t (strict).
bool check_reachable(const Vec2& p, double t, double v_max);

struct PropagationConfig {
  double horizon{5.0};
  double dt{0.01};
  double r_infl{0.25};
  double v_max{0.5};
  double eps_beta{1e-3};
};

struct PropagationResult {
  Vec2 terminal_left{Vec2::Zero()};
  Vec2 terminal_right{Vec2::Zero()};
  double t_terminal{0.0};
  double t_event{0.0};  ///< time the terminating condition was detected
  TerminalEvent event{TerminalEvent::HorizonEnd};
  std::vector<Vec2> track_left;
  std::vector<Vec2> track_right;
  SideMotion left;
  SideMotion right;
  GapCategorization category;
  double dt{0.01};

  [[nodiscard]] Vec2 terminal_midpoint() const { return 0.5 * (terminal_left + terminal_right); }
  [[nodiscard]] Vec2 midpoint_velocity() const { return 0.5 * (left.velocity + right.velocity); }
};

/// Integrates both sides at constant gap-only velocity until a terminal event or the horizon.
/// Throws Singularity when a side passes through the robot.
PropagationResult propagate_gap(const SideMotion& left, const SideMotion& right,
                                const PropagationConfig& config = {});
PropagationResult propagate_gap(const GapPointModel& left, const GapPointModel& right, const EgoMotion& ego,
                                const PropagationConfig& config = {});

/// Cubic Hermite check: can the robot reach the terminal midpoint without exceeding v_max?
bool feasibility_test(const Vec2& robot_position, const Vec2& robot_velocity, const PropagationResult& prop,
                      double v_max);

/// Planner verdict: only shrinking gaps that cross or close inside the horizon need
/// the spline test; static and expanding gaps are admitted whenever they have a horizon.
bool gap_is_feasible(const Vec2& robot_position, const Vec2& robot_velocity, const PropagationResult& prop,
                     double v_max);

/// Largest speed sampled along the Hermite spline used by feasibility_test.
double hermite_peak_speed(const Vec2& p0, const Vec2& v0, const Vec2& p1, const Vec2& v1, double duration,
                          int samples = 100);

}  // namespace dgap

#endif  // DGAP_GAP_FEASIBILITY_HPP
