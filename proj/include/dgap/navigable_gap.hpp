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

#ifndef DGAP_NAVIGABLE_GAP_HPP
#define DGAP_NAVIGABLE_GAP_HPP

#include <vector>

#include "dgap/common.hpp"
#include "dgap/egocircle.hpp"
#include "dgap/gap_feasibility.hpp"

namespace dgap {

/// Moves a side point toward the gap interior by `scale * r_infl / |p|` radians
/// and pushes it out radially by 2 r_infl.
Vec2 inflate_point(const Vec2& p, Side side, double r_infl, double scale = 1.0);

/// Inflates both sides of an instantaneous gap. Throws SynthesisFailure when the
/// gap is not wider than the total angular inflation.
Gap inflate_gap(const Gap& gap, double r_infl);

/// Quadratic Bezier side with control points O, w0 * p0, p1.
struct BezierSide {
  Vec2 origin{Vec2::Zero()};
  Vec2 p0{Vec2::Zero()};
  Vec2 p1{Vec2::Zero()};
  double w0{1.0};
  /// Uses (1 - u^2) as the first basis polynomial instead of (1 - u)^2.
  bool printed_basis{false};

  [[nodiscard]] Vec2 control() const { return w0 * p0; }
  [[nodiscard]] Vec2 point(double u) const;
  [[nodiscard]] Vec2 tangent(double u) const;
  [[nodiscard]] double length(int samples = 256) const;
};

struct NavGapConfig {
  double r_infl{0.25};
  double v_max{0.5};
  double w0_min{0.05};
  bool printed_basis{false};
  int polygon_samples{64};       ///< polyline samples per side
  double inflation_growth{1.05}; ///< angular inflation growth per certificate retry
  double max_inflation_scale{3.0};
  double min_corner_angle{0.15};       ///< smallest region angle at the robot [rad]
  double max_region_angle{0.95 * kPi};  ///< regions must stay star-shaped around the robot
  double goal_boundary_margin{0.1};  ///< preferred distance from goal to region boundary [m]
  double goal_min_boundary_margin{0.02};  ///< accepted when the preferred margin is unattainable
  double goal_min_range{0.15};
  double reach_fraction{0.6};  ///< goal range <= reach_fraction * v_max * horizon
  /// Shorter horizons tried, in order, when the full horizon cannot be certified.
  std::vector<double> horizon_fractions{0.75, 0.5, 0.35, 0.25};
};

/**
 * Region bounded by two Bezier sides (right side O -> p1_r, left side O -> p1_l)
 * and the terminal cap p1_r -> p1_l. The polygon is counterclockwise.
 */
struct NavigableGap {
  BezierSide left;
  BezierSide right;
  Vec2 goal{Vec2::Zero()};
  double horizon{0.0};
  int source_gap{-1};
  TerminalEvent event{TerminalEvent::HorizonEnd};
  Category category{Category::Static};
  double inflation_scale{1.0};
  /// Constant-velocity gap point tracks the region was certified against.
  SideMotion track_left;
  SideMotion track_right;
  int polygon_samples{64};
  /// Cached polygon(); refreshed by build_navigable_gap and refresh_outline().
  std::vector<Vec2> outline;

  [[nodiscard]] Vec2 origin() const { return left.origin; }
  [[nodiscard]] std::vector<Vec2> polygon() const;
  void refresh_outline() { outline = polygon(); }
  [[nodiscard]] bool contains(const Vec2& p) const;
  /// Unsigned distance from p to the polygon boundary.
  [[nodiscard]] double boundary_distance(const Vec2& p) const;
  /// Terminal gap bearings, right then left.
  [[nodiscard]] double terminal_bearing_right() const;
  [[nodiscard]] double terminal_bearing_left() const;
};

/// Even-odd membership test against a closed polyline.
bool polygon_contains(const std::vector<Vec2>& poly, const Vec2& p);
double polygon_boundary_distance(const std::vector<Vec2>& poly, const Vec2& p);
double segment_distance(const Vec2& a, const Vec2& b, const Vec2& p);
double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

double side_weight(const Vec2& gap_only_velocity, double v_max, double w0_min = 0.05);

/// Smallest distance between the region and the constant-velocity tracks of both
/// sides over [0, horizon]. Zero when a track touches or enters the region.
double track_clearance(const NavigableGap& navgap);

/**
 * Builds the navigable gap from a propagation result. The angular inflation is
 * grown until both side tracks stay at least r_infl away from the region; closing
 * regions end in a cusp pulled in until it clears the tracks. When the full horizon
 * cannot be certified, shorter horizon prefixes are tried, then a straight wedge
 * short of the nearest track point. Throws SynthesisFailure when none exists.
 * The goal is placed toward `waypoint`.
 */
NavigableGap build_navigable_gap(const PropagationResult& prop, const Vec2& waypoint,
                                 const NavGapConfig& config = {});

/// Raw goal placement (before the admissibility pull-in).
Vec2 place_goal(const NavigableGap& navgap, const PropagationResult& prop, const Vec2& waypoint,
                const NavGapConfig& config = {});

/// Pulls a goal along its ray until it is interior with margin and within the reach budget.
/// Throws SynthesisFailure when no admissible point exists on the ray.
Vec2 admissible_goal(const NavigableGap& navgap, const Vec2& goal, const NavGapConfig& config = {});

}  // namespace dgap

#endif  // DGAP_NAVIGABLE_GAP_HPP
