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

#ifndef DGAP_EGOCIRCLE_HPP
#define DGAP_EGOCIRCLE_HPP

#include <cstddef>
#include <vector>

#include "dgap/common.hpp"

namespace dgap {

/**
 * Fixed-resolution range scan in the robot body frame.
 *
 * Beam i points at angle_min + i * (angle_max - angle_min) / (n - 1). A scan
 * whose span plus one increment covers the full circle is treated as a 360
 * degree scan: its last beam is adjacent to its first one (the seam).
 */
struct EgoCircle {
  std::vector<double> ranges;
  double angle_min{-kPi};
  double angle_max{kPi};
  double max_range{10.0};
  double stamp{0.0};

  [[nodiscard]] std::size_t size() const { return ranges.size(); }
  [[nodiscard]] double increment() const;
  [[nodiscard]] double angle(std::size_t i) const;
  [[nodiscard]] Vec2 point(std::size_t i) const { return polar(angle(i), ranges[i]); }
  [[nodiscard]] bool full_circle() const;
  /// True when beam i carries the max-range sentinel (no return).
  [[nodiscard]] bool is_free(std::size_t i, double tol = 1e-6) const;
  /// Index of the beam closest to `bearing`, or -1 if it lies outside the field of view.
  [[nodiscard]] int beam_at(double bearing) const;

  /// Throws InvalidInput if the scan breaks its invariants.
  void validate() const;

  /// Evenly spaced scan over a field of view centered on +x.
  static EgoCircle make(double fov, std::size_t n_beams, double max_range);
};

enum class GapKind { Radial, Swept };

struct GapPoint {
  int index{0};
  double bearing{0.0};
  double range{0.0};
  Vec2 p{Vec2::Zero()};

  static GapPoint from_polar(int index, double bearing, double range) {
    return {index, bearing, range, polar(bearing, range)};
  }
  static GapPoint from_beam(const EgoCircle& scan, int index) {
    return from_polar(index, scan.angle(static_cast<std::size_t>(index)),
                      scan.ranges[static_cast<std::size_t>(index)]);
  }
};

/// A free-space span, entered counterclockwise at `right` and left at `left`.
struct Gap {
  GapPoint left;
  GapPoint right;
  GapKind kind{GapKind::Swept};

  /// Counterclockwise angle from the right bearing to the left bearing.
  [[nodiscard]] double angular_width() const { return ccw_angle(right.bearing, left.bearing); }
  /// Number of beam steps from the right index to the left index.
  [[nodiscard]] int beam_span(const EgoCircle& scan) const;
  [[nodiscard]] double center_bearing() const {
    return wrap_angle(right.bearing + 0.5 * angular_width());
  }
};

struct SimplifyConfig {
  double r_infl{0.25};
  int merge_tolerance{2};
  bool drop_narrow{true};
};

std::vector<Gap> detect_raw_gaps(const EgoCircle& scan, double radial_jump_threshold = 1.0);

/// Absorbs radial gaps into adjacent swept gaps and drops gaps too narrow to enter.
std::vector<Gap> simplify_gaps(const EgoCircle& scan, std::vector<Gap> raw,
                               const SimplifyConfig& config = {});

/// Smallest angular width a gap may have when its nearer side lies at `near_range`.
double minimum_gap_width(double r_infl, double near_range);

}  // namespace dgap

#endif  // DGAP_EGOCIRCLE_HPP
