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

#ifndef DGAP_AHPF_HPP
#define DGAP_AHPF_HPP

#include <vector>

#include <Eigen/Core>

#include "dgap/common.hpp"
#include "dgap/navigable_gap.hpp"

namespace dgap {

enum class BoundaryPart { Left, Right, Cap, Corner };

/// Boundary point with the unit normal pointing into the region.
struct BoundarySample {
  Vec2 p{Vec2::Zero()};
  Vec2 n{Vec2::Zero()};
  BoundaryPart part{BoundaryPart::Left};
  double u{0.0};  ///< curve parameter (sides) or cap fraction
};

struct AhpfConfig {
  int centers_per_side{25};
  /// Weight of the goal term. Positive: -grad points at the goal.
  double goal_weight{1.0};
  double flow_margin{0.05};  ///< required inward flow at constraint samples [1/m]
  /// Outward offset of boundary centers as a fraction of the local center spacing.
  double center_offset{3.0};
  /// Boundary terms may only repel (w <= 0 under the positive goal convention).
  bool sign_constrained{true};
  /// Retry without the sign constraint when the repulsive-only problem is infeasible.
  bool allow_mixed_signs{true};
  double gain{2.0};
  double v_max{0.5};
  double residual_tolerance{1e-8};
};

struct BoundaryDiscretization {
  std::vector<Vec2> centers;  ///< boundary centers only (left side, then right side)
  std::vector<BoundarySample> samples;
};

/**
 * Places `n` centers per side at uniform curve parameters, pushed outward along
 * the side normal, and constraint samples at the parameter midpoints, at the
 * corner O (once per side normal) and along the terminal cap.
 */
BoundaryDiscretization discretize_boundary(const NavigableGap& navgap, int n, const AhpfConfig& config = {});

/// Boundary samples `factor` times denser than the constraint samples.
std::vector<BoundarySample> fine_boundary_samples(const NavigableGap& navgap, int n, int factor);

/// Inward normal of a side at parameter u (orientation checked against membership).
Vec2 side_inward_normal(const NavigableGap& navgap, Side side, double u);

/**
 * Weighted sum of logarithmic terms. centers[0] is the goal p_0; weights[0] its
 * weight. Immutable once synthesised.
 */
struct HarmonicField {
  std::vector<Vec2> centers;
  Eigen::VectorXd weights;
  Vec2 goal{Vec2::Zero()};
  std::vector<BoundarySample> samples;
  double gain{2.0};
  double v_max{0.5};
};

double potential(const Vec2& p, const HarmonicField& field);
Vec2 gradient(const Vec2& p, const HarmonicField& field);
Eigen::Matrix2d hessian(const Vec2& p, const HarmonicField& field);

/// Inward flow (-grad . n) at a boundary sample.
double inward_flow(const HarmonicField& field, const BoundarySample& s);

/**
 * Minimum-norm boundary weights with the goal weight fixed, subject to an inward
 * flow of at least flow_margin at every sample. Returns the full weight vector,
 * goal first. Throws SynthesisFailure when infeasible and NumericalFailure when the
 * solution misses a constraint by more than residual_tolerance.
 */
Eigen::VectorXd solve_weights(const std::vector<Vec2>& centers, const std::vector<BoundarySample>& samples,
                              const Vec2& goal, const AhpfConfig& config = {});

/// u = -gain |p - p0|^2 grad(p), clamped to v_max. Zero at the goal.
Vec2 velocity_command(const Vec2& p, const HarmonicField& field);

HarmonicField synthesize_field(const NavigableGap& navgap, const AhpfConfig& config = {});

}  // namespace dgap

#endif  // DGAP_AHPF_HPP
