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

#ifndef DGAP_CONFIG_FIELDS_HPP
#define DGAP_CONFIG_FIELDS_HPP

#include "dgap/planner.hpp"

namespace dgap {

/**
 * Calls f(section, key, field) for every tunable planner field. Config readers and
 * the trace header share this table so they cannot drift apart. Section "" holds
 * the shared values.
 */
template <class PlannerConfigT, class F>
void visit_planner_fields(PlannerConfigT& c, F&& f) {
  f("", "v_max", c.v_max);
  f("", "r_infl", c.r_infl);
  f("", "radial_jump", c.radial_jump);
  f("", "max_gap_width", c.max_gap_width);
  f("", "artificial_side_range", c.artificial_side_range);

  f("propagation", "horizon", c.propagation.horizon);
  f("propagation", "dt", c.propagation.dt);
  f("propagation", "eps_beta", c.propagation.eps_beta);

  f("tracker", "sigma_position", c.tracker.sigma_position);
  f("tracker", "sigma_velocity", c.tracker.sigma_velocity);
  f("tracker", "nominal_dt", c.tracker.nominal_dt);
  f("tracker", "measurement_sigma", c.tracker.measurement_sigma);
  f("tracker", "initial_velocity_sigma", c.tracker.initial_velocity_sigma);
  f("tracker", "tau_assoc", c.tracker.tau_assoc);
  f("tracker", "max_predict_dt", c.tracker.max_predict_dt);

  f("simplify", "merge_tolerance", c.simplify.merge_tolerance);
  f("simplify", "drop_narrow", c.simplify.drop_narrow);

  f("navgap", "w0_min", c.navgap.w0_min);
  f("navgap", "printed_basis", c.navgap.printed_basis);
  f("navgap", "polygon_samples", c.navgap.polygon_samples);
  f("navgap", "inflation_growth", c.navgap.inflation_growth);
  f("navgap", "max_inflation_scale", c.navgap.max_inflation_scale);
  f("navgap", "min_corner_angle", c.navgap.min_corner_angle);
  f("navgap", "max_region_angle", c.navgap.max_region_angle);
  f("navgap", "goal_boundary_margin", c.navgap.goal_boundary_margin);
  f("navgap", "goal_min_boundary_margin", c.navgap.goal_min_boundary_margin);
  f("navgap", "goal_min_range", c.navgap.goal_min_range);
  f("navgap", "reach_fraction", c.navgap.reach_fraction);
  f("navgap", "horizon_fractions", c.navgap.horizon_fractions);

  f("ahpf", "centers_per_side", c.ahpf.centers_per_side);
  f("ahpf", "goal_weight", c.ahpf.goal_weight);
  f("ahpf", "flow_margin", c.ahpf.flow_margin);
  f("ahpf", "center_offset", c.ahpf.center_offset);
  f("ahpf", "sign_constrained", c.ahpf.sign_constrained);
  f("ahpf", "allow_mixed_signs", c.ahpf.allow_mixed_signs);
  f("ahpf", "gain", c.ahpf.gain);
  f("ahpf", "residual_tolerance", c.ahpf.residual_tolerance);

  f("rollout", "dt", c.rollout.dt);
  f("rollout", "goal_tolerance", c.rollout.goal_tolerance);
  f("rollout", "region_tolerance", c.rollout.region_tolerance);

  f("score", "d_max", c.score.d_max);
  f("score", "lambda", c.score.lambda);
  f("score", "pose_interval", c.score.pose_interval);
}

}  // namespace dgap

#endif  // DGAP_CONFIG_FIELDS_HPP
