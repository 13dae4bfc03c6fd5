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

#include "dgap/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dgap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool inside_region(const NavigableGap& region, const Vec2& p, double tol) {
  return region.contains(p) || region.boundary_distance(p) <= tol;
}

Trajectory to_odom(const Trajectory& body, const Pose2& pose) {
  Trajectory out = body;
  for (auto& q : out.poses) {
    q.p = pose.to_world(q.p);
    q.u = rotate(q.u, pose.yaw);
  }
  out.goal = pose.to_world(body.goal);
  return out;
}

bool closing_event(TerminalEvent e) { return e == TerminalEvent::Closed || e == TerminalEvent::Crossed; }

}  // namespace

Trajectory synthesize_trajectory(const HarmonicField& field, const NavigableGap* region, const Vec2& start,
                                 const RolloutConfig& config) {
  if (!(config.dt > 0.0)) throw InvalidInput("synthesize_trajectory: dt must be positive");
  Trajectory traj;
  traj.goal = field.goal;
  Vec2 p = start;
  double t = 0.0;
  int k = 0;
  traj.poses.push_back({0.0, p, velocity_command(p, field)});
  while (true) {
    if ((p - field.goal).norm() <= config.goal_tolerance) {
      traj.reached_goal = true;
      break;
    }
    if (t >= config.horizon - 1e-9) break;
    p = p + traj.poses.back().u * config.dt;
    t = static_cast<double>(++k) * config.dt;
    if (region != nullptr && !inside_region(*region, p, config.region_tolerance)) {
      throw SynthesisFailure("synthesize_trajectory: rollout left the navigable region");
    }
    traj.poses.push_back({t, p, velocity_command(p, field)});
  }
  return traj;
}

Trajectory enforce_deadline(const Trajectory& traj, double deadline, double v_max) {
  if (!(deadline > 0.0)) throw SynthesisFailure("enforce_deadline: deadline already passed");
  const double duration = traj.duration();
  if (duration <= deadline) return traj;
  const double s = duration / deadline;
  Trajectory out = traj;
  for (auto& q : out.poses) {
    q.t /= s;
    q.u *= s;
    if (q.u.norm() > v_max * (1.0 + 1e-9)) {
      throw SynthesisFailure("enforce_deadline: arriving before closure needs more than v_max");
    }
  }
  return out;
}

std::vector<Vec2> static_points(const EgoCircle& scan, const Pose2& pose, const std::vector<AgentObservation>& agents) {
  struct Extent {
    double bearing;
    double half_width;
  };
  std::vector<Extent> extents;
  for (const auto& a : agents) {
    const Vec2 rel = pose.to_body(a.position);
    const double d = rel.norm();
    const double r = a.radius + 0.02;
    const double half = d <= r ? kPi : std::asin(r / d);
    extents.push_back({std::atan2(rel.y(), rel.x()), half});
  }
  std::vector<Vec2> out;
  out.reserve(scan.size());
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (scan.is_free(i)) continue;
    const double b = scan.angle(i);
    const bool agent = std::any_of(extents.begin(), extents.end(), [&](const Extent& e) {
      return std::abs(wrap_angle(b - e.bearing)) <= e.half_width;
    });
    if (!agent) out.push_back(pose.to_world(scan.point(i)));
  }
  return out;
}

double obstacle_cost(double d, const ScoreConfig& config) {
  if (d < config.r_infl) return kInf;
  if (d >= config.d_max) return 0.0;
  const double x = config.d_max / d - 1.0;
  return x * x;
}

double score_trajectory(const Trajectory& traj, double start, const std::vector<Vec2>& statics,
                        const std::vector<AgentObservation>& agents, double agents_stamp, const Vec2& waypoint,
                        const ScoreConfig& config, double from_time) {
  if (traj.empty()) return kInf;
  double cost = 0.0;
  const std::size_t n = traj.poses.size();
  for (std::size_t k = 0; k < n; ++k) {
    const TrajectoryPose& q = traj.poses[k];
    const double t = start + q.t;
    if (t < from_time - 1e-9) continue;
    const double share = 0.5 * (traj.poses[std::min(k + 1, n - 1)].t - traj.poses[k == 0 ? 0 : k - 1].t);
    double d = kInf;
    for (const auto& s : statics) d = std::min(d, (q.p - s).norm());
    for (const auto& a : agents) {
      const Vec2 c = a.position + a.velocity * (t - agents_stamp);
      d = std::min(d, (q.p - c).norm() - a.radius);
    }
    const double c = obstacle_cost(d, config);
    if (std::isinf(c)) return kInf;
    cost += c * share / config.pose_interval;
  }
  return cost + config.lambda * (traj.poses.back().p - waypoint).norm();
}

std::string_view to_string(SwitchReason r) {
  switch (r) {
    case SwitchReason::None: return "none";
    case SwitchReason::NoTrajectory: return "no_trajectory";
    case SwitchReason::Colliding: return "colliding";
    case SwitchReason::ModelsDied: return "models_died";
    case SwitchReason::Infeasible: return "infeasible";
    case SwitchReason::Ended: return "ended";
  }
  return "unknown";
}

std::string_view to_string(SwitchDecision::Kind k) {
  switch (k) {
    case SwitchDecision::Kind::Keep: return "keep";
    case SwitchDecision::Kind::SwitchTo: return "switch";
    case SwitchDecision::Kind::Stop: return "stop";
  }
  return "unknown";
}

SwitchDecision should_switch(const CurrentStatus& status, const std::vector<double>& candidate_costs) {
  SwitchDecision out;
  if (!status.has_trajectory) {
    out.reason = SwitchReason::NoTrajectory;
  } else if (status.colliding) {
    out.reason = SwitchReason::Colliding;
  } else if (!status.models_alive) {
    out.reason = SwitchReason::ModelsDied;
  } else if (!status.gap_feasible) {
    out.reason = SwitchReason::Infeasible;
  } else if (status.ended) {
    out.reason = SwitchReason::Ended;
  } else {
    return out;
  }
  double best = kInf;
  for (std::size_t i = 0; i < candidate_costs.size(); ++i) {
    if (candidate_costs[i] < best) {
      best = candidate_costs[i];
      out.candidate = static_cast<int>(i);
    }
  }
  out.kind = out.candidate >= 0 ? SwitchDecision::Kind::SwitchTo : SwitchDecision::Kind::Stop;
  return out;
}

void PlannerConfig::sync() {
  propagation.v_max = v_max;
  propagation.r_infl = r_infl;
  navgap.v_max = v_max;
  navgap.r_infl = r_infl;
  ahpf.v_max = v_max;
  score.r_infl = r_infl;
  simplify.r_infl = r_infl;
  rollout.horizon = propagation.horizon;
}

Gap reduce_gap(const EgoCircle& scan, const Gap& gap, double bearing, double max_width, bool* left_synthetic,
               bool* right_synthetic) {
  *left_synthetic = false;
  *right_synthetic = false;
  const double width = gap.angular_width();
  if (width <= max_width) return gap;
  // Offsets are counterclockwise from the right side.
  const double half = 0.5 * max_width;
  double center = ccw_angle(gap.right.bearing, bearing);
  if (center > width) center = (center - width < kTwoPi - center) ? width : 0.0;
  center = std::clamp(center, half, width - half);
  const auto side_at = [&](double offset, const GapPoint& original, bool* synthetic) {
    if (std::abs(offset) <= 1e-12 || std::abs(offset - width) <= 1e-12) return original;
    const double b = wrap_angle(gap.right.bearing + offset);
    const int beam = scan.beam_at(b);
    if (beam < 0) return original;
    *synthetic = true;
    return GapPoint::from_polar(beam, b, scan.ranges[static_cast<std::size_t>(beam)]);
  };
  Gap out = gap;
  out.right = side_at(center - half, gap.right, right_synthetic);
  out.left = side_at(center + half, gap.left, left_synthetic);
  return out;
}

Planner::Planner(PlannerConfig config) : config_(std::move(config)), tracker_(config_.tracker) { config_.sync(); }

void Planner::reset() {
  tracker_.reset();
  trajectory_.reset();
  trajectory_start_ = 0.0;
  trajectory_left_id_ = -1;
  trajectory_right_id_ = -1;
  fallback_ = Vec2::Zero();
  next_field_id_ = 0;
  switch_log_.clear();
}

std::vector<PlannerGap> Planner::observe(const PlannerInput& input) {
  const EgoCircle& scan = input.scan;
  const std::vector<Gap> gaps =
      simplify_gaps(scan, detect_raw_gaps(scan, config_.radial_jump), config_.simplify);
  const Vec2 wp = input.pose.to_body(input.waypoint);
  const double wp_bearing = std::atan2(wp.y(), wp.x());

  std::vector<PlannerGap> out;
  std::vector<Vec2> points;
  for (const auto& g : gaps) {
    PlannerGap pg;
    pg.gap = reduce_gap(scan, g, wp_bearing, config_.max_gap_width, &pg.left_synthetic, &pg.right_synthetic);
    pg.reduced = pg.left_synthetic || pg.right_synthetic;
    // Endpoints on free beams carry no obstacle to track.
    const bool left_real = !scan.is_free(static_cast<std::size_t>(g.left.index));
    const bool right_real = !scan.is_free(static_cast<std::size_t>(g.right.index));
    const auto cap = [&](GapPoint& p) {
      if (p.range > config_.artificial_side_range) p = GapPoint::from_polar(p.index, p.bearing, config_.artificial_side_range);
    };
    if (pg.left_synthetic || !left_real) cap(pg.gap.left);
    if (pg.right_synthetic || !right_real) cap(pg.gap.right);
    pg.left_id = left_real ? static_cast<int>(points.size()) : -1;
    if (left_real) points.push_back(g.left.p);
    pg.right_id = right_real ? static_cast<int>(points.size()) : -1;
    if (right_real) points.push_back(g.right.p);
    out.push_back(pg);
  }

  const GapTracker::StepResult tracked = tracker_.step(points, input.ego, scan.stamp);
  const Vec2 robot_velocity = input.ego.linear_velocity;
  for (auto& pg : out) {
    if (pg.left_id >= 0) pg.left_id = tracked.ids[static_cast<std::size_t>(pg.left_id)];
    if (pg.right_id >= 0) pg.right_id = tracked.ids[static_cast<std::size_t>(pg.right_id)];
    const auto motion = [&](int id, bool synthetic, const GapPoint& p) {
      if (id < 0 || synthetic) return SideMotion{p.p, Vec2::Zero()};
      const GapPointModel* m = tracker_.find(id);
      return SideMotion{m->position(), gap_only_velocity(*m, input.ego)};
    };
    try {
      pg.prop = propagate_gap(motion(pg.left_id, pg.left_synthetic, pg.gap.left),
                              motion(pg.right_id, pg.right_synthetic, pg.gap.right), config_.propagation);
      pg.feasible = gap_is_feasible(Vec2::Zero(), robot_velocity, *pg.prop, config_.v_max);
      pg.verdict = pg.feasible ? "feasible" : "infeasible";
    } catch (const std::exception& e) {
      pg.feasible = false;
      pg.verdict = std::string("error: ") + e.what();
    }
  }
  return out;
}

CurrentStatus Planner::evaluate_current(const PlannerInput& input, const std::vector<PlannerGap>& gaps,
                                        const std::vector<Vec2>& statics, double* cost) const {
  CurrentStatus st;
  *cost = 0.0;
  if (!trajectory_) return st;
  st.has_trajectory = true;
  const double now = input.scan.stamp;
  const double half_step = trajectory_->poses.size() > 1 ? 0.5 * trajectory_->poses[1].t : 0.0;
  st.ended = now - trajectory_start_ >= trajectory_->duration() - half_step;
  *cost = score_trajectory(*trajectory_, trajectory_start_, statics, input.agents, now, input.waypoint,
                           config_.score, now);
  st.colliding = std::isinf(*cost) && !st.ended;
  st.models_alive = (trajectory_left_id_ < 0 || tracker_.alive(trajectory_left_id_)) &&
                    (trajectory_right_id_ < 0 || tracker_.alive(trajectory_right_id_));
  if (st.models_alive) {
    st.gap_feasible = false;
    const bool anonymous = trajectory_left_id_ < 0 && trajectory_right_id_ < 0;
    for (const auto& g : gaps) {
      const bool match = anonymous
                             ? g.planning_left_id() < 0 && g.planning_right_id() < 0
                             : (trajectory_left_id_ < 0 || g.left_id == trajectory_left_id_) &&
                                   (trajectory_right_id_ < 0 || g.right_id == trajectory_right_id_);
      if (match) {
        st.gap_feasible = g.feasible;
        break;
      }
    }
  }
  return st;
}

std::optional<Candidate> Planner::synthesize(const PlannerInput& input, const std::vector<PlannerGap>& gaps, int index,
                                             const std::vector<Vec2>& statics, std::string* error) const {
  const PlannerGap& pg = gaps[static_cast<std::size_t>(index)];
  try {
    Candidate c;
    c.gap_index = index;
    const Vec2 wp = input.pose.to_body(input.waypoint);
    c.navgap = build_navigable_gap(*pg.prop, wp, config_.navgap);
    c.navgap.source_gap = index;
    c.field = synthesize_field(c.navgap, config_.ahpf);
    RolloutConfig rc = config_.rollout;
    const bool closing = closing_event(c.navgap.event);
    // Closing gaps get a longer rollout that is then compressed to arrive before closure.
    rc.horizon = closing ? 2.0 * c.navgap.horizon : c.navgap.horizon;
    Trajectory body = synthesize_trajectory(c.field, &c.navgap, c.navgap.origin(), rc);
    if (closing) {
      if (!body.reached_goal) throw SynthesisFailure("trajectory does not pass the gap before closure");
      body = enforce_deadline(body, c.navgap.horizon, config_.v_max);
    }
    body.source_gap = index;
    c.trajectory = to_odom(body, input.pose);
    c.cost = score_trajectory(c.trajectory, input.scan.stamp, statics, input.agents, input.scan.stamp,
                              input.waypoint, config_.score);
    return c;
  } catch (const std::exception& e) {
    *error = "gap " + std::to_string(index) + ": " + e.what();
    return std::nullopt;
  }
}

Vec2 Planner::fallback_command(const PlannerInput& input) const {
  const EgoCircle& scan = input.scan;
  double best = kInf;
  Vec2 nearest = Vec2::Zero();
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (scan.is_free(i) || scan.ranges[i] >= best) continue;
    best = scan.ranges[i];
    nearest = scan.point(i);
  }
  if (std::isinf(best) || nearest.norm() <= 1e-12) return Vec2::Zero();
  return rotate(-nearest.normalized(), input.pose.yaw) * (0.5 * config_.v_max);
}

StepRecord Planner::plan_step(const PlannerInput& input) {
  StepRecord rec;
  rec.stamp = input.scan.stamp;
  rec.gaps = observe(input);
  const std::vector<Vec2> statics = static_points(input.scan, input.pose, input.agents);
  rec.status = evaluate_current(input, rec.gaps, statics, &rec.current_cost);

  const SwitchDecision keep = should_switch(rec.status, {});
  if (keep.kind == SwitchDecision::Kind::Keep) {
    rec.decision = keep;
  } else {
    rec.synthesized = true;
    std::vector<double> costs;
    for (int i = 0; i < static_cast<int>(rec.gaps.size()); ++i) {
      if (!rec.gaps[static_cast<std::size_t>(i)].feasible) continue;
      std::string err;
      if (auto c = synthesize(input, rec.gaps, i, statics, &err)) {
        costs.push_back(c->cost);
        rec.candidates.push_back(std::move(*c));
      } else {
        rec.candidate_errors.push_back(err);
      }
    }
    rec.decision = should_switch(rec.status, costs);
    if (rec.decision.kind == SwitchDecision::Kind::SwitchTo) {
      Candidate& c = rec.candidates[static_cast<std::size_t>(rec.decision.candidate)];
      c.trajectory.field_id = next_field_id_++;
      const PlannerGap& g = rec.gaps[static_cast<std::size_t>(c.gap_index)];
      trajectory_ = c.trajectory;
      trajectory_start_ = input.scan.stamp;
      trajectory_left_id_ = g.planning_left_id();
      trajectory_right_id_ = g.planning_right_id();
    } else {
      trajectory_.reset();
      fallback_ = fallback_command(input);
    }
    switch_log_.push_back(std::to_string(rec.stamp) + " " + std::string(to_string(rec.decision.kind)) + " " +
                          std::string(to_string(rec.decision.reason)));
  }
  rec.command = command(input.scan.stamp);
  return rec;
}

Vec2 Planner::command(double t) const {
  if (!trajectory_) return fallback_;
  const auto& poses = trajectory_->poses;
  const double rel = t - trajectory_start_;
  const auto it = std::lower_bound(poses.begin(), poses.end(), rel,
                                   [](const TrajectoryPose& q, double v) { return q.t < v; });
  std::size_t k = static_cast<std::size_t>(it - poses.begin());
  if (k == poses.size()) {
    // Past the end: hold position until the next scan replaces the trajectory.
    const double step = poses.size() > 1 ? poses[1].t : 0.0;
    if (rel > poses.back().t + 0.5 * step) return Vec2::Zero();
    k = poses.size() - 1;
  } else if (k > 0 && rel - poses[k - 1].t <= poses[k].t - rel) {
    --k;
  }
  return poses[k].u;
}

}  // namespace dgap
