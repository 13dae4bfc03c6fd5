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

#ifndef DGAP_PLANNER_HPP
#define DGAP_PLANNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "dgap/ahpf.hpp"
#include "dgap/egocircle.hpp"
#include "dgap/gap_feasibility.hpp"
#include "dgap/gap_tracking.hpp"
#include "dgap/navigable_gap.hpp"

namespace dgap {

struct TrajectoryPose {
  double t{0.0};  ///< seconds since the trajectory start
  Vec2 p{Vec2::Zero()};
  Vec2 u{Vec2::Zero()};
};

struct Trajectory {
  std::vector<TrajectoryPose> poses;
  int source_gap{-1};
  int field_id{-1};
  bool reached_goal{false};
  Vec2 goal{Vec2::Zero()};

  [[nodiscard]] bool empty() const { return poses.empty(); }
  [[nodiscard]] double duration() const { return poses.empty() ? 0.0 : poses.back().t; }
};

struct RolloutConfig {
  double horizon{5.0};
  double dt{0.02};
  double goal_tolerance{0.05};
  double region_tolerance{1e-6};  ///< boundary slack for the region membership check
};

/**
 * Explicit Euler rollout of the field from `start`. Stops after `horizon` or once
 * within goal_tolerance of the field goal. When `region` is given every pose must
 * stay inside it; an exit throws SynthesisFailure.
 */
Trajectory synthesize_trajectory(const HarmonicField& field, const NavigableGap* region, const Vec2& start,
                                 const RolloutConfig& config = {});

/**
 * Speeds a trajectory up so it ends by `deadline`, keeping its path. Throws
 * SynthesisFailure when that needs more than v_max.
 */
Trajectory enforce_deadline(const Trajectory& traj, double deadline, double v_max);

/// A disc obstacle moving at constant velocity, observed at `stamp`.
struct AgentObservation {
  Vec2 position{Vec2::Zero()};
  Vec2 velocity{Vec2::Zero()};
  double radius{0.0};
};

/// 2D pose in the odometry frame.
struct Pose2 {
  Vec2 position{Vec2::Zero()};
  double yaw{0.0};

  [[nodiscard]] Vec2 to_world(const Vec2& body) const { return position + rotate(body, yaw); }
  [[nodiscard]] Vec2 to_body(const Vec2& world) const { return rotate(world - position, -yaw); }
};

struct ScoreConfig {
  double r_infl{0.25};
  double d_max{1.5};
  double lambda{1.0};
  /// Time between scored poses. Each rollout pose carries its share of this interval,
  /// so the obstacle term does not depend on the integration step.
  double pose_interval{1.0};
};

/// Static scan points (odometry frame) with the beams attributed to agents removed.
std::vector<Vec2> static_points(const EgoCircle& scan, const Pose2& pose, const std::vector<AgentObservation>& agents);

/// Pose-wise obstacle cost: infinite inside r_infl, (d_max/d - 1)^2 below d_max, else 0.
double obstacle_cost(double d, const ScoreConfig& config);

/**
 * Sum of pose-wise obstacle costs plus lambda times the terminal distance to the
 * waypoint. Poses are in the odometry frame; pose k is at time start + t_k and is
 * compared with agents advanced from `agents_stamp`. Poses before `from_time` are
 * skipped.
 */
double score_trajectory(const Trajectory& traj, double start, const std::vector<Vec2>& statics,
                        const std::vector<AgentObservation>& agents, double agents_stamp, const Vec2& waypoint,
                        const ScoreConfig& config = {}, double from_time = -1e300);

enum class SwitchReason { None, NoTrajectory, Colliding, ModelsDied, Infeasible, Ended };
std::string_view to_string(SwitchReason r);

struct SwitchDecision {
  enum class Kind { Keep, SwitchTo, Stop };
  Kind kind{Kind::Keep};
  int candidate{-1};  ///< index into the candidate list for SwitchTo
  SwitchReason reason{SwitchReason::None};
};
std::string_view to_string(SwitchDecision::Kind k);

/// Health of the executing trajectory under the latest scan.
struct CurrentStatus {
  bool has_trajectory{false};
  bool colliding{false};
  bool models_alive{true};
  bool gap_feasible{true};
  bool ended{false};
};

/// Keeps the current trajectory unless a trigger fires; then picks the cheapest finite candidate or stops.
SwitchDecision should_switch(const CurrentStatus& status, const std::vector<double>& candidate_costs);

struct PlannerConfig {
  PropagationConfig propagation;
  TrackerConfig tracker;
  NavGapConfig navgap;
  AhpfConfig ahpf;
  RolloutConfig rollout;
  ScoreConfig score;
  SimplifyConfig simplify;
  double radial_jump{1.0};
  double v_max{0.5};
  double r_infl{0.25};
  double max_gap_width{0.75 * kPi};  ///< wider gaps are reduced around the waypoint bearing
  /// Range cap of artificial sides (reduction sides and sides on free beams); longer
  /// sides make the inward-flow problem infeasible.
  double artificial_side_range{3.0};

  /// Copies the shared values (v_max, r_infl, horizon) into the sub-configs.
  void sync();
};

/// One gap as seen by the planner in the latest scan.
struct PlannerGap {
  Gap gap;
  /// Tracker model of the detected endpoint, -1 on free beams. Kept when the side is
  /// replaced by a synthetic one so that reduction does not end the model.
  int left_id{-1};
  int right_id{-1};
  bool left_synthetic{false};
  bool right_synthetic{false};
  bool reduced{false};
  std::optional<PropagationResult> prop;
  bool feasible{false};
  std::string verdict;

  /// Ids of the models behind the sides the navigable gap is built on.
  [[nodiscard]] int planning_left_id() const { return left_synthetic ? -1 : left_id; }
  [[nodiscard]] int planning_right_id() const { return right_synthetic ? -1 : right_id; }
};

struct Candidate {
  int gap_index{-1};
  NavigableGap navgap;
  HarmonicField field;
  Trajectory trajectory;  ///< odometry frame
  double cost{0.0};
};

struct PlannerInput {
  EgoCircle scan;
  EgoMotion ego;
  Pose2 pose;
  Vec2 waypoint{Vec2::Zero()};  ///< odometry frame
  std::vector<AgentObservation> agents;  ///< odometry frame, observed at scan.stamp
};

/// Everything a single plan step decided, for the trace.
struct StepRecord {
  double stamp{0.0};
  std::vector<PlannerGap> gaps;
  std::vector<Candidate> candidates;
  std::vector<std::string> candidate_errors;
  CurrentStatus status;
  SwitchDecision decision;
  double current_cost{0.0};
  Vec2 command{Vec2::Zero()};  ///< odometry frame
  bool synthesized{false};
};

/**
 * Per-scan pipeline: gaps, tracking, feasibility, and (when a switching trigger
 * fires) navigable gaps, fields, rollouts and scores. Deterministic for identical
 * inputs and state.
 */
class Planner {
 public:
  explicit Planner(PlannerConfig config = {});

  StepRecord plan_step(const PlannerInput& input);

  /// Velocity command (odometry frame) at time t: nearest-in-time pose of the active
  /// trajectory, or the fallback command when stopped.
  [[nodiscard]] Vec2 command(double t) const;

  [[nodiscard]] const std::optional<Trajectory>& trajectory() const { return trajectory_; }
  [[nodiscard]] double trajectory_start() const { return trajectory_start_; }
  [[nodiscard]] const PlannerConfig& config() const { return config_; }
  [[nodiscard]] const std::vector<std::string>& switch_log() const { return switch_log_; }
  void reset();

 private:
  std::vector<PlannerGap> observe(const PlannerInput& input);
  CurrentStatus evaluate_current(const PlannerInput& input, const std::vector<PlannerGap>& gaps,
                                 const std::vector<Vec2>& statics, double* cost) const;
  std::optional<Candidate> synthesize(const PlannerInput& input, const std::vector<PlannerGap>& gaps, int index,
                                      const std::vector<Vec2>& statics, std::string* error) const;
  Vec2 fallback_command(const PlannerInput& input) const;

  PlannerConfig config_;
  GapTracker tracker_;
  std::optional<Trajectory> trajectory_;
  double trajectory_start_{0.0};
  int trajectory_left_id_{-1};
  int trajectory_right_id_{-1};
  double trajectory_deadline_{0.0};
  Vec2 fallback_{Vec2::Zero()};
  int next_field_id_{0};
  std::vector<std::string> switch_log_;
};

/// Reduces a gap wider than `max_width` to a span of that width around `bearing`,
/// clamped inside the original span. Synthetic sides take the scan range at their beam.
Gap reduce_gap(const EgoCircle& scan, const Gap& gap, double bearing, double max_width, bool* left_synthetic,
               bool* right_synthetic);

}  // namespace dgap

#endif  // DGAP_PLANNER_HPP
