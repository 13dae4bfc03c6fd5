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

#ifndef DGAP_SIMWORLD_HPP
#define DGAP_SIMWORLD_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dgap/common.hpp"
#include "dgap/egocircle.hpp"
#include "dgap/gap_feasibility.hpp"
#include "dgap/planner.hpp"

namespace dgap {

/**
 * Disc agent. Without waypoints it moves at constant `velocity`; with waypoints it
 * heads for waypoints[next] at `speed`, retargets on arrival and stops after the
 * last one (or wraps around when `loop` is set).
 */
struct Agent {
  Vec2 position{Vec2::Zero()};
  Vec2 velocity{Vec2::Zero()};
  double radius{0.3};
  std::vector<Vec2> waypoints;
  std::size_t next{0};
  double speed{0.0};
  bool loop{false};
};

struct Segment {
  Vec2 a{Vec2::Zero()};
  Vec2 b{Vec2::Zero()};
};

/// First-order holonomic point robot; heading stays fixed at the world x axis.
struct Ego {
  Vec2 position{Vec2::Zero()};
  Vec2 velocity{Vec2::Zero()};
  double radius{0.2};
  double r_infl{0.25};
  double v_max{0.5};
};

struct WorldState {
  std::vector<Agent> agents;
  std::vector<Segment> walls;
  Ego ego;
  double t{0.0};
  int clamp_count{0};  ///< commands that exceeded v_max and were clamped
};

/// Exact ray casting against agent discs and wall segments from the ego position.
EgoCircle raycast_scan(const WorldState& world, double fov, std::size_t n_beams, double max_range);

/// Advances ego (position += command * dt) and agents by dt.
WorldState step_world(const WorldState& world, const Vec2& command, double dt);

enum class CollisionKind { None, Dynamic, Static };
std::string_view to_string(CollisionKind k);

/// Strict overlap test of the robot disc with agents and walls.
CollisionKind collision_kind(const WorldState& world);
inline bool check_collision(const WorldState& world) { return collision_kind(world) != CollisionKind::None; }

/// Smallest distance between the robot disc and any obstacle surface (negative when overlapping).
double clearance(const WorldState& world);

enum class Outcome { Success, DynamicCollision, StaticCollision, Timeout, PlannerError };
std::string_view to_string(Outcome o);
Category parse_category(std::string_view s);

inline constexpr double kAgentSpeeds[3] = {0.15, 0.30, 0.45};

struct TrialConfig {
  std::uint64_t seed{0};
  Category category{Category::Static};
  double agent_speed{0.15};
  double fov{kTwoPi};
  double scan_rate{25.0};
  double control_rate{50.0};
  std::size_t n_beams{512};
  double max_range{10.0};
  double timeout{60.0};
  double goal_tolerance{0.2};
  Vec2 goal{9.0, 0.0};
  PlannerConfig planner;
  bool corridor{false};  ///< procedural corridor world instead of the single gap
  double corridor_length{40.0};
  double corridor_width{5.0};
  double agent_density{0.035};  ///< agents per square meter of free space (corridor)

  /// Category and speed of the single-gap suite: seed % 3 and (seed / 3) % 3.
  static TrialConfig single_gap(std::uint64_t seed, double fov = kTwoPi);
};

/// Initial world of a trial; deterministic in the seed.
WorldState make_world(const TrialConfig& config);

struct TrialResult {
  std::uint64_t seed{0};
  Outcome outcome{Outcome::Timeout};
  Category category{Category::Static};
  double agent_speed{0.0};
  double fov{0.0};
  double time{0.0};
  double min_clearance{0.0};
  int plan_steps{0};
  int switches{0};
  int stops{0};
  int clamp_count{0};
  std::string diagnostic;
};

/// Per-step observer: planner input and its decision record.
using StepObserver = std::function<void(const PlannerInput&, const StepRecord&)>;

/// Scan, plan and step at the configured rates until success, collision or timeout.
TrialResult run_trial(const TrialConfig& config, const StepObserver& observer = {});

struct SuiteConfig {
  std::string name{"single-gap"};
  int trials{100};
  std::uint64_t first_seed{0};
  std::vector<double> fovs{kTwoPi};
  int jobs{1};
  PlannerConfig planner;
  double timeout{60.0};
  bool corridor{false};
};

struct BenchmarkSummary {
  std::string name;
  std::vector<TrialResult> results;
  /// Outcome counts keyed by "fov/speed/category".
  std::map<std::string, std::map<std::string, int>> groups;
  std::map<std::string, int> totals;
  int dynamic_collisions{0};
  int static_collisions{0};
};

std::vector<TrialConfig> suite_trials(const SuiteConfig& suite);

/// Runs trials on `jobs` threads; the result order follows the trial list.
std::vector<TrialResult> run_trials(const std::vector<TrialConfig>& trials, int jobs);

BenchmarkSummary run_benchmark(const SuiteConfig& suite);
BenchmarkSummary summarize(const std::string& name, std::vector<TrialResult> results);

/// One-line JSON of a trial result; the same fields as the summary's "results" entries.
std::string trial_result_json(const TrialResult& result);
std::string summary_json(const BenchmarkSummary& summary);
/// Stacked outcome bars per group, one SVG document.
std::string summary_svg(const BenchmarkSummary& summary);

}  // namespace dgap

#endif  // DGAP_SIMWORLD_HPP
