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

#ifndef DGAP_TOOLS_MANIFEST_HPP
#define DGAP_TOOLS_MANIFEST_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgap/planner.hpp"
#include "dgap/simworld.hpp"

namespace dgap::cli {

/// Malformed or invalid config file; the message starts with "path:line:col:".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed command line that the argument parser cannot catch (exit status 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Settings from an optional YAML file:
 *
 *   planner:    planner keys, in the sections of the trace header
 *   trial:      scan_rate, control_rate, n_beams, max_range, timeout, goal_tolerance,
 *               goal, corridor_length, corridor_width, agent_density
 *   benchmark:  suite, trials, first_seed, fovs (degrees), jobs
 *
 * Command-line flags take precedence over the file.
 */
struct FileConfig {
  PlannerConfig planner;
  std::vector<std::function<void(TrialConfig&)>> trial_overrides;
  std::optional<std::string> suite;
  std::optional<int> trials;
  std::optional<std::uint64_t> first_seed;
  std::optional<std::vector<int>> fovs;
  std::optional<int> jobs;

  /// Applies the planner settings and the trial section to `config`.
  void apply(TrialConfig& config) const;
};

/// Throws ConfigError with a line-precise message.
FileConfig load_config(const std::string& path);
FileConfig parse_config(const std::string& text, const std::string& name);

/// Inclusive seed range "a..b" with a <= b. Throws UsageError otherwise.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

/// 180, 270 or 360 degrees to radians. Throws UsageError otherwise.
double fov_radians(int degrees);

}  // namespace dgap::cli

#endif  // DGAP_TOOLS_MANIFEST_HPP
