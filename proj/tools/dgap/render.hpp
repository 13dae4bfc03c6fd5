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

#ifndef DGAP_TOOLS_RENDER_HPP
#define DGAP_TOOLS_RENDER_HPP

#include <cstddef>
#include <optional>
#include <string>

#include "dgap/trace.hpp"

namespace dgap::cli {

/// Index of the first record with candidates, or 0 when none has any.
std::size_t default_step(const TraceFile& trace);

/**
 * World-frame overlay of one planner step: the robot path over the whole trace,
 * scan returns and agents at the step, gaps as arcs between their end points,
 * navigable-gap sides, goals and candidate trajectories. The adopted candidate is
 * drawn solid, the others dashed.
 */
std::string render_step_svg(const TraceFile& trace, std::size_t step);

/**
 * Potential and velocity command of one recorded candidate field, sampled on a grid
 * in the robot frame of that step. The lattice is anchored on the field goal, so
 * the goal is the centre of its cell.
 */
Json field_grid(const TraceFile& trace, std::size_t step, std::optional<std::size_t> candidate, int cells);

}  // namespace dgap::cli

#endif  // DGAP_TOOLS_RENDER_HPP
