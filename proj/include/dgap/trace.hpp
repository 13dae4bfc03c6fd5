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

#ifndef DGAP_TRACE_HPP
#define DGAP_TRACE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "dgap/planner.hpp"
#include "dgap/simworld.hpp"

namespace dgap {

using Json = nlohmann::ordered_json;

inline constexpr const char* kTraceSchema = "dgap.trace/1";

Json planner_config_to_json(const PlannerConfig& config);
/// Applies the keys present in `j`; unknown keys throw InvalidInput.
void planner_config_from_json(const Json& j, PlannerConfig* config);

Json trial_config_to_json(const TrialConfig& config);
TrialConfig trial_config_from_json(const Json& j);

Json input_to_json(const PlannerInput& input);
PlannerInput input_from_json(const Json& j);

Json field_to_json(const HarmonicField& field);
HarmonicField field_from_json(const Json& j, double gain, double v_max);

/// Full decision record of one step, planner input included.
Json record_to_json(const PlannerInput& input, const StepRecord& record);

/// The fields `replay` compares: decision, reason, chosen gap, candidate costs, command.
Json decision_digest(const StepRecord& record);
Json decision_digest(const Json& record);

/**
 * JSON-lines trace. The first line is the header (schema, wall-clock time, config);
 * every other line is one planner step. Only the header carries a timestamp, so
 * bodies of identical runs are byte-identical.
 */
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out) : out_(out) {}
  void header(const Json& config);
  void step(const PlannerInput& input, const StepRecord& record);

 private:
  std::ostream& out_;
};

struct TraceFile {
  Json header;
  std::vector<Json> records;
};

/// Throws InvalidInput naming the offending line on malformed input.
TraceFile read_trace(std::istream& in);

/// Replays a trace with a fresh planner; returns one message per differing step.
std::vector<std::string> replay_trace(const TraceFile& trace);

}  // namespace dgap

#endif  // DGAP_TRACE_HPP
