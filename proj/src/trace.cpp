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

#include "dgap/trace.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <istream>
#include <ostream>
#include <type_traits>

#include "dgap/config_fields.hpp"

namespace dgap {

namespace {

Json vec(const Vec2& v) { return Json::array({v.x(), v.y()}); }

Vec2 vec_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput("expected a two-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

// JSON has no infinity; costs use the string "inf".
Json cost_json(double c) { return std::isfinite(c) ? Json(c) : Json("inf"); }

Json gap_point(const GapPoint& p) { return {{"index", p.index}, {"bearing", p.bearing}, {"range", p.range}}; }

Json side_json(const BezierSide& b) {
  return {{"origin", vec(b.origin)}, {"p0", vec(b.p0)}, {"p1", vec(b.p1)}, {"w0", b.w0}};
}

Json& section_of(Json& root, const char* section) { return *section ? root[section] : root; }

template <class T>
void assign(const Json& j, T* field) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw InvalidInput("expected a boolean");
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    if (!j.is_array()) throw InvalidInput("expected a list of numbers");
  } else {
    if (!j.is_number()) throw InvalidInput("expected a number");
  }
  *field = j.get<T>();
}

}  // namespace

Json planner_config_to_json(const PlannerConfig& config) {
  Json j = Json::object();
  PlannerConfig c = config;
  visit_planner_fields(c, [&](const char* section, const char* key, const auto& v) {
    section_of(j, section)[key] = v;
  });
  return j;
}

void planner_config_from_json(const Json& j, PlannerConfig* config) {
  if (!j.is_object()) throw InvalidInput("planner config must be an object");
  const Json known = planner_config_to_json(PlannerConfig{});
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto k = known.find(it.key());
    if (k == known.end()) throw InvalidInput("unknown planner key: " + it.key());
    if (!k->is_object()) continue;
    if (!it->is_object()) throw InvalidInput(it.key() + ": expected a section");
    for (auto jt = it->begin(); jt != it->end(); ++jt) {
      if (!k->contains(jt.key())) throw InvalidInput("unknown planner key: " + it.key() + "." + jt.key());
    }
  }
  visit_planner_fields(*config, [&](const char* section, const char* key, auto& field) {
    const Json& node = *section ? j.value(section, Json::object()) : j;
    const auto it = node.find(key);
    if (it == node.end()) return;
    try {
      assign(*it, &field);
    } catch (const std::exception& e) {
      throw InvalidInput(std::string(*section ? section : "planner") + "." + key + ": " + e.what());
    }
  });
  config->sync();
}

Json trial_config_to_json(const TrialConfig& c) {
  return {{"seed", c.seed},
          {"category", to_string(c.category)},
          {"agent_speed", c.agent_speed},
          {"fov", c.fov},
          {"scan_rate", c.scan_rate},
          {"control_rate", c.control_rate},
          {"n_beams", c.n_beams},
          {"max_range", c.max_range},
          {"timeout", c.timeout},
          {"goal_tolerance", c.goal_tolerance},
          {"goal", vec(c.goal)},
          {"corridor", c.corridor},
          {"corridor_length", c.corridor_length},
          {"corridor_width", c.corridor_width},
          {"agent_density", c.agent_density},
          {"planner", planner_config_to_json(c.planner)}};
}

TrialConfig trial_config_from_json(const Json& j) {
  TrialConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.category = parse_category(j.at("category").get<std::string>());
  c.agent_speed = j.at("agent_speed").get<double>();
  c.fov = j.at("fov").get<double>();
  c.scan_rate = j.at("scan_rate").get<double>();
  c.control_rate = j.at("control_rate").get<double>();
  c.n_beams = j.at("n_beams").get<std::size_t>();
  c.max_range = j.at("max_range").get<double>();
  c.timeout = j.at("timeout").get<double>();
  c.goal_tolerance = j.at("goal_tolerance").get<double>();
  c.goal = vec_from(j.at("goal"));
  c.corridor = j.at("corridor").get<bool>();
  c.corridor_length = j.at("corridor_length").get<double>();
  c.corridor_width = j.at("corridor_width").get<double>();
  c.agent_density = j.at("agent_density").get<double>();
  planner_config_from_json(j.at("planner"), &c.planner);
  return c;
}

Json input_to_json(const PlannerInput& in) {
  Json agents = Json::array();
  for (const auto& a : in.agents) {
    agents.push_back({{"position", vec(a.position)}, {"velocity", vec(a.velocity)}, {"radius", a.radius}});
  }
  return {{"scan",
           {{"stamp", in.scan.stamp},
            {"angle_min", in.scan.angle_min},
            {"angle_max", in.scan.angle_max},
            {"max_range", in.scan.max_range},
            {"ranges", in.scan.ranges}}},
          {"ego",
           {{"linear_velocity", vec(in.ego.linear_velocity)},
            {"linear_acceleration", vec(in.ego.linear_acceleration)},
            {"angular_velocity", in.ego.angular_velocity}}},
          {"pose", {{"position", vec(in.pose.position)}, {"yaw", in.pose.yaw}}},
          {"waypoint", vec(in.waypoint)},
          {"agents", agents}};
}

PlannerInput input_from_json(const Json& j) {
  PlannerInput in;
  const Json& s = j.at("scan");
  in.scan.stamp = s.at("stamp").get<double>();
  in.scan.angle_min = s.at("angle_min").get<double>();
  in.scan.angle_max = s.at("angle_max").get<double>();
  in.scan.max_range = s.at("max_range").get<double>();
  in.scan.ranges = s.at("ranges").get<std::vector<double>>();
  const Json& e = j.at("ego");
  in.ego.linear_velocity = vec_from(e.at("linear_velocity"));
  in.ego.linear_acceleration = vec_from(e.at("linear_acceleration"));
  in.ego.angular_velocity = e.at("angular_velocity").get<double>();
  in.pose.position = vec_from(j.at("pose").at("position"));
  in.pose.yaw = j.at("pose").at("yaw").get<double>();
  in.waypoint = vec_from(j.at("waypoint"));
  for (const auto& a : j.at("agents")) {
    in.agents.push_back({vec_from(a.at("position")), vec_from(a.at("velocity")), a.at("radius").get<double>()});
  }
  return in;
}

Json field_to_json(const HarmonicField& field) {
  Json centers = Json::array();
  for (const auto& c : field.centers) centers.push_back(vec(c));
  std::vector<double> w(field.weights.data(), field.weights.data() + field.weights.size());
  return {{"goal", vec(field.goal)}, {"centers", centers}, {"weights", w}};
}

HarmonicField field_from_json(const Json& j, double gain, double v_max) {
  HarmonicField f;
  f.goal = vec_from(j.at("goal"));
  for (const auto& c : j.at("centers")) f.centers.push_back(vec_from(c));
  const auto w = j.at("weights").get<std::vector<double>>();
  if (w.size() != f.centers.size()) throw InvalidInput("field: weight and center counts differ");
  f.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  f.gain = gain;
  f.v_max = v_max;
  return f;
}

Json record_to_json(const PlannerInput& input, const StepRecord& rec) {
  Json gaps = Json::array();
  for (const auto& g : rec.gaps) {
    Json jg = {{"left", gap_point(g.gap.left)},
               {"right", gap_point(g.gap.right)},
               {"kind", g.gap.kind == GapKind::Radial ? "radial" : "swept"},
               {"left_id", g.left_id},
               {"right_id", g.right_id},
               {"left_synthetic", g.left_synthetic},
               {"right_synthetic", g.right_synthetic},
               {"reduced", g.reduced},
               {"feasible", g.feasible},
               {"verdict", g.verdict}};
    if (g.prop) {
      jg["category"] = to_string(g.prop->category.gap);
      jg["event"] = to_string(g.prop->event);
      jg["t_terminal"] = g.prop->t_terminal;
      jg["left_velocity"] = vec(g.prop->left.velocity);
      jg["right_velocity"] = vec(g.prop->right.velocity);
    }
    gaps.push_back(jg);
  }
  Json candidates = Json::array();
  for (const auto& c : rec.candidates) {
    Json traj = Json::array();
    for (const auto& q : c.trajectory.poses) traj.push_back({q.t, q.p.x(), q.p.y(), q.u.x(), q.u.y()});
    candidates.push_back({{"gap", c.gap_index},
                          {"cost", cost_json(c.cost)},
                          {"event", to_string(c.navgap.event)},
                          {"horizon", c.navgap.horizon},
                          {"inflation_scale", c.navgap.inflation_scale},
                          {"pose", {{"position", vec(input.pose.position)}, {"yaw", input.pose.yaw}}},
                          {"goal", vec(c.navgap.goal)},
                          {"left_side", side_json(c.navgap.left)},
                          {"right_side", side_json(c.navgap.right)},
                          {"field", field_to_json(c.field)},
                          {"trajectory", traj}});
  }
  return {{"t", rec.stamp},
          {"input", input_to_json(input)},
          {"gaps", gaps},
          {"candidates", candidates},
          {"errors", rec.candidate_errors},
          {"status",
           {{"has_trajectory", rec.status.has_trajectory},
            {"colliding", rec.status.colliding},
            {"models_alive", rec.status.models_alive},
            {"gap_feasible", rec.status.gap_feasible},
            {"ended", rec.status.ended}}},
          {"current_cost", cost_json(rec.current_cost)},
          {"decision", decision_digest(rec)}};
}

Json decision_digest(const StepRecord& rec) {
  Json costs = Json::array();
  for (const auto& c : rec.candidates) costs.push_back(cost_json(c.cost));
  const int gap = rec.decision.kind == SwitchDecision::Kind::SwitchTo
                      ? rec.candidates[static_cast<std::size_t>(rec.decision.candidate)].gap_index
                      : -1;
  return {{"kind", to_string(rec.decision.kind)},
          {"reason", to_string(rec.decision.reason)},
          {"gap", gap},
          {"costs", costs},
          {"command", vec(rec.command)}};
}

Json decision_digest(const Json& record) { return record.at("decision"); }

void TraceWriter::header(const Json& config) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  Json h = {{"schema", kTraceSchema}, {"created", buf}, {"config", config}};
  out_ << h.dump() << '\n';
}

void TraceWriter::step(const PlannerInput& input, const StepRecord& record) {
  out_ << record_to_json(input, record).dump() << '\n';
}

TraceFile read_trace(std::istream& in) {
  TraceFile t;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const std::exception& e) {
      throw InvalidInput("trace line " + std::to_string(n) + ": " + e.what());
    }
    if (n == 1) {
      if (!j.contains("schema") || j["schema"] != kTraceSchema) {
        throw InvalidInput("trace line 1: missing or unsupported schema header");
      }
      t.header = std::move(j);
    } else {
      t.records.push_back(std::move(j));
    }
  }
  if (n == 0) throw InvalidInput("trace: empty file");
  return t;
}

std::vector<std::string> replay_trace(const TraceFile& trace) {
  const TrialConfig config = trial_config_from_json(trace.header.at("config"));
  Planner planner(config.planner);
  std::vector<std::string> diffs;
  for (const auto& rec : trace.records) {
    const PlannerInput in = input_from_json(rec.at("input"));
    const Json now = decision_digest(planner.plan_step(in));
    const Json& then = decision_digest(rec);
    if (now != then) {
      diffs.push_back("t=" + rec.at("t").dump() + ": recorded " + then.dump() + " replayed " + now.dump());
    }
  }
  return diffs;
}

}  // namespace dgap
