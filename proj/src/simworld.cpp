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

#include "dgap/simworld.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace dgap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest positive t with |o + t d - c| = r, d a unit vector.
double ray_circle(const Vec2& o, const Vec2& d, const Vec2& c, double r) {
  const Vec2 oc = o - c;
  const double b = oc.dot(d);
  const double disc = b * b - (oc.squaredNorm() - r * r);
  if (disc < 0.0) return kInf;
  const double s = std::sqrt(disc);
  const double t0 = -b - s;
  if (t0 > 0.0) return t0;
  const double t1 = -b + s;
  return t1 > 0.0 ? t1 : kInf;
}

double ray_segment(const Vec2& o, const Vec2& d, const Segment& seg) {
  const Vec2 e = seg.b - seg.a;
  const double den = cross(d, e);
  if (std::abs(den) <= 1e-15) return kInf;
  const Vec2 w = seg.a - o;
  const double t = cross(w, e) / den;
  const double s = cross(w, d) / den;
  if (t <= 0.0 || s < 0.0 || s > 1.0) return kInf;
  return t;
}

double wall_distance(const Segment& w, const Vec2& p) {
  const Vec2 ab = w.b - w.a;
  const double len2 = ab.squaredNorm();
  const double t = len2 <= 0.0 ? 0.0 : std::clamp((p - w.a).dot(ab) / len2, 0.0, 1.0);
  return (w.a + t * ab - p).norm();
}

void advance_agent(Agent* a, double dt) {
  if (a->waypoints.empty()) {
    a->position += a->velocity * dt;
    return;
  }
  if (a->next >= a->waypoints.size()) {
    a->velocity.setZero();
    return;
  }
  const Vec2 target = a->waypoints[a->next];
  const Vec2 delta = target - a->position;
  const double dist = delta.norm();
  const double stride = a->speed * dt;
  if (dist <= stride) {
    a->position = target;
    ++a->next;
    if (a->loop && a->next >= a->waypoints.size()) a->next = 0;
    if (a->next < a->waypoints.size()) {
      const Vec2 dir = a->waypoints[a->next] - a->position;
      a->velocity = dir.norm() > 0.0 ? Vec2(a->speed * dir.normalized()) : Vec2::Zero();
    } else {
      a->velocity.setZero();
    }
    return;
  }
  a->velocity = a->speed * delta / dist;
  a->position += a->velocity * dt;
}

Agent waypoint_agent(const Vec2& position, double radius, double speed, std::vector<Vec2> waypoints, bool loop) {
  Agent a;
  a.position = position;
  a.radius = radius;
  a.speed = speed;
  a.waypoints = std::move(waypoints);
  a.loop = loop;
  if (!a.waypoints.empty()) {
    const Vec2 d = a.waypoints.front() - position;
    if (d.norm() > 0.0) a.velocity = speed * d.normalized();
  }
  return a;
}

std::string fov_label(double fov) { return std::to_string(static_cast<int>(std::lround(fov * 180.0 / kPi))); }

std::string speed_label(double s) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", s);
  return buf;
}

}  // namespace

EgoCircle raycast_scan(const WorldState& world, double fov, std::size_t n_beams, double max_range) {
  EgoCircle scan = EgoCircle::make(fov, n_beams, max_range);
  scan.stamp = world.t;
  const Vec2 o = world.ego.position;
  for (std::size_t i = 0; i < n_beams; ++i) {
    const Vec2 d = unit_bearing(scan.angle(i));
    double best = kInf;
    for (const auto& a : world.agents) best = std::min(best, ray_circle(o, d, a.position, a.radius));
    for (const auto& w : world.walls) best = std::min(best, ray_segment(o, d, w));
    scan.ranges[i] = best >= max_range ? max_range : std::max(best, 1e-6);
  }
  return scan;
}

WorldState step_world(const WorldState& world, const Vec2& command, double dt) {
  WorldState next = world;
  Vec2 u = command;
  const double n = u.norm();
  if (n > world.ego.v_max + 1e-9) {
    u *= world.ego.v_max / n;
    ++next.clamp_count;
  }
  next.ego.position += u * dt;
  next.ego.velocity = u;
  for (auto& a : next.agents) advance_agent(&a, dt);
  next.t = world.t + dt;
  return next;
}

std::string_view to_string(CollisionKind k) {
  switch (k) {
    case CollisionKind::None: return "none";
    case CollisionKind::Dynamic: return "dynamic";
    case CollisionKind::Static: return "static";
  }
  return "unknown";
}

CollisionKind collision_kind(const WorldState& world) {
  const Vec2 p = world.ego.position;
  for (const auto& a : world.agents) {
    if ((p - a.position).norm() < a.radius + world.ego.radius) return CollisionKind::Dynamic;
  }
  for (const auto& w : world.walls) {
    if (wall_distance(w, p) < world.ego.radius) return CollisionKind::Static;
  }
  return CollisionKind::None;
}

double clearance(const WorldState& world) {
  const Vec2 p = world.ego.position;
  double d = kInf;
  for (const auto& a : world.agents) d = std::min(d, (p - a.position).norm() - a.radius - world.ego.radius);
  for (const auto& w : world.walls) d = std::min(d, wall_distance(w, p) - world.ego.radius);
  return d;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::DynamicCollision: return "dynamic_collision";
    case Outcome::StaticCollision: return "static_collision";
    case Outcome::Timeout: return "timeout";
    case Outcome::PlannerError: return "planner_error";
  }
  return "unknown";
}

Category parse_category(std::string_view s) {
  if (s == "static") return Category::Static;
  if (s == "expanding") return Category::Expanding;
  if (s == "shrinking") return Category::Shrinking;
  throw InvalidInput("unknown gap category: " + std::string(s));
}

TrialConfig TrialConfig::single_gap(std::uint64_t seed, double fov) {
  TrialConfig c;
  c.seed = seed;
  c.fov = fov;
  constexpr Category kCategories[3] = {Category::Static, Category::Shrinking, Category::Expanding};
  c.category = kCategories[seed % 3];
  c.agent_speed = kAgentSpeeds[(seed / 3) % 3];
  return c;
}

WorldState make_world(const TrialConfig& config) {
  std::mt19937_64 rng(config.seed);
  const auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  WorldState w;
  w.ego.r_infl = config.planner.r_infl;
  w.ego.v_max = config.planner.v_max;

  if (config.corridor) {
    const double half = 0.5 * config.corridor_width;
    const double end = config.corridor_length;
    w.walls = {{{-2.0, -half}, {end, -half}}, {{-2.0, half}, {end, half}}, {{-2.0, -half}, {-2.0, half}},
               {{end, -half}, {end, half}}};
    const auto count = static_cast<int>(std::lround(config.agent_density * config.corridor_length * config.corridor_width));
    for (int i = 0; i < count; ++i) {
      const double r = uniform(0.25, 0.35);
      const Vec2 a(uniform(4.0, end - 2.0), uniform(-half + r + 0.1, half - r - 0.1));
      const Vec2 b(uniform(4.0, end - 2.0), uniform(-half + r + 0.1, half - r - 0.1));
      const double speed = kAgentSpeeds[static_cast<std::size_t>(uniform(0.0, 3.0)) % 3];
      w.agents.push_back(waypoint_agent(a, r, speed, {b, a}, true));
    }
    return w;
  }

  // One agent pair forming a gap on the straight line to the goal.
  const double cx = uniform(3.0, 4.5);
  const double cy = uniform(-0.3, 0.3);
  const double r_left = uniform(0.25, 0.35);
  const double r_right = uniform(0.25, 0.35);
  const double width = uniform(1.2, 2.4);  // surface to surface, at least three robot diameters
  const Vec2 left(cx, cy + 0.5 * width + r_left);
  const Vec2 right(cx, cy - 0.5 * width - r_right);
  const double s = config.agent_speed;
  switch (config.category) {
    case Category::Static:
      w.agents.push_back(waypoint_agent(left, r_left, 0.0, {}, false));
      w.agents.push_back(waypoint_agent(right, r_right, 0.0, {}, false));
      break;
    case Category::Shrinking:
      // Converge perpendicular to the ego-gap axis until the discs touch.
      w.agents.push_back(waypoint_agent(left, r_left, s, {{cx, cy + r_left}}, false));
      w.agents.push_back(waypoint_agent(right, r_right, s, {{cx, cy - r_right}}, false));
      break;
    case Category::Expanding:
      w.agents.push_back(waypoint_agent(left, r_left, s, {{cx, left.y() + 3.0}}, false));
      w.agents.push_back(waypoint_agent(right, r_right, s, {{cx, right.y() - 3.0}}, false));
      break;
  }
  return w;
}

TrialResult run_trial(const TrialConfig& config, const StepObserver& observer) {
  TrialResult res;
  res.seed = config.seed;
  res.category = config.category;
  res.agent_speed = config.agent_speed;
  res.fov = config.fov;

  WorldState world = make_world(config);
  Planner planner(config.planner);
  const double dt = 1.0 / config.control_rate;
  const int scan_every = std::max(1, static_cast<int>(std::lround(config.control_rate / config.scan_rate)));
  const double scan_dt = dt * scan_every;
  const auto max_steps = static_cast<long>(std::ceil(config.timeout / dt - 1e-9));
  Vec2 last_scan_velocity = Vec2::Zero();
  res.min_clearance = clearance(world);

  for (long step = 0; step < max_steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    world.t = t;
    if (step % scan_every == 0) {
      PlannerInput in;
      in.scan = raycast_scan(world, config.fov, config.n_beams, config.max_range);
      in.scan.stamp = t;
      in.ego.linear_velocity = world.ego.velocity;
      in.ego.linear_acceleration = step == 0 ? Vec2::Zero() : Vec2((world.ego.velocity - last_scan_velocity) / scan_dt);
      in.ego.angular_velocity = 0.0;
      last_scan_velocity = world.ego.velocity;
      in.pose = Pose2{world.ego.position, 0.0};
      in.waypoint = config.goal;
      for (const auto& a : world.agents) in.agents.push_back({a.position, a.velocity, a.radius});
      try {
        const StepRecord rec = planner.plan_step(in);
        ++res.plan_steps;
        if (rec.decision.kind == SwitchDecision::Kind::SwitchTo) ++res.switches;
        if (rec.decision.kind == SwitchDecision::Kind::Stop) ++res.stops;
        if (observer) observer(in, rec);
      } catch (const std::exception& e) {
        res.outcome = Outcome::PlannerError;
        res.diagnostic = e.what();
        res.time = t;
        res.clamp_count = world.clamp_count;
        return res;
      }
    }
    world = step_world(world, planner.command(t), dt);
    world.t = static_cast<double>(step + 1) * dt;
    res.min_clearance = std::min(res.min_clearance, clearance(world));
    const CollisionKind hit = collision_kind(world);
    if (hit != CollisionKind::None || (world.ego.position - config.goal).norm() <= config.goal_tolerance) {
      res.outcome = hit == CollisionKind::Dynamic  ? Outcome::DynamicCollision
                    : hit == CollisionKind::Static ? Outcome::StaticCollision
                                                   : Outcome::Success;
      res.time = world.t;
      res.clamp_count = world.clamp_count;
      return res;
    }
  }
  res.outcome = Outcome::Timeout;
  res.time = static_cast<double>(max_steps) * dt;
  res.clamp_count = world.clamp_count;
  return res;
}

std::vector<TrialConfig> suite_trials(const SuiteConfig& suite) {
  std::vector<TrialConfig> out;
  for (double fov : suite.fovs) {
    for (int i = 0; i < suite.trials; ++i) {
      TrialConfig c = TrialConfig::single_gap(suite.first_seed + static_cast<std::uint64_t>(i), fov);
      c.planner = suite.planner;
      c.timeout = suite.timeout;
      if (suite.corridor) {
        c.corridor = true;
        c.goal = Vec2(c.corridor_length - 3.0, 0.0);
        c.timeout = std::max(suite.timeout, 4.0 * c.corridor_length / c.planner.v_max);
      }
      out.push_back(c);
    }
  }
  return out;
}

std::vector<TrialResult> run_trials(const std::vector<TrialConfig>& trials, int jobs) {
  std::vector<TrialResult> results(trials.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < trials.size(); i = next++) {
      try {
        results[i] = run_trial(trials[i]);
      } catch (const std::exception& e) {
        results[i].seed = trials[i].seed;
        results[i].outcome = Outcome::PlannerError;
        results[i].diagnostic = e.what();
      }
    }
  };
  const int n = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(1, trials.size())));
  if (n == 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  for (int k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

BenchmarkSummary summarize(const std::string& name, std::vector<TrialResult> results) {
  BenchmarkSummary s;
  s.name = name;
  for (const auto& r : results) {
    const std::string key =
        fov_label(r.fov) + "/" + speed_label(r.agent_speed) + "/" + std::string(to_string(r.category));
    const std::string outcome(to_string(r.outcome));
    ++s.groups[key][outcome];
    ++s.totals[outcome];
    if (r.outcome == Outcome::DynamicCollision) ++s.dynamic_collisions;
    if (r.outcome == Outcome::StaticCollision) ++s.static_collisions;
  }
  s.results = std::move(results);
  return s;
}

BenchmarkSummary run_benchmark(const SuiteConfig& suite) {
  return summarize(suite.name, run_trials(suite_trials(suite), suite.jobs));
}

namespace {

nlohmann::ordered_json result_json(const TrialResult& r) {
  return {{"seed", r.seed},
          {"fov", fov_label(r.fov)},
          {"speed", r.agent_speed},
          {"category", to_string(r.category)},
          {"outcome", to_string(r.outcome)},
          {"time", r.time},
          {"min_clearance", r.min_clearance},
          {"switches", r.switches},
          {"stops", r.stops},
          {"clamped_commands", r.clamp_count},
          {"diagnostic", r.diagnostic}};
}

}  // namespace

std::string trial_result_json(const TrialResult& result) { return result_json(result).dump(); }

std::string summary_json(const BenchmarkSummary& summary) {
  nlohmann::ordered_json j;
  j["suite"] = summary.name;
  j["trials"] = summary.results.size();
  const double n = std::max<double>(1.0, static_cast<double>(summary.results.size()));
  j["dynamic_collisions"] = summary.dynamic_collisions;
  j["static_collisions"] = summary.static_collisions;
  j["collision_rate"] = (summary.dynamic_collisions + summary.static_collisions) / n;
  j["totals"] = summary.totals;
  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  for (const auto& [key, counts] : summary.groups) {
    int total = 0;
    for (const auto& [_, c] : counts) total += c;
    nlohmann::ordered_json g;
    g["trials"] = total;
    for (const auto& [outcome, c] : counts) g["percent"][outcome] = 100.0 * c / total;
    g["counts"] = counts;
    groups[key] = g;
  }
  j["groups"] = groups;
  nlohmann::ordered_json trials = nlohmann::ordered_json::array();
  for (const auto& r : summary.results) trials.push_back(result_json(r));
  j["results"] = trials;
  return j.dump(2) + "\n";
}

std::string summary_svg(const BenchmarkSummary& summary) {
  static const std::vector<std::pair<std::string, std::string>> kColors = {
      {"success", "#4c9a2a"},         {"timeout", "#e0a526"},      {"dynamic_collision", "#c0392b"},
      {"static_collision", "#7f3c8d"}, {"planner_error", "#555555"}};
  const int bar = 36;
  const int gap = 14;
  const int height = 240;
  const int left = 50;
  const int groups = static_cast<int>(summary.groups.size());
  const int width = left + groups * (bar + gap) + 190;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height + 130
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<text x=\"" << left << "\" y=\"18\" font-size=\"14\">" << summary.name << ": outcome share per group</text>\n";
  o << "<line x1=\"" << left << "\" y1=\"30\" x2=\"" << left << "\" y2=\"" << 30 + height << "\" stroke=\"black\"/>\n";
  for (int pct = 0; pct <= 100; pct += 25) {
    const int y = 30 + height - pct * height / 100;
    o << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << pct << "%</text>\n";
  }
  int i = 0;
  for (const auto& [key, counts] : summary.groups) {
    int total = 0;
    for (const auto& [_, c] : counts) total += c;
    const int x = left + gap / 2 + i * (bar + gap);
    double acc = 0.0;
    for (const auto& [outcome, color] : kColors) {
      const auto it = counts.find(outcome);
      if (it == counts.end()) continue;
      const double h = static_cast<double>(height) * it->second / total;
      o << "<rect x=\"" << x << "\" y=\"" << 30 + height - acc - h << "\" width=\"" << bar << "\" height=\"" << h
        << "\" fill=\"" << color << "\"><title>" << key << " " << outcome << " " << it->second << "/" << total
        << "</title></rect>\n";
      acc += h;
    }
    o << "<text transform=\"translate(" << x + bar / 2 << "," << 36 + height << ") rotate(60)\">" << key
      << "</text>\n";
    ++i;
  }
  int ly = 40;
  for (const auto& [outcome, color] : kColors) {
    const int lx = left + groups * (bar + gap) + 20;
    o << "<rect x=\"" << lx << "\" y=\"" << ly - 10 << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    o << "<text x=\"" << lx + 18 << "\" y=\"" << ly << "\">" << outcome << "</text>\n";
    ly += 18;
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace dgap
