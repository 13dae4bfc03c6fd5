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

#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "dgap/ahpf.hpp"
#include "dgap/navigable_gap.hpp"

namespace dgap::cli {
namespace {

Vec2 vec_of(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

Pose2 pose_of(const Json& j) { return {vec_of(j.at("position")), j.at("yaw").get<double>()}; }

Vec2 to_world(const Pose2& pose, const Vec2& p) { return pose.position + rotate(p, pose.yaw); }

PlannerConfig planner_of(const TraceFile& trace) {
  PlannerConfig cfg;
  const Json& config = trace.header.at("config");
  if (config.contains("planner")) planner_config_from_json(config.at("planner"), &cfg);
  return cfg;
}

BezierSide side_of(const Json& j, bool printed_basis) {
  BezierSide s;
  s.origin = vec_of(j.at("origin"));
  s.p0 = vec_of(j.at("p0"));
  s.p1 = vec_of(j.at("p1"));
  s.w0 = j.at("w0").get<double>();
  s.printed_basis = printed_basis;
  return s;
}

NavigableGap region_of(const Json& candidate, const PlannerConfig& cfg) {
  NavigableGap g;
  g.left = side_of(candidate.at("left_side"), cfg.navgap.printed_basis);
  g.right = side_of(candidate.at("right_side"), cfg.navgap.printed_basis);
  g.goal = vec_of(candidate.at("goal"));
  g.polygon_samples = cfg.navgap.polygon_samples;
  g.refresh_outline();
  return g;
}

const Json& record_at(const TraceFile& trace, std::size_t step) {
  if (step >= trace.records.size()) {
    throw InvalidInput("step " + std::to_string(step) + " is out of range (trace has " +
                       std::to_string(trace.records.size()) + " steps)");
  }
  return trace.records[step];
}

// Accumulates SVG elements in world coordinates and fits the view at the end.
class Canvas {
 public:
  void include(const Vec2& p) {
    lo_ = lo_.cwiseMin(p);
    hi_ = hi_.cwiseMax(p);
  }

  void polyline(const std::vector<Vec2>& pts, const std::string& style) {
    if (pts.size() < 2) return;
    for (const auto& p : pts) include(p);
    body_ << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& p : pts) body_ << num(p.x()) << ',' << num(-p.y()) << ' ';
    body_ << "\"/>\n";
  }

  void circle(const Vec2& c, double r, const std::string& style) {
    include(c - Vec2(r, r));
    include(c + Vec2(r, r));
    body_ << "<circle cx=\"" << num(c.x()) << "\" cy=\"" << num(-c.y()) << "\" r=\"" << num(r) << "\" " << style
          << "/>\n";
  }

  void text(const Vec2& p, const std::string& s) {
    body_ << "<text x=\"" << num(p.x()) << "\" y=\"" << num(-p.y()) << "\" font-size=\"0.25\">" << s << "</text>\n";
  }

  [[nodiscard]] std::string finish(const std::string& title) const {
    const double pad = 0.5;
    const Vec2 lo = lo_ - Vec2(pad, pad);
    const Vec2 size = hi_ - lo_ + Vec2(2 * pad, 2 * pad);
    const double px = 800.0 / std::max(size.x(), 1e-6);
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"" << num(std::max(size.y() * px, 100.0))
      << "\" viewBox=\"" << num(lo.x()) << ' ' << num(-(lo.y() + size.y())) << ' ' << num(size.x()) << ' '
      << num(size.y()) << "\" font-family=\"sans-serif\" stroke-width=\"0.03\">\n"
      << "<title>" << title << "</title>\n"
      << body_.str() << "</svg>\n";
    return o.str();
  }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
  }

 private:
  Vec2 lo_{Vec2::Constant(std::numeric_limits<double>::infinity())};
  Vec2 hi_{Vec2::Constant(-std::numeric_limits<double>::infinity())};
  std::ostringstream body_;
};

std::vector<Vec2> sample_side(const BezierSide& s, const Pose2& pose) {
  std::vector<Vec2> out;
  for (int i = 0; i <= 32; ++i) out.push_back(to_world(pose, s.point(i / 32.0)));
  return out;
}

}  // namespace

std::size_t default_step(const TraceFile& trace) {
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    if (!trace.records[i].at("candidates").empty()) return i;
  }
  return 0;
}

std::string render_step_svg(const TraceFile& trace, std::size_t step) {
  const Json& rec = record_at(trace, step);
  const PlannerConfig cfg = planner_of(trace);
  const PlannerInput input = input_from_json(rec.at("input"));
  Canvas canvas;

  std::vector<Vec2> path;
  for (const auto& r : trace.records) path.push_back(vec_of(r.at("input").at("pose").at("position")));
  canvas.polyline(path, "stroke=\"#888888\"");
  canvas.circle(input.waypoint, 0.12, "fill=\"none\" stroke=\"#000000\"");

  const EgoCircle& scan = input.scan;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (scan.is_free(i)) continue;
    canvas.circle(to_world(input.pose, scan.point(i)), 0.02, "fill=\"#333333\"");
  }
  for (const auto& a : input.agents) {
    canvas.circle(a.position, a.radius, "fill=\"#f4b6b6\" stroke=\"#c0392b\"");
    canvas.polyline({a.position, a.position + a.velocity}, "stroke=\"#c0392b\"");
  }

  // Gaps: an arc at the nearer end-point range, from the right to the left bearing.
  for (const auto& g : rec.at("gaps")) {
    const double br = g.at("right").at("bearing").get<double>();
    const double bl = g.at("left").at("bearing").get<double>();
    const double rr = g.at("right").at("range").get<double>();
    const double rl = g.at("left").at("range").get<double>();
    const double r = std::min(rl, rr);
    const double sweep = ccw_angle(br, bl);
    std::vector<Vec2> arc;
    for (int i = 0; i <= 24; ++i) arc.push_back(to_world(input.pose, polar(br + sweep * i / 24.0, r)));
    const bool feasible = g.at("feasible").get<bool>();
    canvas.polyline(arc, feasible ? "stroke=\"#2e86c1\"" : "stroke=\"#aab7b8\" stroke-dasharray=\"0.1,0.1\"");
    canvas.circle(to_world(input.pose, polar(bl, rl)), 0.06, "fill=\"#1b4f72\"");
    canvas.circle(to_world(input.pose, polar(br, rr)), 0.06, "fill=\"#1b4f72\"");
  }

  const Json& decision = rec.at("decision");
  const int adopted = decision.at("kind") == "switch" ? decision.at("gap").get<int>() : -2;
  for (const auto& c : rec.at("candidates")) {
    const Pose2 pose = pose_of(c.at("pose"));
    const bool chosen = c.at("gap").get<int>() == adopted;
    const std::string dash = chosen ? "" : " stroke-dasharray=\"0.12,0.08\"";
    const NavigableGap region = region_of(c, cfg);
    canvas.polyline(sample_side(region.left, pose), "stroke=\"#27ae60\"" + dash);
    canvas.polyline(sample_side(region.right, pose), "stroke=\"#27ae60\"" + dash);
    canvas.polyline({to_world(pose, region.right.p1), to_world(pose, region.left.p1)}, "stroke=\"#27ae60\"" + dash);
    canvas.circle(to_world(pose, region.goal), 0.08, "fill=\"#27ae60\"");
    std::vector<Vec2> traj;
    for (const auto& q : c.at("trajectory")) traj.emplace_back(q.at(1).get<double>(), q.at(2).get<double>());
    canvas.polyline(traj, (chosen ? "stroke=\"#8e44ad\" stroke-width=\"0.05\"" : "stroke=\"#bb8fce\"") + dash);
  }

  canvas.circle(input.pose.position, cfg.r_infl, "fill=\"none\" stroke=\"#000000\"");
  canvas.polyline({input.pose.position, to_world(input.pose, Vec2(cfg.r_infl, 0))}, "stroke=\"#000000\"");
  canvas.text(input.pose.position + Vec2(-cfg.r_infl, cfg.r_infl + 0.15),
              "t=" + Canvas::num(rec.at("t").get<double>()) + " " + decision.at("kind").get<std::string>());
  return canvas.finish("step " + std::to_string(step));
}

Json field_grid(const TraceFile& trace, std::size_t step, std::optional<std::size_t> candidate, int cells) {
  if (cells < 2) throw InvalidInput("field grid needs at least 2 cells");
  const Json& rec = record_at(trace, step);
  const Json& candidates = rec.at("candidates");
  if (candidates.empty()) throw InvalidInput("step " + std::to_string(step) + " has no candidate fields");
  std::size_t index = candidate.value_or(0);
  if (!candidate) {
    const Json& decision = rec.at("decision");
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (decision.at("kind") == "switch" && candidates[i].at("gap") == decision.at("gap")) index = i;
    }
  }
  if (index >= candidates.size()) {
    throw InvalidInput("candidate " + std::to_string(index) + " is out of range (step has " +
                       std::to_string(candidates.size()) + ")");
  }
  const Json& c = candidates[index];
  const PlannerConfig cfg = planner_of(trace);
  const HarmonicField field = field_from_json(c.at("field"), cfg.ahpf.gain, cfg.v_max);
  const NavigableGap region = region_of(c, cfg);

  Vec2 lo = field.goal;
  Vec2 hi = field.goal;
  for (const auto& p : region.outline) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double h = (hi - lo).maxCoeff() / cells;
  const auto first = [&](double lo_v, double g) { return static_cast<int>(std::floor((lo_v - g) / h)); };
  const auto last = [&](double hi_v, double g) { return static_cast<int>(std::ceil((hi_v - g) / h)); };
  const int i0 = first(lo.x(), field.goal.x()), i1 = last(hi.x(), field.goal.x());
  const int j0 = first(lo.y(), field.goal.y()), j1 = last(hi.y(), field.goal.y());

  Json xs = Json::array(), ys = Json::array(), phi = Json::array(), u = Json::array(), inside = Json::array();
  for (int i = i0; i <= i1; ++i) xs.push_back(field.goal.x() + i * h);
  for (int j = j0; j <= j1; ++j) ys.push_back(field.goal.y() + j * h);
  for (int j = j0; j <= j1; ++j) {
    Json phi_row = Json::array(), u_row = Json::array(), in_row = Json::array();
    for (int i = i0; i <= i1; ++i) {
      const Vec2 p(field.goal.x() + i * h, field.goal.y() + j * h);
      try {
        const double v = potential(p, field);
        phi_row.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
      } catch (const Singularity&) {
        phi_row.push_back(nullptr);
      }
      try {
        const Vec2 cmd = velocity_command(p, field);
        u_row.push_back(Json::array({cmd.x(), cmd.y()}));
      } catch (const Singularity&) {
        u_row.push_back(nullptr);
      }
      in_row.push_back(region.contains(p));
    }
    phi.push_back(phi_row);
    u.push_back(u_row);
    inside.push_back(in_row);
  }
  return {{"step", step},
          {"t", rec.at("t")},
          {"candidate", index},
          {"gap", c.at("gap")},
          {"frame", "robot"},
          {"pose", c.at("pose")},
          {"goal", Json::array({field.goal.x(), field.goal.y()})},
          {"spacing", h},
          {"goal_cell", Json::array({-i0, -j0})},
          {"x", xs},
          {"y", ys},
          {"phi", phi},
          {"u", u},
          {"inside", inside}};
}

}  // namespace dgap::cli
