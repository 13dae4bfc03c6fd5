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

#include "dgap/gap_feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace dgap {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Static: return "static";
    case Category::Expanding: return "expanding";
    case Category::Shrinking: return "shrinking";
  }
  return "unknown";
}

std::string_view to_string(TerminalEvent e) {
  switch (e) {
    case TerminalEvent::HorizonEnd: return "horizon_end";
    case TerminalEvent::Crossed: return "crossed";
    case TerminalEvent::Closed: return "closed";
    case TerminalEvent::ReachableExpansion: return "reachable_expansion";
  }
  return "unknown";
}

double bearing_rate(const Vec2& p, const Vec2& v) {
  const double r2 = p.squaredNorm();
  if (r2 <= 1e-12) throw Singularity("bearing_rate: point too close to the origin");
  return (p.x() * v.y() - p.y() * v.x()) / r2;
}

Category categorize_point(Side side, double beta_dot, double eps) {
  if (std::abs(beta_dot) <= eps) return Category::Static;
  const bool opening = side == Side::Left ? beta_dot > 0.0 : beta_dot < 0.0;
  return opening ? Category::Expanding : Category::Shrinking;
}

Category categorize_gap(double beta_dot_left, double beta_dot_right, double eps) {
  const double alpha_dot = beta_dot_left - beta_dot_right;
  if (std::abs(alpha_dot) <= eps) return Category::Static;
  return alpha_dot > 0.0 ? Category::Expanding : Category::Shrinking;
}

GapCategorization categorize(const SideMotion& left, const SideMotion& right, double eps) {
  GapCategorization c;
  c.beta_dot_left = bearing_rate(left.position, left.velocity);
  c.beta_dot_right = bearing_rate(right.position, right.velocity);
  c.left = categorize_point(Side::Left, c.beta_dot_left, eps);
  c.right = categorize_point(Side::Right, c.beta_dot_right, eps);
  c.gap = categorize_gap(c.beta_dot_left, c.beta_dot_right, eps);
  return c;
}

GapCategorization categorize(const GapPointModel& left, const GapPointModel& right, const EgoMotion& ego,
                             double eps) {
  return categorize(SideMotion{left.position(), gap_only_velocity(left, ego)},
                    SideMotion{right.position(), gap_only_velocity(right, ego)}, eps);
}

double clockwise_gap_angle(const Vec2& left, const Vec2& right) {
  const double nl = left.norm();
  const double nr = right.norm();
  if (nl <= 1e-6 || nr <= 1e-6) throw Singularity("clockwise_gap_angle: point at the origin");
  const Vec2 el = left / nl;
  const Vec2 er = right / nr;
  return std::atan2(cross(er, el), er.dot(el));
}

bool check_crossing(const Vec2& prev_left, const Vec2& prev_right, const Vec2& curr_left,
                    const Vec2& curr_right, const Vec2& prev_center_bearing) {
  const double before = clockwise_gap_angle(prev_left, prev_right);
  const double after = clockwise_gap_angle(curr_left, curr_right);
  if (!(before > 0.0 && after < 0.0)) return false;
  const Vec2 el = curr_left.normalized();
  const Vec2 er = curr_right.normalized();
  return el.dot(prev_center_bearing) > 0.0 && er.dot(prev_center_bearing) > 0.0;
}

bool check_closing(const Vec2& left, const Vec2& right, double r_infl) {
  return (left - right).norm() < 2.0 * r_infl;
}

bool check_reachable(const Vec2& p, double t, double v_max) { return p.norm() < v_max * t; }

PropagationResult propagate_gap(const SideMotion& left, const SideMotion& right,
                                const PropagationConfig& config) {
  if (!(config.dt > 0.0)) throw InvalidInput("propagate_gap: dt must be positive");
  if (!(config.horizon > 0.0)) throw InvalidInput("propagate_gap: horizon must be positive");

  PropagationResult out;
  out.left = left;
  out.right = right;
  out.dt = config.dt;
  out.category = categorize(left, right, config.eps_beta);
  const bool shrinking = out.category.gap == Category::Shrinking;
  const bool left_expanding = out.category.left == Category::Expanding;
  const bool right_expanding = out.category.right == Category::Expanding;

  const auto steps = static_cast<int>(std::lround(config.horizon / config.dt));
  const auto at = [&](const SideMotion& s, int k) -> Vec2 {
    return s.position + s.velocity * (static_cast<double>(k) * config.dt);
  };
  const auto fits = [&](const Vec2& l, const Vec2& r) { return !check_closing(l, r, config.r_infl); };

  out.track_left.push_back(left.position);
  out.track_right.push_back(right.position);

  const auto finish = [&](TerminalEvent event, int terminal_step, int event_step) {
    out.event = event;
    out.track_left.resize(static_cast<std::size_t>(terminal_step) + 1);
    out.track_right.resize(static_cast<std::size_t>(terminal_step) + 1);
    out.terminal_left = out.track_left.back();
    out.terminal_right = out.track_right.back();
    out.t_terminal = static_cast<double>(terminal_step) * config.dt;
    out.t_event = static_cast<double>(event_step) * config.dt;
    return out;
  };

  if (shrinking && !fits(left.position, right.position)) return finish(TerminalEvent::Closed, 0, 0);

  int last_fit = 0;
  Vec2 prev_l = left.position;
  Vec2 prev_r = right.position;
  for (int k = 1; k <= steps; ++k) {
    const Vec2 pl = at(left, k);
    const Vec2 pr = at(right, k);
    if (pl.norm() <= 1e-6 || pr.norm() <= 1e-6) {
      throw Singularity("propagate_gap: gap point passes through the robot");
    }
    out.track_left.push_back(pl);
    out.track_right.push_back(pr);

    const double alpha_prev = clockwise_gap_angle(prev_l, prev_r);
    const Vec2 center = rotate(prev_r.normalized(), 0.5 * alpha_prev);
    const double t = static_cast<double>(k) * config.dt;

    if (shrinking && check_crossing(prev_l, prev_r, pl, pr, center)) {
      if (!fits(pl, pr)) return finish(TerminalEvent::Closed, last_fit, k);
      return finish(TerminalEvent::Crossed, k - 1, k);
    }
    if (shrinking && !fits(pl, pr)) return finish(TerminalEvent::Closed, k - 1, k);
    if ((left_expanding && check_reachable(pl, t, config.v_max)) ||
        (right_expanding && check_reachable(pr, t, config.v_max))) {
      return finish(TerminalEvent::ReachableExpansion, k, k);
    }
    if (fits(pl, pr)) last_fit = k;
    prev_l = pl;
    prev_r = pr;
  }
  return finish(TerminalEvent::HorizonEnd, steps, steps);
}

PropagationResult propagate_gap(const GapPointModel& left, const GapPointModel& right, const EgoMotion& ego,
                                const PropagationConfig& config) {
  return propagate_gap(SideMotion{left.position(), gap_only_velocity(left, ego)},
                       SideMotion{right.position(), gap_only_velocity(right, ego)}, config);
}

double hermite_peak_speed(const Vec2& p0, const Vec2& v0, const Vec2& p1, const Vec2& v1, double duration,
                          int samples) {
  double peak = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = samples == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(samples - 1);
    const double d00 = 6.0 * s * s - 6.0 * s;
    const double d10 = 3.0 * s * s - 4.0 * s + 1.0;
    const double d01 = -6.0 * s * s + 6.0 * s;
    const double d11 = 3.0 * s * s - 2.0 * s;
    const Vec2 dp_ds = d00 * p0 + d10 * duration * v0 + d01 * p1 + d11 * duration * v1;
    peak = std::max(peak, dp_ds.norm() / duration);
  }
  return peak;
}

bool feasibility_test(const Vec2& robot_position, const Vec2& robot_velocity, const PropagationResult& prop,
                      double v_max) {
  if (!(prop.t_terminal > 0.0)) return false;
  const double peak = hermite_peak_speed(robot_position, robot_velocity, prop.terminal_midpoint(),
                                         prop.midpoint_velocity(), prop.t_terminal);
  return peak <= v_max * (1.0 + 1e-6);
}

bool gap_is_feasible(const Vec2& robot_position, const Vec2& robot_velocity, const PropagationResult& prop,
                     double v_max) {
  const bool closing = prop.event == TerminalEvent::Closed || prop.event == TerminalEvent::Crossed;
  if (prop.category.gap == Category::Shrinking && closing) {
    return feasibility_test(robot_position, robot_velocity, prop, v_max);
  }
  return prop.t_terminal > 0.0;
}

}  // namespace dgap
