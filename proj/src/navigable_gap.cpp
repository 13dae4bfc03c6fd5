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

#include "dgap/navigable_gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dgap {

namespace {

double bearing_of(const Vec2& p) { return std::atan2(p.y(), p.x()); }

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross(b - a, c - a);
  const double scale = std::max({(b - a).squaredNorm(), (c - a).squaredNorm(), 1e-300});
  if (std::abs(v) <= 1e-14 * scale) return 0;
  return v > 0.0 ? 1 : -1;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return p.x() <= std::max(a.x(), b.x()) + 1e-15 && p.x() >= std::min(a.x(), b.x()) - 1e-15 &&
         p.y() <= std::max(a.y(), b.y()) + 1e-15 && p.y() >= std::min(a.y(), b.y()) - 1e-15;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// True when no two non-adjacent edges of the closed polyline touch.
bool polygon_is_simple(const std::vector<Vec2>& poly) {
  std::vector<Vec2> v;
  for (const Vec2& p : poly) {
    if (v.empty() || (p - v.back()).norm() > 1e-12) v.push_back(p);
  }
  while (v.size() > 1 && (v.front() - v.back()).norm() <= 1e-12) v.pop_back();
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a, b, v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

// Ray from the origin along `bearing` against segment [a, b]; nullopt-like flag on miss.
bool ray_segment(double bearing, const Vec2& a, const Vec2& b, Vec2* hit) {
  const Vec2 d = unit_bearing(bearing);
  const Vec2 e = b - a;
  const double den = cross(d, e);
  if (std::abs(den) < 1e-14) return false;
  const double t = cross(a, e) / den;
  const double s = cross(a, d) / den;
  if (t < 0.0 || s < -1e-12 || s > 1.0 + 1e-12) return false;
  *hit = t * d;
  return true;
}

}  // namespace

Vec2 inflate_point(const Vec2& p, Side side, double r_infl, double scale) {
  const double range = p.norm();
  if (range <= 1e-9) throw Singularity("inflate_point: point at the origin");
  const double dtheta = scale * r_infl / range;
  const double theta = bearing_of(p) + (side == Side::Left ? -dtheta : dtheta);
  return polar(theta, range + 2.0 * r_infl);
}

Gap inflate_gap(const Gap& gap, double r_infl) {
  if (!(r_infl >= 0.0)) throw InvalidInput("inflate_gap: r_infl must be nonnegative");
  if (gap.left.range <= 1e-9 || gap.right.range <= 1e-9) throw Singularity("inflate_gap: side at the origin");
  const double dl = r_infl / gap.left.range;
  const double dr = r_infl / gap.right.range;
  if (gap.angular_width() <= dl + dr) throw SynthesisFailure("inflate_gap: gap too narrow to inflate");
  Gap out = gap;
  out.left = GapPoint::from_polar(gap.left.index, wrap_angle(gap.left.bearing - dl), gap.left.range + 2.0 * r_infl);
  out.right =
      GapPoint::from_polar(gap.right.index, wrap_angle(gap.right.bearing + dr), gap.right.range + 2.0 * r_infl);
  return out;
}

Vec2 BezierSide::point(double u) const {
  const double a = printed_basis ? 1.0 - u * u : (1.0 - u) * (1.0 - u);
  return a * origin + 2.0 * u * (1.0 - u) * control() + u * u * p1;
}

Vec2 BezierSide::tangent(double u) const {
  const Vec2 c = control();
  if (printed_basis) return -2.0 * u * origin + (2.0 - 4.0 * u) * c + 2.0 * u * p1;
  return 2.0 * (1.0 - u) * (c - origin) + 2.0 * u * (p1 - c);
}

double BezierSide::length(int samples) const {
  double total = 0.0;
  Vec2 prev = point(0.0);
  for (int i = 1; i <= samples; ++i) {
    const Vec2 q = point(static_cast<double>(i) / samples);
    total += (q - prev).norm();
    prev = q;
  }
  return total;
}

std::vector<Vec2> NavigableGap::polygon() const {
  const int n = std::max(2, polygon_samples);
  std::vector<Vec2> poly;
  poly.reserve(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) poly.push_back(right.point(static_cast<double>(i) / (n - 1)));
  for (int i = n - 1; i >= 1; --i) poly.push_back(left.point(static_cast<double>(i) / (n - 1)));
  return poly;
}

bool NavigableGap::contains(const Vec2& p) const {
  return outline.empty() ? polygon_contains(polygon(), p) : polygon_contains(outline, p);
}

double NavigableGap::boundary_distance(const Vec2& p) const {
  return outline.empty() ? polygon_boundary_distance(polygon(), p) : polygon_boundary_distance(outline, p);
}

double NavigableGap::terminal_bearing_right() const { return bearing_of(right.p1); }
double NavigableGap::terminal_bearing_left() const { return bearing_of(left.p1); }

bool polygon_contains(const std::vector<Vec2>& poly, const Vec2& p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double segment_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({segment_distance(c, d, a), segment_distance(c, d, b), segment_distance(a, b, c),
                   segment_distance(a, b, d)});
}

double polygon_boundary_distance(const std::vector<Vec2>& poly, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, segment_distance(poly[i], poly[(i + 1) % n], p));
  return best;
}

double side_weight(const Vec2& gap_only_velocity, double v_max, double w0_min) {
  if (!(v_max > 0.0)) throw InvalidInput("side_weight: v_max must be positive");
  return std::clamp(gap_only_velocity.norm() / v_max, w0_min, 1.0);
}

double track_clearance(const NavigableGap& navgap) {
  const std::vector<Vec2> poly = navgap.outline.empty() ? navgap.polygon() : navgap.outline;
  double best = std::numeric_limits<double>::infinity();
  for (const SideMotion* s : {&navgap.track_left, &navgap.track_right}) {
    const Vec2 a = s->position;
    const Vec2 b = s->position + s->velocity * navgap.horizon;
    if (polygon_contains(poly, a)) return 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      best = std::min(best, segment_segment_distance(a, b, poly[i], poly[(i + 1) % poly.size()]));
      if (best == 0.0) return 0.0;
    }
  }
  return best;
}

Vec2 place_goal(const NavigableGap& navgap, const PropagationResult& prop, const Vec2& waypoint,
                const NavGapConfig& config) {
  if (prop.event == TerminalEvent::Closed || prop.event == TerminalEvent::Crossed) {
    Vec2 crossing = prop.terminal_midpoint();
    if (prop.event == TerminalEvent::Crossed) {
      crossing = 0.5 * (prop.left.position + prop.right.position) +
                 0.5 * (prop.left.velocity + prop.right.velocity) * prop.t_event;
    }
    const double range = crossing.norm();
    if (range <= 1e-9) throw Singularity("place_goal: crossing point at the robot");
    return crossing * ((range + 2.0 * config.r_infl) / range);
  }

  if (navgap.contains(waypoint)) return waypoint;
  const Vec2& p1r = navgap.right.p1;
  const Vec2& p1l = navgap.left.p1;
  if ((p1l - p1r).norm() <= 1e-9) return p1r;

  const double width = ccw_angle(bearing_of(p1r), bearing_of(p1l));
  const double mr = config.r_infl / std::max(p1r.norm(), 1e-9);
  const double ml = config.r_infl / std::max(p1l.norm(), 1e-9);
  Vec2 cr = p1r;
  Vec2 cl = p1l;
  if (width > mr + ml) {
    if (!ray_segment(bearing_of(p1r) + mr, p1r, p1l, &cr)) cr = p1r;
    if (!ray_segment(bearing_of(p1l) - ml, p1r, p1l, &cl)) cl = p1l;
  } else {
    cr = cl = 0.5 * (p1r + p1l);
  }
  const Vec2 e = cl - cr;
  const double len2 = e.squaredNorm();
  if (len2 <= 1e-18) return cr;
  const double t = std::clamp((waypoint - cr).dot(e) / len2, 0.0, 1.0);
  return cr + t * e;
}

Vec2 admissible_goal(const NavigableGap& navgap, const Vec2& goal, const NavGapConfig& config) {
  const double reach = config.reach_fraction * config.v_max * navgap.horizon;
  // Walks inward along a ray; takes the first point with the full boundary margin,
  // otherwise the interior point farthest from the boundary if it keeps the minimum.
  const auto try_ray = [&](const Vec2& dir, double r_start, Vec2* out) {
    constexpr int kSteps = 200;
    if (r_start < config.goal_min_range) return false;
    double best = config.goal_min_boundary_margin;
    bool found = false;
    for (int i = 0; i <= kSteps; ++i) {
      const double r = r_start - (r_start - config.goal_min_range) * i / kSteps;
      const Vec2 p = dir * r;
      if (!navgap.contains(p)) continue;
      const double d = navgap.boundary_distance(p);
      if (d >= config.goal_boundary_margin) {
        *out = p;
        return true;
      }
      if (d > best) {
        best = d;
        *out = p;
        found = true;
      }
    }
    return found;
  };

  Vec2 out;
  const double range = goal.norm();
  if (range > 1e-9 && try_ray(goal / range, std::min(range, reach), &out)) return out;

  // Fall back to the bisector of the terminal bearings.
  const double br = navgap.terminal_bearing_right();
  const double half = 0.5 * ccw_angle(br, navgap.terminal_bearing_left());
  const Vec2 mid = 0.5 * (navgap.left.p1 + navgap.right.p1);
  const Vec2 dir = unit_bearing(br + half);
  if (try_ray(dir, std::min(std::max(mid.norm(), config.goal_min_range), reach), &out)) return out;

  // Thin regions with curved sides can miss both rays; scan the opening at the robot
  // and keep the candidate farthest from the boundary.
  constexpr int kRays = 32;
  const double start = bearing_of(navgap.right.p0);
  const double opening = ccw_angle(start, bearing_of(navgap.left.p0));
  double best = -1.0;
  for (int i = 1; i < kRays; ++i) {
    Vec2 p;
    if (!try_ray(unit_bearing(start + opening * i / kRays), reach, &p)) continue;
    const double d = navgap.boundary_distance(p);
    if (d > best) {
      best = d;
      out = p;
    }
  }
  if (best >= 0.0) return out;
  throw SynthesisFailure("admissible_goal: no interior goal within the reach budget");
}

namespace {

// Most inward bearing (relative to `axis`) from which a ray stays `clearance` away
// from every point of the side track over [0, horizon].
bool safe_ray_bearing(const SideMotion& s, Side side, const Vec2& axis, double horizon, double clearance,
                      double* out) {
  constexpr int kSamples = 256;
  const double spacing = s.velocity.norm() * horizon / kSamples;
  const double r_eff = clearance + spacing;
  double worst = side == Side::Left ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSamples; ++i) {
    const Vec2 q = s.position + s.velocity * (horizon * i / kSamples);
    const double d = q.norm();
    if (d <= r_eff) return false;
    const double a = std::atan2(cross(axis, q), axis.dot(q));
    const double margin = std::asin(r_eff / d);
    worst = side == Side::Left ? std::min(worst, a - margin) : std::max(worst, a + margin);
  }
  *out = worst;
  return true;
}

// Gap angle after moving both sides linearly from (l0, r0) to (l1, r1), unwrapped
// so that an expansion past pi is not mistaken for a crossing.
double swept_gap_angle(const Vec2& l0, const Vec2& r0, const Vec2& l1, const Vec2& r1) {
  constexpr int kSteps = 64;
  double total = clockwise_gap_angle(l0, r0);
  double prev = total;
  for (int i = 1; i <= kSteps; ++i) {
    const double f = static_cast<double>(i) / kSteps;
    const double a = clockwise_gap_angle(l0 + f * (l1 - l0), r0 + f * (r1 - r0));
    total += wrap_angle(a - prev);
    prev = a;
  }
  return total;
}

NavigableGap make_region(const PropagationResult& prop, const NavGapConfig& config, const BezierSide& left,
                         const BezierSide& right, double scale) {
  NavigableGap g;
  g.left = left;
  g.right = right;
  g.horizon = prop.t_terminal;
  g.event = prop.event;
  g.category = prop.category.gap;
  g.inflation_scale = scale;
  g.track_left = prop.left;
  g.track_right = prop.right;
  g.polygon_samples = config.polygon_samples;
  g.refresh_outline();
  return g;
}

}  // namespace

namespace {

NavigableGap build_for_horizon(const PropagationResult& prop, const Vec2& waypoint, const NavGapConfig& config) {
  const double wl = side_weight(prop.left.velocity, config.v_max, config.w0_min);
  const double wr = side_weight(prop.right.velocity, config.v_max, config.w0_min);
  const auto finish = [&](NavigableGap g) {
    if (!polygon_is_simple(g.outline)) throw SynthesisFailure("build_navigable_gap: sides intersect");
    g.goal = admissible_goal(g, place_goal(g, prop, waypoint, config), config);
    return g;
  };

  for (double scale = 1.0; scale <= config.max_inflation_scale + 1e-12; scale *= config.inflation_growth) {
    const Vec2 l0 = inflate_point(prop.left.position, Side::Left, config.r_infl, scale);
    const Vec2 r0 = inflate_point(prop.right.position, Side::Right, config.r_infl, scale);
    const double initial_angle = clockwise_gap_angle(l0, r0);
    if (!(initial_angle > config.min_corner_angle)) break;  // inflation consumed the gap
    if (initial_angle > config.max_region_angle) continue;

    Vec2 l1 = inflate_point(prop.terminal_left, Side::Left, config.r_infl, scale);
    Vec2 r1 = inflate_point(prop.terminal_right, Side::Right, config.r_infl, scale);
    const double terminal_angle = swept_gap_angle(l0, r0, l1, r1);
    if (terminal_angle > config.max_region_angle) break;
    if (terminal_angle > 0.0) {
      NavigableGap g = make_region(prop, config, BezierSide{Vec2::Zero(), l0, l1, wl, config.printed_basis},
                                   BezierSide{Vec2::Zero(), r0, r1, wr, config.printed_basis}, scale);
      if (track_clearance(g) >= config.r_infl && polygon_is_simple(g.outline)) return finish(std::move(g));
      continue;
    }
    // Inflated terminal bearings crossed: close the region in a cusp on the mean bearing.
    // The sides meet at the cusp, so it is pulled toward the robot until it clears them.
    const double mean = bearing_of(r1) + 0.5 * terminal_angle;
    const double full = 0.5 * (l1.norm() + r1.norm());
    constexpr int kCuspSteps = 20;
    for (int i = 0; i < kCuspSteps; ++i) {
      const double range = full - (full - config.goal_min_range) * i / kCuspSteps;
      const Vec2 cusp = polar(mean, range);
      NavigableGap g = make_region(prop, config, BezierSide{Vec2::Zero(), l0, cusp, wl, config.printed_basis},
                                   BezierSide{Vec2::Zero(), r0, cusp, wr, config.printed_basis}, scale);
      if (track_clearance(g) >= config.r_infl && polygon_is_simple(g.outline)) return finish(std::move(g));
    }
  }

  // Straight-sided fallback: each side runs along the most inward ray that clears its
  // whole track. Used when the curved sides cannot be certified (typically a side that
  // sweeps outward across its own starting point).
  const Vec2 axis = rotate(prop.right.position.normalized(),
                           0.5 * clockwise_gap_angle(prop.left.position, prop.right.position));
  double phi_l = 0.0;
  double phi_r = 0.0;
  if (!safe_ray_bearing(prop.left, Side::Left, axis, prop.t_terminal, config.r_infl, &phi_l) ||
      !safe_ray_bearing(prop.right, Side::Right, axis, prop.t_terminal, config.r_infl, &phi_r) ||
      !(phi_l - phi_r > std::max(config.min_corner_angle, 1e-3)) || !(phi_l - phi_r < config.max_region_angle)) {
    throw SynthesisFailure("build_navigable_gap: no inflation keeps the region clear of the gap tracks");
  }
  const double base = std::atan2(axis.y(), axis.x());
  const auto straight = [&](double phi, const Vec2& p0, const Vec2& p1, double w) {
    const double r1 = p1.norm() + 2.0 * config.r_infl;
    const double r0 = std::min(p0.norm() + 2.0 * config.r_infl, r1);
    return BezierSide{Vec2::Zero(), polar(base + phi, r0), polar(base + phi, r1), w, config.printed_basis};
  };
  NavigableGap g = make_region(prop, config, straight(phi_l, prop.left.position, prop.terminal_left, wl),
                               straight(phi_r, prop.right.position, prop.terminal_right, wr), 0.0);
  if (track_clearance(g) < config.r_infl) {
    throw SynthesisFailure("build_navigable_gap: no inflation keeps the region clear of the gap tracks");
  }
  return finish(std::move(g));
}

// Last resort: a straight wedge between the inflated start bearings, cut off
// r_infl short of the nearest point either track reaches. Everything in it is at
// least r_infl from both tracks whatever their bearings, so gaps whose sides cross
// in bearing at different ranges still get a region toward their mouth.
NavigableGap build_short_wedge(const PropagationResult& prop, const Vec2& waypoint, const NavGapConfig& config) {
  const auto nearest = [&](const SideMotion& s) {
    const double v2 = s.velocity.squaredNorm();
    const double t = v2 > 0.0 ? std::clamp(-s.position.dot(s.velocity) / v2, 0.0, prop.t_terminal) : 0.0;
    return (s.position + s.velocity * t).norm();
  };
  const double range = std::min(nearest(prop.left), nearest(prop.right)) - config.r_infl;
  const Vec2 l0 = inflate_point(prop.left.position, Side::Left, config.r_infl, 1.0);
  const Vec2 r0 = inflate_point(prop.right.position, Side::Right, config.r_infl, 1.0);
  const double angle = clockwise_gap_angle(l0, r0);
  if (!(range > config.goal_min_range) || !(angle > config.min_corner_angle) || !(angle < config.max_region_angle)) {
    throw SynthesisFailure("build_navigable_gap: no certified region for any horizon prefix");
  }
  const double br = bearing_of(r0);
  const auto straight = [&](double phi) {
    return BezierSide{Vec2::Zero(), polar(phi, 0.5 * range), polar(phi, range), 1.0, config.printed_basis};
  };
  PropagationResult cut = prop;
  cut.event = TerminalEvent::HorizonEnd;
  NavigableGap g = make_region(cut, config, straight(br + angle), straight(br), 0.0);
  if (!polygon_is_simple(g.outline)) throw SynthesisFailure("build_navigable_gap: sides intersect");
  g.goal = admissible_goal(g, place_goal(g, cut, waypoint, config), config);
  return g;
}

}  // namespace

NavigableGap build_navigable_gap(const PropagationResult& prop, const Vec2& waypoint, const NavGapConfig& config) {
  if (!(prop.t_terminal > 0.0)) throw SynthesisFailure("build_navigable_gap: gap has no usable horizon");
  try {
    return build_for_horizon(prop, waypoint, config);
  } catch (const SynthesisFailure&) {
    if (config.horizon_fractions.empty()) throw;
  }
  // Certify a shorter prefix of the horizon; the region then only promises free
  // space up to the shortened horizon and no longer targets the crossing point.
  for (double fraction : config.horizon_fractions) {
    PropagationResult cut = prop;
    cut.t_terminal = fraction * prop.t_terminal;
    cut.t_event = cut.t_terminal;
    cut.event = TerminalEvent::HorizonEnd;
    cut.terminal_left = prop.left.position + prop.left.velocity * cut.t_terminal;
    cut.terminal_right = prop.right.position + prop.right.velocity * cut.t_terminal;
    try {
      return build_for_horizon(cut, waypoint, config);
    } catch (const SynthesisFailure&) {
    }
  }
  return build_short_wedge(prop, waypoint, config);
}

}  // namespace dgap
