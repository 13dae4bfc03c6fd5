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

#include "dgap/egocircle.hpp"

#include <algorithm>
#include <optional>

namespace dgap {

double EgoCircle::increment() const {
  if (ranges.size() < 2) return 0.0;
  return (angle_max - angle_min) / static_cast<double>(ranges.size() - 1);
}

double EgoCircle::angle(std::size_t i) const {
  return angle_min + static_cast<double>(i) * increment();
}

bool EgoCircle::full_circle() const {
  return ranges.size() >= 2 && (angle_max - angle_min) + increment() >= kTwoPi - 1e-9;
}

bool EgoCircle::is_free(std::size_t i, double tol) const {
  return ranges[i] >= max_range - tol;
}

int EgoCircle::beam_at(double bearing) const {
  const double inc = increment();
  if (inc <= 0.0) return -1;
  const auto n = static_cast<int>(ranges.size());
  double d = ccw_angle(angle_min, bearing);
  if (full_circle()) {
    return static_cast<int>(std::lround(d / inc)) % n;
  }
  if (d > kTwoPi - 0.5 * inc) d -= kTwoPi;
  const double span = angle_max - angle_min;
  if (d < -0.5 * inc || d > span + 0.5 * inc) return -1;
  return std::clamp(static_cast<int>(std::lround(d / inc)), 0, n - 1);
}

void EgoCircle::validate() const {
  if (ranges.empty()) throw InvalidInput("egocircle: empty scan");
  if (ranges.size() < 2) throw InvalidInput("egocircle: at least two beams are required");
  if (!(angle_max > angle_min)) throw InvalidInput("egocircle: angle_max must exceed angle_min");
  if (!(max_range > 0.0)) throw InvalidInput("egocircle: max_range must be positive");
  if ((angle_max - angle_min) + increment() > kTwoPi + 1e-6) {
    throw InvalidInput("egocircle: field of view exceeds a full turn");
  }
  for (double r : ranges) {
    if (!(r > 0.0) || r > max_range + 1e-9) {
      throw InvalidInput("egocircle: range outside (0, max_range]");
    }
  }
}

EgoCircle EgoCircle::make(double fov, std::size_t n_beams, double max_range) {
  if (n_beams < 2) throw InvalidInput("egocircle: at least two beams are required");
  EgoCircle scan;
  scan.ranges.assign(n_beams, max_range);
  scan.max_range = max_range;
  if (fov >= kTwoPi - 1e-9) {
    scan.angle_min = -kPi;
    scan.angle_max = kPi - kTwoPi / static_cast<double>(n_beams);
  } else {
    scan.angle_min = -0.5 * fov;
    scan.angle_max = 0.5 * fov;
  }
  return scan;
}

int Gap::beam_span(const EgoCircle& scan) const {
  const auto n = static_cast<int>(scan.size());
  int d = left.index - right.index;
  if (scan.full_circle()) d = ((d % n) + n) % n;
  return d;
}

double minimum_gap_width(double r_infl, double near_range) {
  if (near_range <= r_infl) return kPi;
  return 2.0 * std::asin(r_infl / near_range);
}

namespace {

// Beam-index span [start, start + len], indices taken modulo n on full scans.
struct Span {
  int start;
  int len;
};

int wrap_index(int i, int n) { return ((i % n) + n) % n; }

Gap make_gap(const EgoCircle& scan, int right, int left, GapKind kind) {
  return {GapPoint::from_beam(scan, left), GapPoint::from_beam(scan, right), kind};
}

}  // namespace

std::vector<Gap> detect_raw_gaps(const EgoCircle& scan, double radial_jump_threshold) {
  scan.validate();
  if (!(radial_jump_threshold > 0.0)) {
    throw InvalidInput("detect_raw_gaps: radial_jump_threshold must be positive");
  }
  const auto n = static_cast<int>(scan.size());
  const bool full = scan.full_circle();
  std::vector<Gap> gaps;

  std::vector<char> free(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) free[static_cast<std::size_t>(i)] = scan.is_free(static_cast<std::size_t>(i));
  const auto is_free = [&](int i) { return free[static_cast<std::size_t>(wrap_index(i, n))] != 0; };

  if (std::all_of(free.begin(), free.end(), [](char f) { return f != 0; })) {
    gaps.push_back(make_gap(scan, 0, n - 1, GapKind::Swept));
    return gaps;
  }

  // Swept runs. On full scans start from an occupied beam so a run crossing the seam stays whole.
  int origin = 0;
  if (full) {
    while (is_free(origin)) ++origin;
  }
  for (int k = 0; k < n;) {
    const int i = full ? origin + k : k;
    if (!is_free(i)) {
      ++k;
      continue;
    }
    int len = 0;
    while (k + len < n && is_free(i + len)) ++len;
    const int first = i;
    const int last = i + len - 1;
    int right = first - 1;
    int left = last + 1;
    if (full) {
      right = wrap_index(right, n);
      left = wrap_index(left, n);
    } else {
      right = std::max(right, 0);
      left = std::min(left, n - 1);
    }
    gaps.push_back(make_gap(scan, right, left, GapKind::Swept));
    k += len;
  }

  // Radial discontinuities between two occupied neighbours.
  const int pairs = full ? n : n - 1;
  for (int i = 0; i < pairs; ++i) {
    const int j = wrap_index(i + 1, n);
    if (is_free(i) || is_free(j)) continue;
    const double jump = std::abs(scan.ranges[static_cast<std::size_t>(j)] -
                                 scan.ranges[static_cast<std::size_t>(i)]);
    if (jump >= radial_jump_threshold) gaps.push_back(make_gap(scan, i, j, GapKind::Radial));
  }

  std::stable_sort(gaps.begin(), gaps.end(),
                   [](const Gap& a, const Gap& b) { return a.right.index < b.right.index; });
  return gaps;
}

std::vector<Gap> simplify_gaps(const EgoCircle& scan, std::vector<Gap> raw,
                               const SimplifyConfig& config) {
  if (raw.empty()) return raw;
  const auto n = static_cast<int>(scan.size());
  const bool full = scan.full_circle();

  const auto span_of = [&](const Gap& g) { return Span{g.right.index, g.beam_span(scan)}; };
  const auto range_at = [&](int i) { return scan.ranges[static_cast<std::size_t>(wrap_index(i, n))]; };
  // Forward (counterclockwise) beam distance from a to b; negative means "not ahead" on partial scans.
  const auto ahead = [&](int a, int b) { return full ? wrap_index(b - a, n) : b - a; };

  // A merged span may not hide an obstacle nearer than both of its end points.
  const auto unobstructed = [&](const Span& s) {
    const double floor = std::min(range_at(s.start), range_at(s.start + s.len)) - 1e-9;
    for (int k = 1; k < s.len; ++k) {
      if (range_at(s.start + k) < floor) return false;
    }
    return true;
  };

  std::vector<Gap> swept;
  std::vector<Gap> radial;
  for (auto& g : raw) (g.kind == GapKind::Swept ? swept : radial).push_back(g);

  bool changed = true;
  while (changed && !radial.empty()) {
    changed = false;
    for (auto it = radial.begin(); it != radial.end();) {
      const Span r = span_of(*it);
      bool absorbed = false;
      for (auto& s_gap : swept) {
        const Span s = span_of(s_gap);
        std::optional<Span> merged;
        const int before = ahead(r.start + r.len, s.start);  // radial lies clockwise of swept
        const int after = ahead(s.start + s.len, r.start);   // radial lies counterclockwise of swept
        const int inside = ahead(s.start, r.start);
        if (inside >= 0 && inside + r.len <= s.len) {
          merged = s;
        } else if (before >= 0 && before <= config.merge_tolerance) {
          merged = Span{r.start, r.len + before + s.len};
        } else if (after >= 0 && after <= config.merge_tolerance) {
          merged = Span{s.start, s.len + after + r.len};
        }
        if (!merged || merged->len >= n || !unobstructed(*merged)) continue;
        s_gap = make_gap(scan, wrap_index(merged->start, n), wrap_index(merged->start + merged->len, n),
                         GapKind::Swept);
        absorbed = true;
        break;
      }
      if (absorbed) {
        it = radial.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }

  std::vector<Gap> out = std::move(swept);
  out.insert(out.end(), radial.begin(), radial.end());
  if (config.drop_narrow) {
    std::erase_if(out, [&](const Gap& g) {
      const double near = std::min(g.left.range, g.right.range);
      return g.angular_width() < minimum_gap_width(config.r_infl, near);
    });
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Gap& a, const Gap& b) { return a.right.index < b.right.index; });
  return out;
}

}  // namespace dgap
