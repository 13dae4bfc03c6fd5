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

#include "dgap/ahpf.hpp"

#include <algorithm>
#include <cmath>

#include "dgap/qp.hpp"

namespace dgap {

namespace {

constexpr double kCoincident = 1e-9;

const BezierSide& side_curve(const NavigableGap& g, Side side) { return side == Side::Left ? g.left : g.right; }

Vec2 checked_offset(const Vec2& p, const Vec2& c) {
  const Vec2 d = p - c;
  if (d.norm() <= kCoincident) throw Singularity("harmonic field evaluated at a center");
  return d;
}

Vec2 cap_inward_normal(const NavigableGap& g) {
  const Vec2 e = g.left.p1 - g.right.p1;
  Vec2 n = Vec2(-e.y(), e.x()).normalized();
  const Vec2 mid = 0.5 * (g.left.p1 + g.right.p1);
  const double probe = 1e-4 * std::max(1.0, e.norm());
  if (!g.contains(mid + probe * n) && g.contains(mid - probe * n)) n = -n;
  return n;
}

void append_cap_samples(const NavigableGap& g, int count, std::vector<BoundarySample>* out) {
  const Vec2 e = g.left.p1 - g.right.p1;
  if (e.norm() <= 1e-9 || count <= 0) return;
  const Vec2 n = cap_inward_normal(g);
  for (int j = 0; j < count; ++j) {
    const double f = (j + 0.5) / count;
    out->push_back({g.right.p1 + f * e, n, BoundaryPart::Cap, f});
  }
}

int cap_sample_count(const NavigableGap& g, int n) {
  const double cap = (g.left.p1 - g.right.p1).norm();
  const double spacing = std::max(0.5 * (g.left.length() + g.right.length()) / (n - 1), 1e-6);
  return std::max(2, static_cast<int>(std::ceil(cap / spacing)));
}

}  // namespace

Vec2 side_inward_normal(const NavigableGap& navgap, Side side, double u) {
  const BezierSide& b = side_curve(navgap, side);
  Vec2 t = b.tangent(u);
  if (t.norm() <= 1e-12) t = b.p1 - b.origin;
  if (t.norm() <= 1e-12) throw SynthesisFailure("side_inward_normal: degenerate side");
  t.normalize();
  // The outline runs O -> right side -> cap -> left side back to O (counterclockwise).
  Vec2 n = side == Side::Right ? Vec2(-t.y(), t.x()) : Vec2(t.y(), -t.x());
  const Vec2 p = b.point(u);
  const double probe = 1e-4 * std::max(1.0, b.p1.norm());
  if (!navgap.contains(p + probe * n) && navgap.contains(p - probe * n)) n = -n;
  return n;
}

BoundaryDiscretization discretize_boundary(const NavigableGap& navgap, int n, const AhpfConfig& config) {
  if (n < 10) throw InvalidInput("discretize_boundary: need at least ten centers per side");
  BoundaryDiscretization out;
  for (Side side : {Side::Left, Side::Right}) {
    const BezierSide& b = side_curve(navgap, side);
    const BoundaryPart part = side == Side::Left ? BoundaryPart::Left : BoundaryPart::Right;
    if (b.length() <= 1e-9) {
      out.centers.push_back(b.p1);
      continue;
    }
    for (int j = 0; j < n; ++j) {
      const double u = static_cast<double>(j) / (n - 1);
      const double step = b.tangent(u).norm() / (n - 1);
      out.centers.push_back(b.point(u) - config.center_offset * step * side_inward_normal(navgap, side, u));
    }
    for (int j = 0; j + 1 < n; ++j) {
      const double u = (j + 0.5) / (n - 1);
      out.samples.push_back({b.point(u), side_inward_normal(navgap, side, u), part, u});
    }
    out.samples.push_back({b.origin, side_inward_normal(navgap, side, 0.0), BoundaryPart::Corner, 0.0});
  }
  append_cap_samples(navgap, cap_sample_count(navgap, n), &out.samples);
  return out;
}

std::vector<BoundarySample> fine_boundary_samples(const NavigableGap& navgap, int n, int factor) {
  std::vector<BoundarySample> out;
  const int k = factor * (n - 1);
  for (Side side : {Side::Left, Side::Right}) {
    const BezierSide& b = side_curve(navgap, side);
    if (b.length() <= 1e-9) continue;
    const BoundaryPart part = side == Side::Left ? BoundaryPart::Left : BoundaryPart::Right;
    for (int j = 0; j < k; ++j) {
      const double u = (j + 0.5) / k;
      out.push_back({b.point(u), side_inward_normal(navgap, side, u), part, u});
    }
  }
  append_cap_samples(navgap, factor * cap_sample_count(navgap, n), &out);
  return out;
}

double potential(const Vec2& p, const HarmonicField& field) {
  double phi = 0.0;
  for (std::size_t k = 0; k < field.centers.size(); ++k) {
    phi += field.weights(static_cast<Eigen::Index>(k)) * std::log(checked_offset(p, field.centers[k]).norm());
  }
  return phi;
}

Vec2 gradient(const Vec2& p, const HarmonicField& field) {
  Vec2 g = Vec2::Zero();
  for (std::size_t k = 0; k < field.centers.size(); ++k) {
    const Vec2 d = checked_offset(p, field.centers[k]);
    g += field.weights(static_cast<Eigen::Index>(k)) * d / d.squaredNorm();
  }
  return g;
}

Eigen::Matrix2d hessian(const Vec2& p, const HarmonicField& field) {
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  for (std::size_t k = 0; k < field.centers.size(); ++k) {
    const Vec2 d = checked_offset(p, field.centers[k]);
    const double r2 = d.squaredNorm();
    h += field.weights(static_cast<Eigen::Index>(k)) *
         (Eigen::Matrix2d::Identity() * r2 - 2.0 * d * d.transpose()) / (r2 * r2);
  }
  return h;
}

double inward_flow(const HarmonicField& field, const BoundarySample& s) { return -gradient(s.p, field).dot(s.n); }

Eigen::VectorXd solve_weights(const std::vector<Vec2>& centers, const std::vector<BoundarySample>& samples,
                              const Vec2& goal, const AhpfConfig& config) {
  const auto k = static_cast<Eigen::Index>(centers.size());
  const auto m = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(m, k);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const BoundarySample& s = samples[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < k; ++j) {
      const Vec2 d = checked_offset(s.p, centers[static_cast<std::size_t>(j)]);
      a(i, j) = -(d / d.squaredNorm()).dot(s.n);
    }
    const Vec2 d0 = checked_offset(s.p, goal);
    b(i) = config.flow_margin + config.goal_weight * (d0 / d0.squaredNorm()).dot(s.n);
  }

  // The flow rows are tightened slightly so solver round-off cannot push the
  // verified residual below -residual_tolerance; harder problems get more slack.
  const auto solve = [&](bool sign_constrained, double tighten) {
    const Eigen::Index rows = sign_constrained ? m + k : m;
    Eigen::MatrixXd g(rows, k);
    Eigen::VectorXd h(rows);
    g.topRows(m) = a;
    h.head(m) = b.array() + tighten;
    if (sign_constrained) {
      g.bottomRows(k) = -Eigen::MatrixXd::Identity(k, k);
      h.tail(k).setZero();
    }
    LdpResult res = solve_ldp(g, h);
    if (res.feasible && sign_constrained) res.x = res.x.cwiseMin(0.0);
    return res;
  };

  bool infeasible = true;
  for (bool signs : {true, false}) {
    if (signs && !config.sign_constrained) continue;
    if (!signs && config.sign_constrained && !config.allow_mixed_signs) continue;
    for (double tighten : {1e-7, 1e-5, 1e-3}) {
      const LdpResult res = solve(signs, tighten);
      if (!res.feasible) break;
      infeasible = false;
      if ((a * res.x - b).minCoeff() >= -config.residual_tolerance) {
        Eigen::VectorXd w(k + 1);
        w(0) = config.goal_weight;
        w.tail(k) = res.x;
        return w;
      }
    }
  }
  if (infeasible) throw SynthesisFailure("solve_weights: no weights satisfy the inward-flow constraints");
  throw NumericalFailure("solve_weights: solution violates a constraint beyond tolerance");
}

Vec2 velocity_command(const Vec2& p, const HarmonicField& field) {
  const Vec2 d0 = p - field.goal;
  const double r2 = d0.squaredNorm();
  if (r2 <= 1e-24) return Vec2::Zero();
  // The goal term is written out so the prefactor cancels its singularity.
  Vec2 raw = -field.weights(0) * d0;
  for (std::size_t k = 1; k < field.centers.size(); ++k) {
    const Vec2 d = checked_offset(p, field.centers[k]);
    raw -= r2 * field.weights(static_cast<Eigen::Index>(k)) * d / d.squaredNorm();
  }
  Vec2 u = field.gain * raw;
  const double norm = u.norm();
  if (norm > field.v_max) u *= field.v_max / norm;
  return u;
}

HarmonicField synthesize_field(const NavigableGap& navgap, const AhpfConfig& config) {
  const BoundaryDiscretization disc = discretize_boundary(navgap, config.centers_per_side, config);
  HarmonicField field;
  field.goal = navgap.goal;
  field.centers.reserve(disc.centers.size() + 1);
  field.centers.push_back(navgap.goal);
  field.centers.insert(field.centers.end(), disc.centers.begin(), disc.centers.end());
  field.weights = solve_weights(disc.centers, disc.samples, navgap.goal, config);
  field.samples = disc.samples;
  field.gain = config.gain;
  field.v_max = config.v_max;
  return field;
}

}  // namespace dgap
