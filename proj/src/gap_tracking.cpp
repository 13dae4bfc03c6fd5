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

#include "dgap/gap_tracking.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "dgap/assignment.hpp"

namespace dgap {

namespace {

// Rotation by angle -omega*u, matching the frame rotation of the body over u seconds.
Eigen::Matrix2d rotation_block(double c, double s) {
  Eigen::Matrix2d m;
  m << c, s, -s, c;
  return m;
}

}  // namespace

std::pair<Eigen::Matrix4d, Eigen::Matrix<double, 4, 2>> transition(double omega, double dt) {
  const double th = omega * dt;
  const double c = std::cos(th);
  const double s = std::sin(th);

  // Integrals of cos/sin(omega u) and u*cos/sin(omega u) over [0, dt].
  double ic, is, jc, js;
  if (std::abs(th) < 1e-4) {
    const double w = omega;
    const double t = dt;
    ic = t - w * w * t * t * t / 6.0;
    is = w * t * t / 2.0 - w * w * w * t * t * t * t / 24.0;
    jc = t * t / 2.0 - w * w * t * t * t * t / 8.0;
    js = w * t * t * t / 3.0;
  } else {
    ic = s / omega;
    is = (1.0 - c) / omega;
    jc = dt * s / omega + (c - 1.0) / (omega * omega);
    js = -dt * c / omega + s / (omega * omega);
  }

  const Eigen::Matrix2d rot = rotation_block(c, s);
  Eigen::Matrix4d f = Eigen::Matrix4d::Zero();
  f.topLeftCorner<2, 2>() = rot;
  f.topRightCorner<2, 2>() = dt * rot;
  f.bottomRightCorner<2, 2>() = rot;

  Eigen::Matrix<double, 4, 2> g;
  g.topRows<2>() = -rotation_block(jc, js);
  g.bottomRows<2>() = -rotation_block(ic, is);
  return {f, g};
}

GapPointModel make_model(int id, const Vec2& position, const EgoMotion& ego, double stamp,
                         const TrackerConfig& config) {
  GapPointModel m;
  m.id = id;
  m.last_update = stamp;
  m.state.head<2>() = position;
  m.state.tail<2>() = -ego.linear_velocity;
  const double pv = config.measurement_sigma * config.measurement_sigma;
  const double vv = config.initial_velocity_sigma * config.initial_velocity_sigma;
  m.covariance = Eigen::Vector4d(pv, pv, vv, vv).asDiagonal();
  return m;
}

Association associate(std::span<const GapPointModel> previous, std::span<const Vec2> current,
                      double tau_assoc) {
  if (!(tau_assoc > 0.0)) throw InvalidInput("associate: tau_assoc must be positive");
  Association out;
  std::vector<char> prev_used(previous.size(), 0);
  std::vector<char> curr_used(current.size(), 0);

  if (!previous.empty() && !current.empty()) {
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(previous.size()),
                         static_cast<Eigen::Index>(current.size()));
    // Costs are clipped at the gate so a far pair cannot pull near pairs out of their best match.
    for (std::size_t i = 0; i < previous.size(); ++i) {
      for (std::size_t j = 0; j < current.size(); ++j) {
        cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::min((previous[i].position() - current[j]).norm(), tau_assoc);
      }
    }
    for (const auto& [r, c] : solve_assignment(cost)) {
      if ((previous[static_cast<std::size_t>(r)].position() - current[static_cast<std::size_t>(c)]).norm() > tau_assoc) continue;
      out.pairs.emplace_back(previous[static_cast<std::size_t>(r)].id, c);
      prev_used[static_cast<std::size_t>(r)] = 1;
      curr_used[static_cast<std::size_t>(c)] = 1;
    }
  }
  for (std::size_t i = 0; i < previous.size(); ++i) {
    if (!prev_used[i]) out.deaths.push_back(previous[i].id);
  }
  for (std::size_t j = 0; j < current.size(); ++j) {
    if (!curr_used[j]) out.births.push_back(static_cast<int>(j));
  }
  return out;
}

GapPointModel predict(const GapPointModel& model, const EgoMotion& ego, double dt,
                      const TrackerConfig& config) {
  if (!(dt > 0.0)) throw InvalidInput("predict: dt must be positive");
  if (dt > config.max_predict_dt + 1e-12) throw InvalidInput("predict: dt exceeds the discretisation limit");
  const auto [f, g] = transition(ego.angular_velocity, dt);
  GapPointModel out = model;
  out.state = f * model.state + g * ego.linear_acceleration;

  const double scale = dt / config.nominal_dt;
  const double qp = config.sigma_position * config.sigma_position * scale;
  const double qv = config.sigma_velocity * config.sigma_velocity * scale;
  const Eigen::Matrix4d q = Eigen::Vector4d(qp, qp, qv, qv).asDiagonal();
  Eigen::Matrix4d p = f * model.covariance * f.transpose() + q;
  out.covariance = 0.5 * (p + p.transpose());
  out.last_update = model.last_update + dt;
  return out;
}

GapPointModel update(const GapPointModel& model, const Vec2& measured, const Eigen::Matrix2d& R) {
  if (Eigen::LLT<Eigen::Matrix2d>(R).info() != Eigen::Success) {
    throw InvalidInput("update: measurement covariance must be positive definite");
  }
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;

  const Eigen::Matrix4d& p = model.covariance;
  const Eigen::Matrix2d s = h * p * h.transpose() + R;
  const Eigen::LDLT<Eigen::Matrix2d> s_ldlt(s);
  if (s_ldlt.info() != Eigen::Success || !s_ldlt.isPositive() ||
      std::abs(s.determinant()) < 1e-300 || !s.allFinite()) {
    throw NumericalFailure("update: singular innovation covariance");
  }
  const Eigen::Matrix<double, 4, 2> k = s_ldlt.solve(h * p).transpose();
  const Vec2 innovation = measured - h * model.state;

  GapPointModel out = model;
  out.state = model.state + k * innovation;
  const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - k * h;
  const Eigen::Matrix4d joseph = ikh * p * ikh.transpose() + k * R * k.transpose();
  out.covariance = 0.5 * (joseph + joseph.transpose());
  out.last_innovation = innovation;
  return out;
}

Vec2 gap_only_velocity(const GapPointModel& model, const EgoMotion& ego) {
  return model.velocity() + ego.linear_velocity;
}

const GapPointModel* GapTracker::find(int id) const {
  const auto it = std::find_if(models_.begin(), models_.end(), [id](const auto& m) { return m.id == id; });
  return it == models_.end() ? nullptr : &*it;
}

GapTracker::StepResult GapTracker::step(std::span<const Vec2> points, const EgoMotion& ego, double stamp) {
  for (auto& m : models_) {
    double remaining = stamp - m.last_update;
    while (remaining > 1e-12) {
      const double h = std::min(remaining, config_.max_predict_dt);
      m = predict(m, ego, h, config_);
      remaining -= h;
    }
    m.last_update = std::max(m.last_update, stamp);
  }

  StepResult result;
  result.association = associate(models_, points, config_.tau_assoc);
  result.ids.assign(points.size(), -1);

  const double var = config_.measurement_sigma * config_.measurement_sigma;
  const Eigen::Matrix2d r = var * Eigen::Matrix2d::Identity();
  std::vector<GapPointModel> next;
  next.reserve(points.size());
  for (const auto& [id, j] : result.association.pairs) {
    const GapPointModel* m = find(id);
    next.push_back(update(*m, points[static_cast<std::size_t>(j)], r));
    next.back().last_update = stamp;
    result.ids[static_cast<std::size_t>(j)] = id;
  }
  for (int j : result.association.births) {
    next.push_back(make_model(next_id_, points[static_cast<std::size_t>(j)], ego, stamp, config_));
    result.ids[static_cast<std::size_t>(j)] = next_id_;
    ++next_id_;
  }
  models_ = std::move(next);
  return result;
}

}  // namespace dgap
