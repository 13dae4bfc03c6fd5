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

#ifndef DGAP_GAP_TRACKING_HPP
#define DGAP_GAP_TRACKING_HPP

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dgap/common.hpp"

namespace dgap {

/// Robot motion expressed in its own body frame.
struct EgoMotion {
  Vec2 linear_velocity{Vec2::Zero()};
  /// Inertial acceleration, expressed in the body frame.
  Vec2 linear_acceleration{Vec2::Zero()};
  double angular_velocity{0.0};
};

/// Noise and gating parameters of the gap point estimator. The defaults are
/// engineering choices; the measurement model observes position only.
struct TrackerConfig {
  double sigma_position{0.01};   ///< process noise std per nominal step [m]
  double sigma_velocity{0.1};    ///< process noise std per nominal step [m/s]
  double nominal_dt{0.02};       ///< step the process noise is specified for [s]
  double measurement_sigma{0.01};
  double initial_velocity_sigma{0.5};
  double tau_assoc{0.7};
  double max_predict_dt{0.1};
};

/**
 * Rotating-frame constant velocity model of one gap side.
 *
 * State is (p_s/b, v_s/b): position and velocity of the gap point relative to
 * the robot, both in the body frame.
 */
struct GapPointModel {
  Eigen::Vector4d state{Eigen::Vector4d::Zero()};
  Eigen::Matrix4d covariance{Eigen::Matrix4d::Identity()};
  int id{-1};
  double last_update{0.0};
  Vec2 last_innovation{Vec2::Zero()};

  [[nodiscard]] Vec2 position() const { return state.head<2>(); }
  [[nodiscard]] Vec2 velocity() const { return state.tail<2>(); }
};

struct Association {
  std::vector<std::pair<int, int>> pairs;  ///< (previous model id, current point index)
  std::vector<int> births;                 ///< current point indices without a model
  std::vector<int> deaths;                 ///< previous model ids that were not continued
};

/// New model for a freshly detected point, assuming it belongs to static structure.
GapPointModel make_model(int id, const Vec2& position, const EgoMotion& ego, double stamp,
                         const TrackerConfig& config = {});

/// Optimal one-to-one matching of model positions to points, gated by tau_assoc.
Association associate(std::span<const GapPointModel> previous, std::span<const Vec2> current,
                      double tau_assoc);

/// Exact discretisation of the rotating-frame dynamics over dt (0 < dt <= max_predict_dt).
GapPointModel predict(const GapPointModel& model, const EgoMotion& ego, double dt,
                      const TrackerConfig& config = {});

/// Position-only Kalman correction.
GapPointModel update(const GapPointModel& model, const Vec2& measured, const Eigen::Matrix2d& R);

/// Velocity of the gap point with ego motion removed: v_s = v_s/b + v_b.
Vec2 gap_only_velocity(const GapPointModel& model, const EgoMotion& ego);

/// State transition matrix and acceleration input matrix used by predict().
std::pair<Eigen::Matrix4d, Eigen::Matrix<double, 4, 2>> transition(double omega, double dt);

/**
 * Keeps one model per gap point across scans. Ids are never reused.
 */
class GapTracker {
 public:
  explicit GapTracker(TrackerConfig config = {}) : config_(config) {}

  struct StepResult {
    std::vector<int> ids;  ///< model id for every input point
    Association association;
  };

  /// Predicts all live models to `stamp`, associates, corrects and spawns/drops models.
  StepResult step(std::span<const Vec2> points, const EgoMotion& ego, double stamp);

  [[nodiscard]] const std::vector<GapPointModel>& models() const { return models_; }
  [[nodiscard]] const GapPointModel* find(int id) const;
  [[nodiscard]] bool alive(int id) const { return find(id) != nullptr; }
  [[nodiscard]] const TrackerConfig& config() const { return config_; }
  void reset() {
    models_.clear();
    next_id_ = 0;
  }

 private:
  TrackerConfig config_;
  std::vector<GapPointModel> models_;
  int next_id_{0};
};

}  // namespace dgap

#endif  // DGAP_GAP_TRACKING_HPP
