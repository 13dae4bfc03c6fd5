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

#ifndef DGAP_COMMON_HPP
#define DGAP_COMMON_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dgap {

using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Precondition violated by the caller (bad scan, nonpositive dt, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quantity is evaluated at or too close to a singular point.
class Singularity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Linear algebra broke down (singular innovation covariance, QP residual).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A gap could not be turned into a navigable region or harmonic field.
class SynthesisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - kPi;
}

/// Counterclockwise angle needed to rotate bearing `from` onto bearing `to`, in [0, 2pi).
inline double ccw_angle(double from, double to) {
  double d = std::fmod(to - from, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return d;
}

inline Vec2 polar(double bearing, double range) {
  return {range * std::cos(bearing), range * std::sin(bearing)};
}

inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

inline Vec2 unit_bearing(double bearing) { return {std::cos(bearing), std::sin(bearing)}; }

}  // namespace dgap

#endif  // DGAP_COMMON_HPP
