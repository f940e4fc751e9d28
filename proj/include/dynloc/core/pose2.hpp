/*
 * Copyright 2026 The dynloc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DYNLOC_CORE_POSE2_HPP_
#define DYNLOC_CORE_POSE2_HPP_

#include <cmath>
#include <numbers>

#include "Eigen/Core"

namespace dynloc {

// Wraps an angle into (-pi, pi].
inline double NormalizeAngle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * std::numbers::pi);
  if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
  return wrapped;
}

// Planar rigid transform / robot pose. The heading is kept in (-pi, pi].
class Pose2 {
 public:
  constexpr Pose2() = default;
  Pose2(double x, double y, double psi) : x_(x), y_(y), psi_(NormalizeAngle(psi)) {}
  Pose2(const Eigen::Vector2d& translation, double psi)
      : Pose2(translation.x(), translation.y(), psi) {}

  static constexpr Pose2 Identity() { return Pose2(); }

  double x() const { return x_; }
  double y() const { return y_; }
  double psi() const { return psi_; }
  Eigen::Vector2d translation() const { return {x_, y_}; }

  Eigen::Matrix2d rotation() const {
    const double c = std::cos(psi_);
    const double s = std::sin(psi_);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
  }

  // Maps a point expressed in this pose's frame into the parent frame.
  Eigen::Vector2d operator*(const Eigen::Vector2d& p) const {
    const double c = std::cos(psi_);
    const double s = std::sin(psi_);
    return {x_ + c * p.x() - s * p.y(), y_ + s * p.x() + c * p.y()};
  }

  friend bool operator==(const Pose2&, const Pose2&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double psi_ = 0.0;
};

// a ⊕ b: b expressed in a's frame, composed into a's parent frame.
inline Pose2 Compose(const Pose2& a, const Pose2& b) {
  const double c = std::cos(a.psi());
  const double s = std::sin(a.psi());
  return Pose2(a.x() + c * b.x() - s * b.y(), a.y() + s * b.x() + c * b.y(),
               a.psi() + b.psi());
}

inline Pose2 Inverse(const Pose2& a) {
  const double c = std::cos(a.psi());
  const double s = std::sin(a.psi());
  return Pose2(-c * a.x() - s * a.y(), s * a.x() - c * a.y(), -a.psi());
}

// inverse(from) ⊕ to.
inline Pose2 Between(const Pose2& from, const Pose2& to) {
  return Compose(Inverse(from), to);
}

}  // namespace dynloc

#endif  // DYNLOC_CORE_POSE2_HPP_
