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

#ifndef DYNLOC_CORE_MOTION_NOISE_HPP_
#define DYNLOC_CORE_MOTION_NOISE_HPP_

#include <cmath>

#include "dynloc/core/pose2.hpp"
#include "dynloc/core/random.hpp"

namespace dynloc {

// Variance added per meter translated (var_t) and per radian rotated
// (var_psi) on one axis of an odometry increment.
struct AxisNoise {
  double var_t = 0.0;
  double var_psi = 0.0;

  double Variance(double translation, double rotation) const {
    return var_t * translation + var_psi * rotation;
  }
  friend bool operator==(const AxisNoise&, const AxisNoise&) = default;
};

struct MotionNoise {
  AxisNoise x{0.1, 0.05};
  AxisNoise y{0.05, 0.05};
  AxisNoise psi{0.001, 0.05};

  static MotionNoise Zero() { return {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}; }

  // Throws ConfigError on negative entries.
  void Validate() const;
  friend bool operator==(const MotionNoise&, const MotionNoise&) = default;
};

// Increment perturbed by zero-mean Gaussian noise on each axis. Always draws
// three normals from `rng`.
Pose2 PerturbIncrement(const Pose2& increment, const MotionNoise& noise, Rng& rng);

}  // namespace dynloc

#endif  // DYNLOC_CORE_MOTION_NOISE_HPP_
