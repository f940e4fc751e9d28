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

#include "dynloc/core/motion_noise.hpp"

#include "dynloc/core/error.hpp"

namespace dynloc {

void MotionNoise::Validate() const {
  for (const AxisNoise& a : {x, y, psi}) {
    if (a.var_t < 0.0 || a.var_psi < 0.0) throw ConfigError("motion noise must be non-negative");
  }
}

Pose2 PerturbIncrement(const Pose2& increment, const MotionNoise& noise, Rng& rng) {
  const double translation = increment.translation().norm();
  const double rotation = std::abs(increment.psi());
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double nx = gauss(rng) * std::sqrt(noise.x.Variance(translation, rotation));
  const double ny = gauss(rng) * std::sqrt(noise.y.Variance(translation, rotation));
  const double npsi = gauss(rng) * std::sqrt(noise.psi.Variance(translation, rotation));
  return Pose2(increment.x() + nx, increment.y() + ny, increment.psi() + npsi);
}

}  // namespace dynloc
