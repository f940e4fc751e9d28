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

#ifndef DYNLOC_CORE_SCAN_HPP_
#define DYNLOC_CORE_SCAN_HPP_

#include <vector>

#include "Eigen/Core"
#include "dynloc/core/labels.hpp"
#include "dynloc/core/pose2.hpp"

namespace dynloc {

struct LabeledPoint {
  double x = 0.0;
  double y = 0.0;
  Label label = labels::kUnlabeled;

  Eigen::Vector2d position() const { return {x, y}; }
  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

// One lidar sweep, points in the sensor frame.
struct LabeledScan {
  double timestamp = 0.0;
  std::vector<LabeledPoint> points;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
  friend bool operator==(const LabeledScan&, const LabeledScan&) = default;
};

std::vector<Eigen::Vector2d> Positions(const LabeledScan& scan);

// Points of `scan` mapped through `pose` into its parent frame.
std::vector<Eigen::Vector2d> TransformedPositions(const LabeledScan& scan, const Pose2& pose);

}  // namespace dynloc

#endif  // DYNLOC_CORE_SCAN_HPP_
