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

#include "dynloc/core/session.hpp"

#include "dynloc/core/error.hpp"

namespace dynloc {

std::vector<Eigen::Vector2d> Positions(const LabeledScan& scan) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(scan.points.size());
  for (const LabeledPoint& p : scan.points) out.emplace_back(p.x, p.y);
  return out;
}

std::vector<Eigen::Vector2d> TransformedPositions(const LabeledScan& scan, const Pose2& pose) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(scan.points.size());
  for (const LabeledPoint& p : scan.points) out.push_back(pose * p.position());
  return out;
}

void ValidateTrajectory(const Trajectory& trajectory) {
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    if (!(trajectory[i].timestamp > trajectory[i - 1].timestamp)) {
      throw ConfigError("trajectory timestamps must be strictly increasing (index " +
                        std::to_string(i) + ")");
    }
  }
}

void ValidateSession(const SessionLog& log) {
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    if (!(log.records[i].timestamp() > log.records[i - 1].timestamp())) {
      throw ConfigError("session timestamps must be strictly increasing (frame " +
                        std::to_string(i) + ")");
    }
  }
}

SessionLog NormalizeSession(SessionLog log) {
  if (log.empty()) throw EmptyInputError("cannot normalize an empty session");
  const Pose2 to_first = Inverse(log.records.front().odometry);
  for (SessionRecord& r : log.records) r.odometry = Compose(to_first, r.odometry);
  log.records.front().odometry = Pose2::Identity();
  return log;
}

Trajectory GroundTruthTrajectory(const SessionLog& log) {
  Trajectory out;
  out.reserve(log.size());
  for (const SessionRecord& r : log.records) out.push_back({r.timestamp(), r.ground_truth});
  return out;
}

}  // namespace dynloc
