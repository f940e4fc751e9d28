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

#ifndef DYNLOC_CORE_SESSION_HPP_
#define DYNLOC_CORE_SESSION_HPP_

#include <string>
#include <vector>

#include "dynloc/core/labels.hpp"
#include "dynloc/core/pose2.hpp"
#include "dynloc/core/scan.hpp"

namespace dynloc {

struct TimedPose {
  double timestamp = 0.0;
  Pose2 pose;
  friend bool operator==(const TimedPose&, const TimedPose&) = default;
};

using Trajectory = std::vector<TimedPose>;

// Throws ConfigError if timestamps are not strictly increasing.
void ValidateTrajectory(const Trajectory& trajectory);

// One frame of a traversal. The frame timestamp is scan.timestamp.
struct SessionRecord {
  Pose2 ground_truth;
  Pose2 odometry;
  LabeledScan scan;

  double timestamp() const { return scan.timestamp; }
  friend bool operator==(const SessionRecord&, const SessionRecord&) = default;
};

struct SessionLog {
  double frame_rate = 10.0;
  LabelRegistry registry = LabelRegistry::SemanticKitti();
  // Free-form description of how the session was produced (JSON in practice).
  std::string spec_echo;
  std::vector<SessionRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
  friend bool operator==(const SessionLog&, const SessionLog&) = default;
};

// Throws ConfigError if timestamps are not strictly increasing.
void ValidateSession(const SessionLog& log);

// Re-expresses all odometry poses relative to the first one, so that the first
// odometry pose becomes the identity. Throws EmptyInputError on an empty log.
SessionLog NormalizeSession(SessionLog log);

Trajectory GroundTruthTrajectory(const SessionLog& log);

}  // namespace dynloc

#endif  // DYNLOC_CORE_SESSION_HPP_
