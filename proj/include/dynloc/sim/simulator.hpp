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

#ifndef DYNLOC_SIM_SIMULATOR_HPP_
#define DYNLOC_SIM_SIMULATOR_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "dynloc/core/labels.hpp"
#include "dynloc/core/motion_noise.hpp"
#include "dynloc/core/pose2.hpp"
#include "dynloc/core/scan.hpp"
#include "dynloc/core/session.hpp"
#include "dynloc/sim/world.hpp"

namespace dynloc::sim {

struct SessionSpec {
  WorldSpec world;
  std::uint64_t seed = 1;
  // Seed of the mapping session whose parked cars this session starts from.
  // Unset: this is itself a mapping session.
  std::optional<std::uint64_t> mapping_seed;

  double persistence = 0.3;   // a mapping-session car stays in its slot
  double spawn_rate = 0.3;    // a slot without its mapping car gets a new one
  double parking_jitter_min = 0.5;  // m, along-slot offset of new cars
  double parking_jitter_max = 1.5;
  double label_flip_prob = 0.1;
  // m; wide enough to stand in for the facade relief a 3D scan would
  // collapse into a 2D cell.
  double range_noise_sigma = 0.15;
  MotionNoise odom_noise{{0.004, 0.0}, {0.002, 0.0}, {0.0002, 0.002}};
  double frame_rate = 10.0;   // Hz
  double duration = 60.0;     // s
  // 0.25 deg; sparser sampling splits distant agents into clusters below the
  // dynamic filter's size floor.
  std::size_t beam_count = 1440;
  double max_range = 40.0;    // m
  double ground_return_fraction = 0.05;  // of rays without a hit
  LabelRegistry registry = LabelRegistry::SemanticKitti();

  std::size_t frame_count() const;
  void Validate() const;
};

enum class ObjectKind : std::uint8_t { kNone, kGround, kStatic, kParkedCar, kAgent };

// Per-point ground truth identity. Static shapes use their index, parked cars
// their slot index, agents their agent index.
struct ObjectRef {
  ObjectKind kind = ObjectKind::kNone;
  std::int32_t index = -1;
  friend bool operator==(const ObjectRef&, const ObjectRef&) = default;
};

struct ParkedCar {
  std::size_t slot = 0;
  Pose2 pose;
  bool from_mapping = false;  // same car, same place as in the mapping session
};

// World state of one session.
struct WorldSnapshot {
  std::vector<bool> mapping_occupancy;  // per slot, as in the mapping session
  std::vector<ParkedCar> parked;
  std::vector<double> agent_phase;  // m of arc length at t = 0
};

WorldSnapshot InstantiateSession(const SessionSpec& spec);

// Pose of agent `index` at time t.
Pose2 AgentPose(const WorldSpec& world, const WorldSnapshot& snapshot, std::size_t index,
                double t);

struct RenderedScan {
  LabeledScan scan;
  std::vector<ObjectRef> objects;  // per point
  std::vector<Label> true_labels;  // per point, before label noise
};

// Ray casts beam_count uniformly spaced beams from `sensor_pose` at time t.
// `frame` selects the noise substream.
RenderedScan RenderScan(const SessionSpec& spec, const WorldSnapshot& snapshot, double t,
                        const Pose2& sensor_pose, std::uint64_t frame);

struct AnnotatedSession {
  SessionLog log;
  WorldSnapshot snapshot;
  std::vector<std::vector<ObjectRef>> objects;
  std::vector<std::vector<Label>> true_labels;
};

// Drives the route at frame_rate and records ground truth, drifting odometry
// and rendered scans. Throws ConfigError for a zero-length route.
AnnotatedSession GenerateAnnotated(const SessionSpec& spec);
SessionLog Generate(const SessionSpec& spec);

// Ground-truth robot pose at time t.
Pose2 RoutePose(const Route& route, double t);

}  // namespace dynloc::sim

#endif  // DYNLOC_SIM_SIMULATOR_HPP_
