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

#include "dynloc/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "Eigen/Geometry"
#include "dynloc/core/error.hpp"
#include "dynloc/core/random.hpp"

namespace dynloc::sim {

namespace {

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

struct Segment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
  Label label;
  ObjectRef object;
};

void AddPolyline(const std::vector<Eigen::Vector2d>& vertices, bool closed, Label label,
                 ObjectRef object, std::vector<Segment>& out) {
  if (vertices.size() < 2) return;
  for (std::size_t k = 1; k < vertices.size(); ++k) {
    out.push_back({vertices[k - 1], vertices[k], label, object});
  }
  if (closed && vertices.size() > 2) out.push_back({vertices.back(), vertices.front(), label, object});
}

void AddBox(const Pose2& pose, double length, double width, Label label, ObjectRef object,
            std::vector<Segment>& out) {
  const double hl = length / 2.0;
  const double hw = width / 2.0;
  AddPolyline({pose * Eigen::Vector2d(hl, hw), pose * Eigen::Vector2d(-hl, hw),
               pose * Eigen::Vector2d(-hl, -hw), pose * Eigen::Vector2d(hl, -hw)},
              true, label, object, out);
}

// Distance from `o` along unit `d` to the segment, or infinity.
double RaySegment(const Eigen::Vector2d& o, const Eigen::Vector2d& d, const Segment& seg) {
  const Eigen::Vector2d e = seg.b - seg.a;
  const double denom = d.x() * e.y() - d.y() * e.x();
  if (std::abs(denom) < 1e-12) return std::numeric_limits<double>::infinity();
  const Eigen::Vector2d w = seg.a - o;
  const double t = (w.x() * e.y() - w.y() * e.x()) / denom;
  const double s = (w.x() * d.y() - w.y() * d.x()) / denom;
  if (t < 0.0 || s < 0.0 || s > 1.0) return std::numeric_limits<double>::infinity();
  return t;
}

bool NearSensor(const Segment& seg, const Eigen::Vector2d& o, double range) {
  const Eigen::Vector2d lo = seg.a.cwiseMin(seg.b);
  const Eigen::Vector2d hi = seg.a.cwiseMax(seg.b);
  return lo.x() <= o.x() + range && hi.x() >= o.x() - range && lo.y() <= o.y() + range &&
         hi.y() >= o.y() - range;
}

// Indices of the segments each beam may hit, in segment order.
// Beam b points at -pi + b * step in the sensor frame.
std::vector<std::vector<std::uint32_t>> BeamCandidates(const std::vector<Segment>& segments,
                                                       const Pose2& sensor_pose,
                                                       std::size_t beam_count) {
  std::vector<std::vector<std::uint32_t>> out(beam_count);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(beam_count);
  const Eigen::Rotation2Dd to_sensor(-sensor_pose.psi());
  const auto n = static_cast<std::int64_t>(beam_count);
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const Eigen::Vector2d va = to_sensor * (segments[k].a - sensor_pose.translation());
    const Eigen::Vector2d vb = to_sensor * (segments[k].b - sensor_pose.translation());
    const double cross = va.x() * vb.y() - va.y() * vb.x();
    std::int64_t first = 0;
    std::int64_t last = n - 1;
    // A segment through the sensor is offered to every beam.
    if (std::abs(cross) > 1e-9 * std::max((vb - va).norm(), 1.0) || va.dot(vb) > 0.0) {
      const double ta = std::atan2(va.y(), va.x());
      const double span = NormalizeAngle(std::atan2(vb.y(), vb.x()) - ta);
      const double start = span >= 0.0 ? ta : ta + span;
      first = static_cast<std::int64_t>(std::floor((start + std::numbers::pi) / step)) - 1;
      last = static_cast<std::int64_t>(
                 std::ceil((start + std::abs(span) + std::numbers::pi) / step)) +
             1;
      if (last - first >= n) {
        first = 0;
        last = n - 1;
      }
    }
    for (std::int64_t b = first; b <= last; ++b) {
      out[static_cast<std::size_t>(((b % n) + n) % n)].push_back(static_cast<std::uint32_t>(k));
    }
  }
  return out;
}

}  // namespace

std::size_t SessionSpec::frame_count() const {
  return static_cast<std::size_t>(std::llround(duration * frame_rate));
}

void SessionSpec::Validate() const {
  for (double p : {persistence, spawn_rate, label_flip_prob, ground_return_fraction}) {
    if (!IsProbability(p)) throw ConfigError("session probabilities must lie in [0, 1]");
  }
  for (const ParkingSlot& slot : world.parking_slots) {
    if (!IsProbability(slot.occupancy_prob)) {
      throw ConfigError("slot occupancy probability must lie in [0, 1]");
    }
  }
  if (!(parking_jitter_min >= 0.0 && parking_jitter_max >= parking_jitter_min)) {
    throw ConfigError("parking jitter must satisfy 0 <= min <= max");
  }
  if (!(range_noise_sigma >= 0.0)) throw ConfigError("range_noise_sigma must be non-negative");
  if (!(frame_rate > 0.0)) throw ConfigError("frame_rate must be positive");
  if (!(duration >= 0.0)) throw ConfigError("duration must be non-negative");
  if (beam_count == 0) throw ConfigError("beam_count must be positive");
  if (!(max_range > 0.0)) throw ConfigError("max_range must be positive");
  odom_noise.Validate();
  if (!(world.route.speed > 0.0)) throw ConfigError("route speed must be positive");
  if (!(PathLength(world.route.waypoints, world.route.closed) > 0.0)) {
    throw ConfigError("route has zero length");
  }
  for (const Eigen::Vector2d& p : world.route.waypoints) {
    if ((p.array() < world.bounds_min.array()).any() ||
        (p.array() > world.bounds_max.array()).any()) {
      throw ConfigError("route leaves the world bounds");
    }
  }
  for (const AgentPath& agent : world.agents) {
    if (agent.waypoints.empty() || !(agent.speed >= 0.0)) {
      throw ConfigError("agent needs waypoints and a non-negative speed");
    }
  }
}

WorldSnapshot InstantiateSession(const SessionSpec& spec) {
  const std::vector<ParkingSlot>& slots = spec.world.parking_slots;
  WorldSnapshot snapshot;

  Rng occupancy_rng = MakeRng(spec.mapping_seed.value_or(spec.seed), {stream::kMappingOccupancy});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  snapshot.mapping_occupancy.reserve(slots.size());
  for (const ParkingSlot& slot : slots) {
    snapshot.mapping_occupancy.push_back(unit(occupancy_rng) < slot.occupancy_prob);
  }

  if (!spec.mapping_seed) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (snapshot.mapping_occupancy[s]) snapshot.parked.push_back({s, slots[s].pose, true});
    }
  } else {
    Rng change_rng = MakeRng(spec.seed, {stream::kSessionChanges});
    std::uniform_real_distribution<double> jitter(spec.parking_jitter_min,
                                                  spec.parking_jitter_max);
    std::uniform_real_distribution<double> yaw(-0.05, 0.05);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      // Fixed number of draws per slot keeps later slots independent of earlier outcomes.
      const double u_persist = unit(change_rng);
      const double u_spawn = unit(change_rng);
      const double offset = jitter(change_rng) * (unit(change_rng) < 0.5 ? -1.0 : 1.0);
      const double dpsi = yaw(change_rng);
      if (snapshot.mapping_occupancy[s] && u_persist < spec.persistence) {
        snapshot.parked.push_back({s, slots[s].pose, true});
      } else if (u_spawn < spec.spawn_rate) {
        const Pose2 shifted = Compose(slots[s].pose, Pose2(offset, 0.0, dpsi));
        snapshot.parked.push_back({s, shifted, false});
      }
    }
  }

  Rng agent_rng = MakeRng(spec.seed, {stream::kAgents});
  for (const AgentPath& agent : spec.world.agents) {
    const double length = PathLength(agent.waypoints, agent.closed);
    snapshot.agent_phase.push_back(std::uniform_real_distribution<double>(0.0, 1.0)(agent_rng) *
                                   length);
  }
  return snapshot;
}

Pose2 AgentPose(const WorldSpec& world, const WorldSnapshot& snapshot, std::size_t index,
                double t) {
  const AgentPath& agent = world.agents.at(index);
  return PoseAlong(agent.waypoints, agent.closed, snapshot.agent_phase.at(index) + agent.speed * t);
}

Pose2 RoutePose(const Route& route, double t) {
  return PoseAlong(route.waypoints, route.closed, route.speed * t);
}

RenderedScan RenderScan(const SessionSpec& spec, const WorldSnapshot& snapshot, double t,
                        const Pose2& sensor_pose, std::uint64_t frame) {
  const WorldSpec& world = spec.world;
  const Eigen::Vector2d origin = sensor_pose.translation();

  std::vector<Segment> all;
  for (std::size_t k = 0; k < world.static_shapes.size(); ++k) {
    const StaticShape& shape = world.static_shapes[k];
    AddPolyline(shape.vertices, shape.closed, shape.label,
                {ObjectKind::kStatic, static_cast<std::int32_t>(k)}, all);
  }
  for (const ParkedCar& car : snapshot.parked) {
    AddBox(car.pose, world.car_length, world.car_width, labels::kCar,
           {ObjectKind::kParkedCar, static_cast<std::int32_t>(car.slot)}, all);
  }
  for (std::size_t k = 0; k < world.agents.size(); ++k) {
    const AgentPath& agent = world.agents[k];
    AddBox(AgentPose(world, snapshot, k, t), agent.length, agent.width, agent.label,
           {ObjectKind::kAgent, static_cast<std::int32_t>(k)}, all);
  }
  std::vector<Segment> nearby;
  for (const Segment& seg : all) {
    if (NearSensor(seg, origin, spec.max_range)) nearby.push_back(seg);
  }
  const std::vector<std::vector<std::uint32_t>> candidates =
      BeamCandidates(nearby, sensor_pose, spec.beam_count);

  Rng rng = MakeRng(spec.seed, {stream::kSensor, frame});
  std::normal_distribution<double> range_noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<Label>& vocabulary = spec.registry.ids();

  RenderedScan out;
  out.scan.timestamp = t;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(spec.beam_count);
  for (std::size_t b = 0; b < spec.beam_count; ++b) {
    const double bearing = -std::numbers::pi + step * static_cast<double>(b);
    const Eigen::Vector2d dir_local(std::cos(bearing), std::sin(bearing));
    const Eigen::Vector2d dir = sensor_pose.rotation() * dir_local;

    // Every beam consumes the same draws whatever it hits.
    const double noise = range_noise(rng) * spec.range_noise_sigma;
    const double u_flip = unit(rng);
    const double u_pick = unit(rng);
    const double u_ground = unit(rng);
    const double ground_range = 2.0 + unit(rng) * (0.5 * spec.max_range - 2.0);

    double best = std::numeric_limits<double>::infinity();
    const Segment* hit = nullptr;
    for (std::uint32_t k : candidates[b]) {
      const double r = RaySegment(origin, dir, nearby[k]);
      if (r < best) {
        best = r;
        hit = &nearby[k];
      }
    }

    double range;
    Label label;
    ObjectRef object;
    if (hit != nullptr && best <= spec.max_range) {
      range = best + noise;
      label = hit->label;
      object = hit->object;
      if (!(range > 0.0 && range <= spec.max_range)) continue;
    } else if (u_ground < spec.ground_return_fraction) {
      range = std::max(ground_range, 0.1);
      label = labels::kRoad;
      object = {ObjectKind::kGround, -1};
    } else {
      continue;
    }

    Label emitted = label;
    if (u_flip < spec.label_flip_prob && vocabulary.size() > 1) {
      // Uniform over the registry minus the true label.
      std::size_t true_index = vocabulary.size();
      for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        if (vocabulary[i] == label) true_index = i;
      }
      const std::size_t choices =
          true_index < vocabulary.size() ? vocabulary.size() - 1 : vocabulary.size();
      std::size_t pick = std::min(static_cast<std::size_t>(u_pick * static_cast<double>(choices)),
                                  choices - 1);
      if (pick >= true_index) ++pick;
      emitted = vocabulary[pick];
    }
    out.scan.points.push_back({range * dir_local.x(), range * dir_local.y(), emitted});
    out.objects.push_back(object);
    out.true_labels.push_back(label);
  }
  return out;
}

AnnotatedSession GenerateAnnotated(const SessionSpec& spec) {
  spec.Validate();
  AnnotatedSession out;
  out.snapshot = InstantiateSession(spec);
  out.log.frame_rate = spec.frame_rate;
  out.log.registry = spec.registry;

  const std::size_t frames = spec.frame_count();
  Rng odom_rng = MakeRng(spec.seed, {stream::kOdometry});
  out.log.records.reserve(frames);
  out.objects.reserve(frames);
  out.true_labels.reserve(frames);
  Pose2 previous_gt;
  Pose2 odometry;
  for (std::size_t k = 0; k < frames; ++k) {
    const double t = static_cast<double>(k) / spec.frame_rate;
    const Pose2 gt = RoutePose(spec.world.route, t);
    if (k == 0) {
      odometry = gt;
    } else {
      odometry = Compose(odometry, PerturbIncrement(Between(previous_gt, gt), spec.odom_noise,
                                                    odom_rng));
    }
    previous_gt = gt;
    RenderedScan rendered = RenderScan(spec, out.snapshot, t, gt, k);
    out.log.records.push_back({gt, odometry, std::move(rendered.scan)});
    out.objects.push_back(std::move(rendered.objects));
    out.true_labels.push_back(std::move(rendered.true_labels));
  }
  return out;
}

SessionLog Generate(const SessionSpec& spec) { return GenerateAnnotated(spec).log; }

}  // namespace dynloc::sim
