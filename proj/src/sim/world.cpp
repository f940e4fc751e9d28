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

#include "dynloc/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "Eigen/Geometry"
#include "dynloc/core/random.hpp"

namespace dynloc::sim {

namespace {

StaticShape Box(const Eigen::Vector2d& center, double half_along, double half_across,
                const Eigen::Vector2d& along, Label label) {
  const Eigen::Vector2d across(-along.y(), along.x());
  StaticShape shape;
  shape.label = label;
  shape.closed = true;
  shape.vertices = {center + half_along * along + half_across * across,
                    center - half_along * along + half_across * across,
                    center - half_along * along - half_across * across,
                    center + half_along * along - half_across * across};
  return shape;
}

// One straight side of the block: points p(u) = mid + u * along + v * normal,
// with v > 0 pointing away from the block centre.
struct Edge {
  Eigen::Vector2d mid;
  Eigen::Vector2d along;
  Eigen::Vector2d normal;
  double half_length;  // of the straight part, corners excluded
};

std::vector<Edge> BlockEdges(double hx, double hy, double radius) {
  return {
      {{0.0, -hy}, {1.0, 0.0}, {0.0, -1.0}, hx - radius},
      {{hx, 0.0}, {0.0, 1.0}, {1.0, 0.0}, hy - radius},
      {{0.0, hy}, {-1.0, 0.0}, {0.0, 1.0}, hx - radius},
      {{-hx, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, hy - radius},
  };
}

}  // namespace

std::vector<Eigen::Vector2d> RoundedRectangle(double half_x, double half_y, double radius,
                                              int points_per_corner) {
  radius = std::clamp(radius, 0.0, std::min(half_x, half_y));
  const Eigen::Vector2d centers[4] = {{half_x - radius, -half_y + radius},
                                      {half_x - radius, half_y - radius},
                                      {-half_x + radius, half_y - radius},
                                      {-half_x + radius, -half_y + radius}};
  std::vector<Eigen::Vector2d> out;
  for (int c = 0; c < 4; ++c) {
    const double start = -std::numbers::pi / 2.0 + c * std::numbers::pi / 2.0;
    const int n = radius > 0.0 ? points_per_corner : 1;
    for (int k = 0; k <= (radius > 0.0 ? n : 0); ++k) {
      const double a = start + (std::numbers::pi / 2.0) * k / std::max(n, 1);
      out.push_back(centers[c] + radius * Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
  }
  return out;
}

double PathLength(const std::vector<Eigen::Vector2d>& waypoints, bool closed) {
  if (waypoints.size() < 2) return 0.0;
  double length = 0.0;
  for (std::size_t k = 1; k < waypoints.size(); ++k) {
    length += (waypoints[k] - waypoints[k - 1]).norm();
  }
  if (closed) length += (waypoints.front() - waypoints.back()).norm();
  return length;
}

Pose2 PoseAlong(const std::vector<Eigen::Vector2d>& waypoints, bool closed, double s) {
  const double length = PathLength(waypoints, closed);
  if (waypoints.empty()) return Pose2();
  if (length <= 0.0) return Pose2(waypoints.front(), 0.0);
  if (closed) {
    s = std::fmod(s, length);
    if (s < 0.0) s += length;
  } else {
    s = std::clamp(s, 0.0, length);
  }
  const std::size_t n = waypoints.size();
  const std::size_t segments = closed ? n : n - 1;
  for (std::size_t k = 0; k < segments; ++k) {
    const Eigen::Vector2d& a = waypoints[k];
    const Eigen::Vector2d& b = waypoints[(k + 1) % n];
    const double seg = (b - a).norm();
    if (seg <= 0.0) continue;
    if (s <= seg || k + 1 == segments) {
      const Eigen::Vector2d dir = (b - a) / seg;
      const double u = std::min(s, seg);
      return Pose2(a + u * dir, std::atan2(dir.y(), dir.x()));
    }
    s -= seg;
  }
  return Pose2(waypoints.back(), 0.0);
}

WorldSpec MakeCityWorld(const CityParams& params) {
  Rng rng = MakeRng(params.seed, {stream::kWorld});
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  WorldSpec world;
  world.bounds_min = params.bounds_min;
  world.bounds_max = params.bounds_max;
  const double hx = params.block_half_x + uniform(-params.size_jitter, params.size_jitter);
  const double hy = params.block_half_y + uniform(-params.size_jitter, params.size_jitter);
  const double r = params.corner_radius;
  const std::vector<Edge> edges = BlockEdges(hx, hy, r);

  for (const Edge& edge : edges) {
    // Buildings on both sides of the road, separated by alleys. The outer side
    // occasionally opens into a side street.
    for (double side : {-1.0, 1.0}) {
      double u = -edge.half_length + uniform(0.0, 3.0);
      const double u_end = edge.half_length - 2.0;
      while (u < u_end) {
        if (side > 0.0 && uniform(0.0, 1.0) < 0.12) {
          u += uniform(8.0, 12.0);  // side street
          continue;
        }
        const double length = std::min(uniform(6.0, 20.0), u_end - u);
        if (length < 4.0) break;
        const double setback = uniform(0.0, 3.5);
        const double depth = uniform(8.0, 14.0);
        const double v = side * (params.facade_offset + setback + depth / 2.0);
        // Slightly skewed footprints, pushed back so no corner reaches the road.
        const double tilt = uniform(-0.2, 0.2);
        const Eigen::Vector2d axis = Eigen::Rotation2Dd(tilt) * edge.along;
        const double skew_clearance = 0.5 * length * std::abs(std::sin(tilt));
        world.static_shapes.push_back(Box(edge.mid + (u + length / 2.0) * edge.along +
                                              (v + side * skew_clearance) * edge.normal,
                                          length / 2.0, depth / 2.0, axis,
                                          labels::kBuilding));
        u += length;
        const double gap = uniform(1.5, 6.0);
        if (uniform(0.0, 1.0) < 0.35 && gap > 2.5) {
          // Fence closing part of the alley.
          const double fv = side * (params.facade_offset + 0.5);
          StaticShape fence;
          fence.closed = false;
          fence.label = labels::kFence;
          fence.vertices = {edge.mid + u * edge.along + fv * edge.normal,
                            edge.mid + (u + gap * 0.7) * edge.along + fv * edge.normal};
          world.static_shapes.push_back(fence);
        }
        u += gap;
      }

      // Poles and tree trunks along the sidewalk.
      double p = -edge.half_length + uniform(2.0, 10.0);
      while (p < edge.half_length - 2.0) {
        const bool tree = uniform(0.0, 1.0) < 0.4;
        const double half = tree ? 0.25 : 0.15;
        const double v = side * (params.sidewalk_offset + uniform(-0.3, 0.3) + (tree ? 0.6 : 0.0));
        world.static_shapes.push_back(Box(edge.mid + p * edge.along + v * edge.normal, half,
                                          half, edge.along,
                                          tree ? labels::kTrunk : labels::kPole));
        p += uniform(4.0, 14.0);
      }
    }
  }

  // Parking slots on the straight parts of both curbs.
  std::vector<ParkingSlot> candidates;
  constexpr double kSlotLength = 6.0;
  for (const Edge& edge : edges) {
    for (double side : {-1.0, 1.0}) {
      const int count = static_cast<int>(std::floor((2.0 * edge.half_length - 4.0) / kSlotLength));
      const double start = -0.5 * (count - 1) * kSlotLength;
      for (int k = 0; k < count; ++k) {
        const double u = start + k * kSlotLength;
        ParkingSlot slot;
        const Eigen::Vector2d c = edge.mid + u * edge.along + side * params.parking_offset * edge.normal;
        slot.pose = Pose2(c, std::atan2(edge.along.y(), edge.along.x()));
        slot.occupancy_prob = params.slot_occupancy;
        candidates.push_back(slot);
      }
    }
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(std::min(candidates.size(), params.parking_slots));
  world.parking_slots = std::move(candidates);

  // Traffic in the inner lane (clockwise), pedestrians on both sidewalks.
  for (std::size_t k = 0; k < params.moving_cars; ++k) {
    AgentPath agent;
    const double o = -params.lane_offset;
    agent.waypoints = RoundedRectangle(hx + o, hy + o, r + o);
    std::reverse(agent.waypoints.begin(), agent.waypoints.end());
    agent.speed = uniform(4.0, 8.0);
    agent.label = params.moving_labels_distinct ? labels::kMovingCar : labels::kCar;
    agent.length = world.car_length;
    agent.width = world.car_width;
    world.agents.push_back(agent);
  }
  for (std::size_t k = 0; k < params.pedestrians; ++k) {
    AgentPath agent;
    const double o = (k % 2 == 0 ? 1.0 : -1.0) * (params.sidewalk_offset - 0.8);
    agent.waypoints = RoundedRectangle(hx + o, hy + o, std::max(r + o, 1.0));
    if (k % 2 == 1) std::reverse(agent.waypoints.begin(), agent.waypoints.end());
    agent.speed = uniform(1.0, 1.6);
    agent.label = params.moving_labels_distinct ? labels::kMovingPerson : labels::kPerson;
    agent.length = 0.6;
    agent.width = 0.6;
    world.agents.push_back(agent);
  }

  world.route.waypoints =
      RoundedRectangle(hx + params.lane_offset, hy + params.lane_offset, r + params.lane_offset);
  world.route.closed = true;
  world.route.speed = params.robot_speed;
  return world;
}

}  // namespace dynloc::sim
