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

#ifndef DYNLOC_SIM_WORLD_HPP_
#define DYNLOC_SIM_WORLD_HPP_

#include <cstdint>
#include <vector>

#include "Eigen/Core"
#include "dynloc/core/labels.hpp"
#include "dynloc/core/pose2.hpp"

namespace dynloc::sim {

// Polyline (closed for polygons) emitting a single label.
struct StaticShape {
  std::vector<Eigen::Vector2d> vertices;
  bool closed = true;
  Label label = labels::kBuilding;
};

struct ParkingSlot {
  Pose2 pose;  // car centre and heading
  double occupancy_prob = 0.7;  // chance of a car during the mapping session
};

// Moving box following a waypoint path at constant speed.
struct AgentPath {
  std::vector<Eigen::Vector2d> waypoints;
  bool closed = true;
  double speed = 5.0;  // m/s
  Label label = labels::kMovingCar;
  double length = 4.5;
  double width = 1.8;
};

struct Route {
  std::vector<Eigen::Vector2d> waypoints;
  bool closed = true;
  double speed = 5.0;  // m/s
};

struct WorldSpec {
  Eigen::Vector2d bounds_min = Eigen::Vector2d(-100.0, -100.0);
  Eigen::Vector2d bounds_max = Eigen::Vector2d(100.0, 100.0);
  std::vector<StaticShape> static_shapes;
  std::vector<ParkingSlot> parking_slots;
  std::vector<AgentPath> agents;
  Route route;
  double car_length = 4.5;
  double car_width = 1.8;
};

// Parameters of the procedural city block generator.
struct CityParams {
  std::uint64_t seed = 0;
  Eigen::Vector2d bounds_min = Eigen::Vector2d(-100.0, -100.0);
  Eigen::Vector2d bounds_max = Eigen::Vector2d(100.0, 100.0);
  double block_half_x = 45.0;   // m, half size of the road loop centreline
  double block_half_y = 35.0;
  double size_jitter = 5.0;     // m, uniform jitter on the half sizes
  double corner_radius = 10.0;  // m, centreline
  double lane_offset = 2.0;     // m, robot lane (outer) and traffic lane (inner)
  double parking_offset = 4.6;  // m, parked car centres
  double facade_offset = 9.0;   // m, closest building facade
  double sidewalk_offset = 7.5; // m, pedestrians and poles
  std::size_t parking_slots = 40;
  double slot_occupancy = 0.7;
  std::size_t moving_cars = 4;
  std::size_t pedestrians = 2;
  double robot_speed = 8.0;     // m/s
  // Label used for moving agents: the 25x moving classes when true, the
  // corresponding non-moving class otherwise.
  bool moving_labels_distinct = true;
};

// A rounded-rectangle street block: buildings on both sides of a loop road,
// poles and trees along the sidewalks, parking along the curbs, traffic in the
// inner lane and pedestrians on the sidewalks. The robot drives the outer
// lane counter-clockwise.
WorldSpec MakeCityWorld(const CityParams& params);

// Closed rounded rectangle centred at the origin.
std::vector<Eigen::Vector2d> RoundedRectangle(double half_x, double half_y, double radius,
                                              int points_per_corner = 24);

// Pose on a polyline at arc length `s` (wrapped for closed paths, clamped
// otherwise), heading along the current segment.
Pose2 PoseAlong(const std::vector<Eigen::Vector2d>& waypoints, bool closed, double s);
double PathLength(const std::vector<Eigen::Vector2d>& waypoints, bool closed);

}  // namespace dynloc::sim

#endif  // DYNLOC_SIM_WORLD_HPP_
