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

#ifndef DYNLOC_NDT_MAP_BUILDER_HPP_
#define DYNLOC_NDT_MAP_BUILDER_HPP_

#include "Eigen/Core"
#include "dynloc/core/labels.hpp"
#include "dynloc/core/session.hpp"
#include "dynloc/filters/filters.hpp"
#include "dynloc/ndt/ndt_grid.hpp"
#include "dynloc/ndt/ndt_map.hpp"

namespace dynloc::ndt {

struct MapConfig {
  double resolution = 0.6;
  Eigen::Vector2d origin = Eigen::Vector2d(-100.0, -100.0);
  Eigen::Vector2d extent = Eigen::Vector2d(200.0, 200.0);
  OccupancyParams occupancy;
  QueryParams query;

  GridGeometry geometry() const { return GridGeometry(resolution, origin, extent); }
};

// Fuses a session into an NDT occupancy grid using ground-truth poses. Each
// frame is first reduced to the classes in `delta_m` ({S} uses the semantic
// filter), then its points update both the Gaussian statistics and the
// occupancy of the cells. Throws EmptyInputError for an empty log.
NdtGrid BuildMap(const SessionLog& log, const LabelPartition& partition, const ClassSet& delta_m,
                 const MapConfig& config, const filters::FilterConfig& filter_config = {});

}  // namespace dynloc::ndt

#endif  // DYNLOC_NDT_MAP_BUILDER_HPP_
