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

#include "dynloc/ndt/map_builder.hpp"

#include "dynloc/core/error.hpp"

namespace dynloc::ndt {

NdtGrid BuildMap(const SessionLog& log, const LabelPartition& partition, const ClassSet& delta_m,
                 const MapConfig& config, const filters::FilterConfig& filter_config) {
  if (log.empty()) throw EmptyInputError("cannot build a map from an empty session");
  const filters::MethodSpec route = filters::MethodSpec::FromDelta(delta_m);

  NdtGrid grid(config.geometry(), config.occupancy);
  filters::TrackState tracks;
  for (const SessionRecord& record : log.records) {
    filters::Selection selected = filters::Select(record.scan, record.ground_truth, tracks,
                                                  partition, route, filter_config);
    tracks = std::move(selected.state);
    const std::vector<Eigen::Vector2d> world =
        TransformedPositions(selected.scan, record.ground_truth);
    grid.InsertPoints(world);
    grid.UpdateOccupancy(record.ground_truth.translation(), world);
  }
  return grid;
}

}  // namespace dynloc::ndt
