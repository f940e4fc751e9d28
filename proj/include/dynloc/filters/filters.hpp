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

#ifndef DYNLOC_FILTERS_FILTERS_HPP_
#define DYNLOC_FILTERS_FILTERS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "dynloc/core/labels.hpp"
#include "dynloc/core/pose2.hpp"
#include "dynloc/core/scan.hpp"

namespace dynloc::filters {

struct FilterConfig {
  double cluster_dist = 0.5;      // m, single-linkage connection distance
  std::size_t min_cluster_size = 5;
  double speed_threshold = 0.5;   // m/s
  double gate_radius = 2.0;       // m, track association gate
  double voxel_leaf = 0.2;        // m, subsampling before clustering

  // Throws ConfigError unless every field is positive.
  void Validate() const;
  friend bool operator==(const FilterConfig&, const FilterConfig&) = default;
};

// Measurement selection route. Each route fixes the filters applied and the
// resulting delta_z.
enum class FilterRoute : std::uint8_t {
  kBaseline,  // no filter, {S,E,D}
  kFiltered,  // dynamic filter, {S,E}
  kStatic,    // semantic filter, {S}
  kCombined,  // dynamic filter then semantic filter, {S}
};

struct MethodSpec {
  FilterRoute route = FilterRoute::kBaseline;

  std::string_view name() const;
  ClassSet delta() const;
  bool uses_dynamic_filter() const {
    return route == FilterRoute::kFiltered || route == FilterRoute::kCombined;
  }
  bool uses_semantic_filter() const {
    return route == FilterRoute::kStatic || route == FilterRoute::kCombined;
  }

  // Accepts exactly "baseline", "filtered", "static", "combined".
  static MethodSpec FromName(std::string_view name);
  // {S,E,D} -> baseline, {S,E} -> filtered, {S} -> static or combined
  // depending on `combined_route`. Other sets throw ConfigError.
  static MethodSpec FromDelta(const ClassSet& delta, bool combined_route = false);
  static const std::vector<MethodSpec>& All();

  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

// Subscan whose labels map to a class in `keep`; order preserved.
LabeledScan SemanticFilter(const LabeledScan& scan, const LabelPartition& partition,
                           const ClassSet& keep);

struct GroundSplit {
  LabeledScan ground;
  LabeledScan rest;
};
// Splits off points whose label is one of the partition's ground labels.
GroundSplit RemoveGround(const LabeledScan& scan, const LabelPartition& partition);

struct Cluster {
  std::vector<std::size_t> point_indices;  // ascending, into the clustered scan
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  Label majority_label = labels::kUnlabeled;
};

// Single-linkage Euclidean clustering (points within cluster_dist are
// connected). Components smaller than min_cluster_size are discarded. The
// majority label breaks ties towards the smaller id. Clusters are ordered by
// their first point index.
std::vector<Cluster> ClusterPoints(const LabeledScan& points, const FilterConfig& config);

struct Track {
  std::uint64_t id = 0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();  // world frame
  double timestamp = 0.0;
  double speed = 0.0;  // m/s, 0 for freshly spawned tracks
};

struct TrackState {
  std::vector<Track> tracks;
  std::optional<double> last_timestamp;
  std::uint64_t next_id = 0;
};

struct DynamicFilterResult {
  LabeledScan filtered;
  TrackState state;
  // Indices (into the input scan) of the removed points, ascending.
  std::vector<std::size_t> removed_indices;
};

// Removes points of clusters that move faster than speed_threshold and whose
// majority label is movable. Ground points and points outside any cluster are
// kept. Throws OutOfOrderError for non-increasing timestamps.
DynamicFilterResult DynamicFilter(const LabeledScan& scan, const Pose2& sensor_pose,
                                  const TrackState& state, const LabelPartition& partition,
                                  const FilterConfig& config);

struct Selection {
  LabeledScan scan;
  TrackState state;
};

// Applies the filters of `method` to `scan`. The track state is only advanced
// by routes that run the dynamic filter.
Selection Select(const LabeledScan& scan, const Pose2& sensor_pose, const TrackState& state,
                 const LabelPartition& partition, const MethodSpec& method,
                 const FilterConfig& config);

}  // namespace dynloc::filters

#endif  // DYNLOC_FILTERS_FILTERS_HPP_
