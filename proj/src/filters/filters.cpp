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

#include "dynloc/filters/filters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "dynloc/core/error.hpp"

namespace dynloc::filters {

namespace {

std::int64_t CellKey(std::int64_t i, std::int64_t j) {
  return (i << 32) ^ (j & 0xffffffffll);
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

Label ModalLabel(const std::map<Label, std::size_t>& histogram) {
  Label best = labels::kUnlabeled;
  std::size_t best_count = 0;
  for (const auto& [label, count] : histogram) {  // ascending label order
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

struct VoxelizedScan {
  LabeledScan voxels;
  std::vector<std::vector<std::size_t>> members;
};

VoxelizedScan Voxelize(const LabeledScan& scan, double leaf) {
  VoxelizedScan out;
  out.voxels.timestamp = scan.timestamp;
  std::unordered_map<std::int64_t, std::size_t> slots;
  for (std::size_t k = 0; k < scan.points.size(); ++k) {
    const LabeledPoint& p = scan.points[k];
    const auto key = CellKey(static_cast<std::int64_t>(std::floor(p.x / leaf)),
                             static_cast<std::int64_t>(std::floor(p.y / leaf)));
    auto [it, inserted] = slots.try_emplace(key, out.members.size());
    if (inserted) out.members.emplace_back();
    out.members[it->second].push_back(k);
  }
  out.voxels.points.reserve(out.members.size());
  for (const auto& members : out.members) {
    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    std::map<Label, std::size_t> histogram;
    for (std::size_t k : members) {
      centroid += scan.points[k].position();
      ++histogram[scan.points[k].label];
    }
    centroid /= static_cast<double>(members.size());
    out.voxels.points.push_back({centroid.x(), centroid.y(), ModalLabel(histogram)});
  }
  return out;
}

}  // namespace

void FilterConfig::Validate() const {
  if (!(cluster_dist > 0.0) || min_cluster_size == 0 || !(speed_threshold > 0.0) ||
      !(gate_radius > 0.0) || !(voxel_leaf > 0.0)) {
    throw ConfigError("filter parameters must all be positive");
  }
}

std::string_view MethodSpec::name() const {
  switch (route) {
    case FilterRoute::kBaseline:
      return "baseline";
    case FilterRoute::kFiltered:
      return "filtered";
    case FilterRoute::kStatic:
      return "static";
    case FilterRoute::kCombined:
      return "combined";
  }
  return "?";
}

ClassSet MethodSpec::delta() const {
  switch (route) {
    case FilterRoute::kBaseline:
      return ClassSet::All();
    case FilterRoute::kFiltered:
      return {DynamicClass::kStatic, DynamicClass::kSemiStatic};
    case FilterRoute::kStatic:
    case FilterRoute::kCombined:
      return {DynamicClass::kStatic};
  }
  return {};
}

MethodSpec MethodSpec::FromName(std::string_view name) {
  for (const MethodSpec& m : All()) {
    if (m.name() == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected baseline, filtered, static or combined)");
}

MethodSpec MethodSpec::FromDelta(const ClassSet& delta, bool combined_route) {
  if (delta == ClassSet::All()) return {FilterRoute::kBaseline};
  if (delta == ClassSet{DynamicClass::kStatic, DynamicClass::kSemiStatic}) {
    return {FilterRoute::kFiltered};
  }
  if (delta == ClassSet{DynamicClass::kStatic}) {
    return {combined_route ? FilterRoute::kCombined : FilterRoute::kStatic};
  }
  throw ConfigError("unsupported class selection " + delta.ToString());
}

const std::vector<MethodSpec>& MethodSpec::All() {
  static const std::vector<MethodSpec> kAll = {{FilterRoute::kBaseline},
                                               {FilterRoute::kFiltered},
                                               {FilterRoute::kStatic},
                                               {FilterRoute::kCombined}};
  return kAll;
}

LabeledScan SemanticFilter(const LabeledScan& scan, const LabelPartition& partition,
                           const ClassSet& keep) {
  LabeledScan out;
  out.timestamp = scan.timestamp;
  if (keep.empty()) return out;
  out.points.reserve(scan.points.size());
  for (const LabeledPoint& p : scan.points) {
    if (keep.Contains(partition.Classify(p.label))) out.points.push_back(p);
  }
  return out;
}

GroundSplit RemoveGround(const LabeledScan& scan, const LabelPartition& partition) {
  GroundSplit out;
  out.ground.timestamp = out.rest.timestamp = scan.timestamp;
  for (const LabeledPoint& p : scan.points) {
    (partition.IsGround(p.label) ? out.ground : out.rest).points.push_back(p);
  }
  return out;
}

std::vector<Cluster> ClusterPoints(const LabeledScan& points, const FilterConfig& config) {
  const std::size_t n = points.points.size();
  const double dist = config.cluster_dist;
  const double dist_sq = dist * dist;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
  buckets.reserve(n);
  std::vector<std::pair<std::int64_t, std::int64_t>> cells(n);
  for (std::size_t k = 0; k < n; ++k) {
    const LabeledPoint& p = points.points[k];
    cells[k] = {static_cast<std::int64_t>(std::floor(p.x / dist)),
                static_cast<std::int64_t>(std::floor(p.y / dist))};
    buckets[CellKey(cells[k].first, cells[k].second)].push_back(k);
  }

  DisjointSets sets(n);
  for (std::size_t k = 0; k < n; ++k) {
    const LabeledPoint& p = points.points[k];
    for (std::int64_t di = -1; di <= 1; ++di) {
      for (std::int64_t dj = -1; dj <= 1; ++dj) {
        auto it = buckets.find(CellKey(cells[k].first + di, cells[k].second + dj));
        if (it == buckets.end()) continue;
        for (std::size_t other : it->second) {
          if (other <= k) continue;
          const double dx = points.points[other].x - p.x;
          const double dy = points.points[other].y - p.y;
          if (dx * dx + dy * dy <= dist_sq) sets.Union(k, other);
        }
      }
    }
  }

  // Roots are the smallest member index, so iterating k in order yields
  // clusters ordered by first point and members in ascending order.
  std::vector<std::int64_t> slot(n, -1);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t root = sets.Find(k);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::int64_t>(components.size());
      components.emplace_back();
    }
    components[static_cast<std::size_t>(slot[root])].push_back(k);
  }

  std::vector<Cluster> out;
  for (auto& members : components) {
    if (members.size() < config.min_cluster_size) continue;
    Cluster cluster;
    std::map<Label, std::size_t> histogram;
    for (std::size_t k : members) {
      cluster.centroid += points.points[k].position();
      ++histogram[points.points[k].label];
    }
    cluster.centroid /= static_cast<double>(members.size());
    cluster.majority_label = ModalLabel(histogram);
    cluster.point_indices = std::move(members);
    out.push_back(std::move(cluster));
  }
  return out;
}

DynamicFilterResult DynamicFilter(const LabeledScan& scan, const Pose2& sensor_pose,
                                  const TrackState& state, const LabelPartition& partition,
                                  const FilterConfig& config) {
  if (state.last_timestamp && !(scan.timestamp > *state.last_timestamp)) {
    throw OutOfOrderError("dynamic filter received scan at t=" + std::to_string(scan.timestamp) +
                          " after t=" + std::to_string(*state.last_timestamp));
  }

  const VoxelizedScan voxelized = Voxelize(scan, config.voxel_leaf);
  LabeledScan non_ground;
  non_ground.timestamp = scan.timestamp;
  std::vector<std::size_t> voxel_of;  // non-ground point -> voxel
  for (std::size_t v = 0; v < voxelized.voxels.points.size(); ++v) {
    const LabeledPoint& p = voxelized.voxels.points[v];
    if (partition.IsGround(p.label)) continue;
    non_ground.points.push_back(p);
    voxel_of.push_back(v);
  }
  const std::vector<Cluster> clusters = ClusterPoints(non_ground, config);

  std::vector<Eigen::Vector2d> world_centroids;
  world_centroids.reserve(clusters.size());
  for (const Cluster& c : clusters) world_centroids.push_back(sensor_pose * c.centroid);

  // Greedy nearest-neighbour association, each cluster and track used once.
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    for (std::size_t t = 0; t < state.tracks.size(); ++t) {
      const double d = (world_centroids[k] - state.tracks[t].centroid).norm();
      if (d <= config.gate_radius) candidates.emplace_back(d, k, t);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<std::int64_t> match(clusters.size(), -1);
  std::vector<bool> track_used(state.tracks.size(), false);
  for (const auto& [d, k, t] : candidates) {
    if (match[k] >= 0 || track_used[t]) continue;
    match[k] = static_cast<std::int64_t>(t);
    track_used[t] = true;
  }

  DynamicFilterResult result;
  result.state.last_timestamp = scan.timestamp;
  result.state.next_id = state.next_id;
  std::vector<bool> remove(scan.points.size(), false);
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    Track track;
    track.centroid = world_centroids[k];
    track.timestamp = scan.timestamp;
    if (match[k] >= 0) {
      const Track& previous = state.tracks[static_cast<std::size_t>(match[k])];
      track.id = previous.id;
      const double dt = scan.timestamp - previous.timestamp;
      track.speed = dt > 0.0 ? (world_centroids[k] - previous.centroid).norm() / dt : 0.0;
      if (track.speed > config.speed_threshold &&
          partition.IsMovable(clusters[k].majority_label)) {
        for (std::size_t idx : clusters[k].point_indices) {
          for (std::size_t original : voxelized.members[voxel_of[idx]]) remove[original] = true;
        }
      }
    } else {
      track.id = result.state.next_id++;
    }
    result.state.tracks.push_back(track);
  }

  result.filtered.timestamp = scan.timestamp;
  result.filtered.points.reserve(scan.points.size());
  for (std::size_t k = 0; k < scan.points.size(); ++k) {
    if (remove[k]) {
      result.removed_indices.push_back(k);
    } else {
      result.filtered.points.push_back(scan.points[k]);
    }
  }
  return result;
}

Selection Select(const LabeledScan& scan, const Pose2& sensor_pose, const TrackState& state,
                 const LabelPartition& partition, const MethodSpec& method,
                 const FilterConfig& config) {
  Selection out{scan, state};
  if (method.uses_dynamic_filter()) {
    DynamicFilterResult r = DynamicFilter(scan, sensor_pose, state, partition, config);
    out.scan = std::move(r.filtered);
    out.state = std::move(r.state);
  }
  if (method.uses_semantic_filter()) {
    out.scan = SemanticFilter(out.scan, partition, {DynamicClass::kStatic});
  }
  return out;
}

}  // namespace dynloc::filters
