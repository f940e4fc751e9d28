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

#ifndef DYNLOC_NDT_NDT_MAP_HPP_
#define DYNLOC_NDT_NDT_MAP_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "dynloc/core/pose2.hpp"
#include "dynloc/ndt/ndt_cell.hpp"
#include "dynloc/ndt/ndt_grid.hpp"

namespace dynloc::ndt {

// Constants of the L2 distribution-to-distribution likelihood.
struct L2Params {
  double d1 = 1.0;
  double d2 = 0.05;
  friend bool operator==(const L2Params&, const L2Params&) = default;
};

struct QueryParams {
  CellValidity validity;
  // Cells whose log-odds fall below this value are not part of the map.
  double occupancy_threshold = 0.0;
};

struct ScoreDiagnostics {
  std::size_t singular_pairs = 0;
};

// Immutable, queryable view of a finished NdtGrid: one Gaussian component per
// valid occupied cell. Safe to share between threads.
class NdtMap {
 public:
  NdtMap() = default;
  NdtMap(const NdtGrid& grid, const QueryParams& params);

  const GridGeometry& geometry() const { return geometry_; }
  std::size_t component_count() const { return components_.size(); }
  const std::vector<GaussianComponent>& components() const { return components_; }

  // Component stored for cell `c`, or nullptr.
  const GaussianComponent* ComponentAt(const CellIndex& c) const;
  const GaussianComponent* ComponentAtPoint(const Eigen::Vector2d& p) const;

 private:
  friend double L2Score(const NdtMap&, std::span<const GaussianComponent>, const Pose2&,
                        const L2Params&, ScoreDiagnostics*);

  struct Packed {
    double mx, my, cxx, cxy, cyy;
  };

  GridGeometry geometry_;
  std::vector<std::int32_t> index_;
  std::vector<Packed> packed_;
  std::vector<GaussianComponent> components_;
};

// Mean over scan components of their best match among the 3x3 map cells
// around the transformed component mean, where a pair scores
// d1 * exp(-d2/2 * mu^T (R S_i R^T + S_j)^-1 mu). Components without a valid
// neighbor contribute zero; an empty scan scores zero. Result lies in [0, d1].
double L2Score(const NdtMap& map, std::span<const GaussianComponent> scan, const Pose2& pose,
               const L2Params& params, ScoreDiagnostics* diagnostics = nullptr);

// Builds a sensor-centred grid at `resolution` and returns its valid cells as
// regularized Gaussian components, ordered by cell.
std::vector<GaussianComponent> RasterizeScan(std::span<const Eigen::Vector2d> points,
                                             double resolution,
                                             const CellValidity& validity = {});

}  // namespace dynloc::ndt

#endif  // DYNLOC_NDT_NDT_MAP_HPP_
