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

#ifndef DYNLOC_NDT_NDT_GRID_HPP_
#define DYNLOC_NDT_NDT_GRID_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "dynloc/ndt/ndt_cell.hpp"

namespace dynloc::ndt {

struct CellIndex {
  int i = 0;  // column, along x
  int j = 0;  // row, along y
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Fixed-resolution axis-aligned grid layout.
class GridGeometry {
 public:
  GridGeometry() = default;
  // The number of columns and rows is ceil(extent / resolution).
  GridGeometry(double resolution, const Eigen::Vector2d& origin, const Eigen::Vector2d& extent);
  GridGeometry(double resolution, const Eigen::Vector2d& origin, int cols, int rows);

  double resolution() const { return resolution_; }
  const Eigen::Vector2d& origin() const { return origin_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }
  Eigen::Vector2d extent() const { return {cols_ * resolution_, rows_ * resolution_}; }
  std::size_t cell_capacity() const {
    return static_cast<std::size_t>(cols_) * static_cast<std::size_t>(rows_);
  }

  // floor((p - origin) / resolution), regardless of the extent.
  CellIndex UncheckedCellOf(const Eigen::Vector2d& p) const {
    return {static_cast<int>(std::floor((p.x() - origin_.x()) / resolution_)),
            static_cast<int>(std::floor((p.y() - origin_.y()) / resolution_))};
  }
  std::optional<CellIndex> CellOf(const Eigen::Vector2d& p) const;
  bool Contains(const CellIndex& c) const {
    return c.i >= 0 && c.j >= 0 && c.i < cols_ && c.j < rows_;
  }
  bool ContainsPoint(const Eigen::Vector2d& p) const { return CellOf(p).has_value(); }
  std::size_t Linear(const CellIndex& c) const {
    return static_cast<std::size_t>(c.j) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c.i);
  }
  Eigen::Vector2d CellCenter(const CellIndex& c) const {
    return origin_ + resolution_ * Eigen::Vector2d(c.i + 0.5, c.j + 0.5);
  }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

 private:
  double resolution_ = 1.0;
  Eigen::Vector2d origin_ = Eigen::Vector2d::Zero();
  int cols_ = 0;
  int rows_ = 0;
};

// Inverse sensor model in log-odds form.
struct OccupancyParams {
  double p_hit = 0.7;
  double p_miss = 0.4;
  double l_min = -2.0;
  double l_max = 3.5;

  double l_hit() const { return std::log(p_hit / (1.0 - p_hit)); }
  double l_miss() const { return std::log(p_miss / (1.0 - p_miss)); }
  friend bool operator==(const OccupancyParams&, const OccupancyParams&) = default;
};

// NDT occupancy grid. Cells are allocated on first touch; a dense index table
// over the extent gives constant-time lookup.
class NdtGrid {
 public:
  NdtGrid() = default;
  explicit NdtGrid(const GridGeometry& geometry, const OccupancyParams& occupancy = {});

  const GridGeometry& geometry() const { return geometry_; }
  const OccupancyParams& occupancy() const { return occupancy_; }

  // Adds world-frame points to the statistics of their cells. Points outside
  // the extent are dropped and counted in dropped_points().
  void InsertPoints(std::span<const Eigen::Vector2d> points);

  // Casts one ray per endpoint from `sensor_origin`. Cells strictly traversed
  // before the endpoint cell receive l_miss, the endpoint cell receives l_hit.
  // Throws ConfigError when the origin lies outside the extent.
  void UpdateOccupancy(const Eigen::Vector2d& sensor_origin,
                       std::span<const Eigen::Vector2d> endpoints);

  const NdtCell* Find(const CellIndex& c) const;
  // Allocates the cell if needed. `c` must lie inside the extent.
  NdtCell& Touch(const CellIndex& c);

  std::size_t cell_count() const { return cells_.size(); }
  std::size_t dropped_points() const { return dropped_points_; }

  // Allocated cells ordered by (row, column).
  std::vector<std::pair<CellIndex, const NdtCell*>> SortedCells() const;

  // Same geometry, occupancy parameters and cell contents.
  bool SameContents(const NdtGrid& other) const;

 private:
  void AddLogOdds(const CellIndex& c, double delta);

  GridGeometry geometry_;
  OccupancyParams occupancy_;
  std::vector<std::int32_t> index_;  // linear cell -> slot in cells_, -1 if absent
  std::vector<NdtCell> cells_;
  std::vector<CellIndex> keys_;
  std::size_t dropped_points_ = 0;
};

}  // namespace dynloc::ndt

#endif  // DYNLOC_NDT_NDT_GRID_HPP_
