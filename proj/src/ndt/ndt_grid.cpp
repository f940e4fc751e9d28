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

#include "dynloc/ndt/ndt_grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "dynloc/core/error.hpp"

namespace dynloc::ndt {

GridGeometry::GridGeometry(double resolution, const Eigen::Vector2d& origin,
                           const Eigen::Vector2d& extent)
    : resolution_(resolution), origin_(origin) {
  if (!(resolution > 0.0)) throw ConfigError("grid resolution must be positive");
  if (!(extent.x() > 0.0 && extent.y() > 0.0)) throw ConfigError("grid extent must be positive");
  // Tolerate extents that are an integer multiple of the resolution up to
  // rounding noise.
  cols_ = static_cast<int>(std::ceil(extent.x() / resolution - 1e-9));
  rows_ = static_cast<int>(std::ceil(extent.y() / resolution - 1e-9));
}

GridGeometry::GridGeometry(double resolution, const Eigen::Vector2d& origin, int cols, int rows)
    : resolution_(resolution), origin_(origin), cols_(cols), rows_(rows) {
  if (!(resolution > 0.0)) throw ConfigError("grid resolution must be positive");
  if (cols <= 0 || rows <= 0) throw ConfigError("grid dimensions must be positive");
}

std::optional<CellIndex> GridGeometry::CellOf(const Eigen::Vector2d& p) const {
  const double fx = std::floor((p.x() - origin_.x()) / resolution_);
  const double fy = std::floor((p.y() - origin_.y()) / resolution_);
  if (!(fx >= 0.0 && fy >= 0.0 && fx < cols_ && fy < rows_)) return std::nullopt;
  return CellIndex{static_cast<int>(fx), static_cast<int>(fy)};
}

NdtGrid::NdtGrid(const GridGeometry& geometry, const OccupancyParams& occupancy)
    : geometry_(geometry), occupancy_(occupancy), index_(geometry.cell_capacity(), -1) {
  if (!(occupancy.l_min <= 0.0 && occupancy.l_max >= 0.0)) {
    throw ConfigError("occupancy clamp range must contain 0");
  }
}

const NdtCell* NdtGrid::Find(const CellIndex& c) const {
  if (!geometry_.Contains(c)) return nullptr;
  const std::int32_t slot = index_[geometry_.Linear(c)];
  return slot < 0 ? nullptr : &cells_[static_cast<std::size_t>(slot)];
}

NdtCell& NdtGrid::Touch(const CellIndex& c) {
  std::int32_t& slot = index_[geometry_.Linear(c)];
  if (slot < 0) {
    slot = static_cast<std::int32_t>(cells_.size());
    cells_.emplace_back();
    keys_.push_back(c);
  }
  return cells_[static_cast<std::size_t>(slot)];
}

void NdtGrid::InsertPoints(std::span<const Eigen::Vector2d> points) {
  for (const Eigen::Vector2d& p : points) {
    const auto c = geometry_.CellOf(p);
    if (!c) {
      ++dropped_points_;
      continue;
    }
    Touch(*c).Add(p);
  }
}

void NdtGrid::AddLogOdds(const CellIndex& c, double delta) {
  NdtCell& cell = Touch(c);
  cell.log_odds = std::clamp(cell.log_odds + delta, occupancy_.l_min, occupancy_.l_max);
}

void NdtGrid::UpdateOccupancy(const Eigen::Vector2d& sensor_origin,
                              std::span<const Eigen::Vector2d> endpoints) {
  if (!geometry_.ContainsPoint(sensor_origin)) {
    throw ConfigError("sensor origin lies outside the grid extent");
  }
  const double l_hit = occupancy_.l_hit();
  const double l_miss = occupancy_.l_miss();
  const double res = geometry_.resolution();
  const Eigen::Vector2d start = (sensor_origin - geometry_.origin()) / res;
  const CellIndex start_cell = geometry_.UncheckedCellOf(sensor_origin);

  for (const Eigen::Vector2d& endpoint : endpoints) {
    const Eigen::Vector2d end = (endpoint - geometry_.origin()) / res;
    const CellIndex end_cell = geometry_.UncheckedCellOf(endpoint);
    const Eigen::Vector2d dir = end - start;

    // Amanatides-Woo traversal in cell units.
    const int step_x = end_cell.i > start_cell.i ? 1 : (end_cell.i < start_cell.i ? -1 : 0);
    const int step_y = end_cell.j > start_cell.j ? 1 : (end_cell.j < start_cell.j ? -1 : 0);
    int remaining_x = std::abs(end_cell.i - start_cell.i);
    int remaining_y = std::abs(end_cell.j - start_cell.j);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    double t_max_x = kInf;
    double t_delta_x = kInf;
    if (step_x != 0) {
      const double boundary = start_cell.i + (step_x > 0 ? 1 : 0);
      t_max_x = (boundary - start.x()) / dir.x();
      t_delta_x = 1.0 / std::abs(dir.x());
    }
    double t_max_y = kInf;
    double t_delta_y = kInf;
    if (step_y != 0) {
      const double boundary = start_cell.j + (step_y > 0 ? 1 : 0);
      t_max_y = (boundary - start.y()) / dir.y();
      t_delta_y = 1.0 / std::abs(dir.y());
    }

    CellIndex cell = start_cell;
    while (remaining_x + remaining_y > 0) {
      if (geometry_.Contains(cell)) AddLogOdds(cell, l_miss);
      const bool advance_x =
          remaining_y == 0 || (remaining_x > 0 && t_max_x < t_max_y);
      if (advance_x) {
        cell.i += step_x;
        t_max_x += t_delta_x;
        --remaining_x;
      } else {
        cell.j += step_y;
        t_max_y += t_delta_y;
        --remaining_y;
      }
    }
    if (geometry_.Contains(end_cell)) AddLogOdds(end_cell, l_hit);
  }
}

std::vector<std::pair<CellIndex, const NdtCell*>> NdtGrid::SortedCells() const {
  std::vector<std::pair<CellIndex, const NdtCell*>> out;
  out.reserve(cells_.size());
  for (std::size_t k = 0; k < cells_.size(); ++k) out.emplace_back(keys_[k], &cells_[k]);
  std::sort(out.begin(), out.end(), [this](const auto& a, const auto& b) {
    return geometry_.Linear(a.first) < geometry_.Linear(b.first);
  });
  return out;
}

bool NdtGrid::SameContents(const NdtGrid& other) const {
  if (!(geometry_ == other.geometry_) || !(occupancy_ == other.occupancy_) ||
      cells_.size() != other.cells_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const NdtCell* theirs = other.Find(keys_[k]);
    if (theirs == nullptr || !(*theirs == cells_[k])) return false;
  }
  return true;
}

}  // namespace dynloc::ndt
