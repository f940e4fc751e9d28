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

#include "dynloc/io/map_io.hpp"

#include "binary.hpp"
#include "dynloc/core/error.hpp"

namespace dynloc::io {

namespace {

constexpr std::string_view kMagic("DLNDTMAP", 8);
// i, j, count, sum (2), outer_sum (xx, xy, yy), log_odds
constexpr std::size_t kCellBytes = 4 + 4 + 4 + 2 * 8 + 3 * 8 + 8;

}  // namespace

std::string EncodeMap(const ndt::NdtGrid& grid) {
  const ndt::GridGeometry& g = grid.geometry();
  const ndt::OccupancyParams& occ = grid.occupancy();
  internal::Writer w;
  w.Raw(kMagic);
  w.U32(kMapFormatVersion);
  w.F64(g.resolution());
  w.F64(g.origin().x());
  w.F64(g.origin().y());
  w.I32(g.cols());
  w.I32(g.rows());
  w.F64(occ.p_hit);
  w.F64(occ.p_miss);
  w.F64(occ.l_min);
  w.F64(occ.l_max);
  const auto cells = grid.SortedCells();
  w.U64(cells.size());
  for (const auto& [index, cell] : cells) {
    w.I32(index.i);
    w.I32(index.j);
    w.U32(cell->count);
    w.F64(cell->sum.x());
    w.F64(cell->sum.y());
    w.F64(cell->outer_sum(0, 0));
    w.F64(cell->outer_sum(0, 1));
    w.F64(cell->outer_sum(1, 1));
    w.F64(cell->log_odds);
  }
  return std::move(w.bytes());
}

ndt::NdtGrid DecodeMap(const std::string& bytes) {
  internal::Reader r(bytes);
  if (r.remaining() < kMagic.size() || r.Raw(kMagic.size()) != kMagic) {
    throw FormatError("not a map file");
  }
  const std::uint32_t version = r.U32();
  if (version != kMapFormatVersion) {
    throw VersionMismatchError("unsupported map format version " + std::to_string(version));
  }
  const double resolution = r.F64();
  const double ox = r.F64();
  const double oy = r.F64();
  const std::int32_t cols = r.I32();
  const std::int32_t rows = r.I32();
  if (!(resolution > 0.0) || cols < 0 || rows < 0) throw FormatError("invalid map geometry");
  ndt::OccupancyParams occ;
  occ.p_hit = r.F64();
  occ.p_miss = r.F64();
  occ.l_min = r.F64();
  occ.l_max = r.F64();
  const std::uint64_t count = r.U64();
  if (count > r.remaining() / kCellBytes) {
    throw TruncatedFileError("file too short for " + std::to_string(count) + " cells");
  }
  const ndt::GridGeometry geometry(resolution, Eigen::Vector2d(ox, oy), cols, rows);
  ndt::NdtGrid grid(geometry, occ);
  for (std::uint64_t k = 0; k < count; ++k) {
    ndt::CellIndex index;
    index.i = r.I32();
    index.j = r.I32();
    if (!geometry.Contains(index)) throw FormatError("cell outside the map extent");
    if (grid.Find(index) != nullptr) throw FormatError("duplicate cell");
    ndt::NdtCell& cell = grid.Touch(index);
    cell.count = r.U32();
    cell.sum.x() = r.F64();
    cell.sum.y() = r.F64();
    cell.outer_sum(0, 0) = r.F64();
    cell.outer_sum(0, 1) = r.F64();
    cell.outer_sum(1, 0) = cell.outer_sum(0, 1);
    cell.outer_sum(1, 1) = r.F64();
    cell.log_odds = r.F64();
  }
  if (r.remaining() != 0) {
    throw CountMismatchError("data after the declared " + std::to_string(count) + " cells");
  }
  return grid;
}

void WriteMap(const std::string& path, const ndt::NdtGrid& grid) {
  internal::WriteFile(path, EncodeMap(grid));
}

ndt::NdtGrid ReadMap(const std::string& path) { return DecodeMap(internal::ReadFile(path)); }

}  // namespace dynloc::io
