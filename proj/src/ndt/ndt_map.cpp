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

#include "dynloc/ndt/ndt_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dynloc::ndt {

NdtMap::NdtMap(const NdtGrid& grid, const QueryParams& params)
    : geometry_(grid.geometry()), index_(grid.geometry().cell_capacity(), -1) {
  for (const auto& [c, cell] : grid.SortedCells()) {
    if (cell->log_odds < params.occupancy_threshold) continue;
    const auto component = ToComponent(*cell, params.validity);
    if (!component) continue;
    index_[geometry_.Linear(c)] = static_cast<std::int32_t>(components_.size());
    components_.push_back(*component);
    packed_.push_back({component->mean.x(), component->mean.y(), component->cov(0, 0),
                       component->cov(0, 1), component->cov(1, 1)});
  }
}

const GaussianComponent* NdtMap::ComponentAt(const CellIndex& c) const {
  if (!geometry_.Contains(c)) return nullptr;
  const std::int32_t slot = index_[geometry_.Linear(c)];
  return slot < 0 ? nullptr : &components_[static_cast<std::size_t>(slot)];
}

const GaussianComponent* NdtMap::ComponentAtPoint(const Eigen::Vector2d& p) const {
  const auto c = geometry_.CellOf(p);
  return c ? ComponentAt(*c) : nullptr;
}

double L2Score(const NdtMap& map, std::span<const GaussianComponent> scan, const Pose2& pose,
               const L2Params& params, ScoreDiagnostics* diagnostics) {
  if (scan.empty() || map.components_.empty()) return 0.0;
  const GridGeometry& g = map.geometry_;
  const double inv_res = 1.0 / g.resolution();
  const double ox = g.origin().x();
  const double oy = g.origin().y();
  const int cols = g.cols();
  const int rows = g.rows();
  const double c = std::cos(pose.psi());
  const double s = std::sin(pose.psi());
  const double cc = c * c;
  const double ss = s * s;
  const double cs = c * s;
  const double half_d2 = 0.5 * params.d2;

  double total = 0.0;
  for (const GaussianComponent& comp : scan) {
    const double mx = pose.x() + c * comp.mean.x() - s * comp.mean.y();
    const double my = pose.y() + s * comp.mean.x() + c * comp.mean.y();
    const double a = comp.cov(0, 0);
    const double b = comp.cov(0, 1);
    const double d = comp.cov(1, 1);
    const double rxx = cc * a - 2.0 * cs * b + ss * d;
    const double rxy = cs * (a - d) + (cc - ss) * b;
    const double ryy = ss * a + 2.0 * cs * b + cc * d;

    const int ci = static_cast<int>(std::floor((mx - ox) * inv_res));
    const int cj = static_cast<int>(std::floor((my - oy) * inv_res));
    double best = 0.0;
    for (int dj = -1; dj <= 1; ++dj) {
      const int j = cj + dj;
      if (j < 0 || j >= rows) continue;
      for (int di = -1; di <= 1; ++di) {
        const int i = ci + di;
        if (i < 0 || i >= cols) continue;
        const std::int32_t slot =
            map.index_[static_cast<std::size_t>(j) * static_cast<std::size_t>(cols) +
                       static_cast<std::size_t>(i)];
        if (slot < 0) continue;
        const NdtMap::Packed& m = map.packed_[static_cast<std::size_t>(slot)];
        const double sxx = rxx + m.cxx;
        const double sxy = rxy + m.cxy;
        const double syy = ryy + m.cyy;
        const double det = sxx * syy - sxy * sxy;
        if (!(det > std::numeric_limits<double>::min())) {
          if (diagnostics != nullptr) ++diagnostics->singular_pairs;
          continue;
        }
        const double ux = mx - m.mx;
        const double uy = my - m.my;
        const double q = (syy * ux * ux - 2.0 * sxy * ux * uy + sxx * uy * uy) / det;
        best = std::max(best, params.d1 * std::exp(-half_d2 * q));
      }
    }
    total += best;
  }
  return total / static_cast<double>(scan.size());
}

std::vector<GaussianComponent> RasterizeScan(std::span<const Eigen::Vector2d> points,
                                             double resolution, const CellValidity& validity) {
  if (points.empty()) return {};
  double reach = 0.0;
  for (const Eigen::Vector2d& p : points) reach = std::max(reach, p.cwiseAbs().maxCoeff());
  // Odd number of cells with the sensor in the middle of the central one.
  const int half = static_cast<int>(std::floor(reach / resolution + 0.5)) + 1;
  const Eigen::Vector2d origin = Eigen::Vector2d::Constant(-(half + 0.5) * resolution);
  NdtGrid grid(GridGeometry(resolution, origin, 2 * half + 1, 2 * half + 1));
  grid.InsertPoints(points);

  std::vector<GaussianComponent> out;
  for (const auto& [c, cell] : grid.SortedCells()) {
    if (auto component = ToComponent(*cell, validity)) out.push_back(*component);
  }
  return out;
}

}  // namespace dynloc::ndt
