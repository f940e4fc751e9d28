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

#include "dynloc/ndt/ndt_cell.hpp"

#include <algorithm>

#include "Eigen/Eigenvalues"

namespace dynloc::ndt {

std::optional<Eigen::Vector2d> NdtCell::Mean() const {
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<Eigen::Matrix2d> NdtCell::Covariance(std::uint32_t min_points) const {
  if (count < std::max<std::uint32_t>(2, min_points)) return std::nullopt;
  const double n = static_cast<double>(count);
  Eigen::Matrix2d cov = (outer_sum - sum * sum.transpose() / n) / (n - 1.0);
  cov(0, 1) = cov(1, 0) = 0.5 * (cov(0, 1) + cov(1, 0));
  return cov;
}

std::optional<Eigen::Matrix2d> RegularizeCovariance(const Eigen::Matrix2d& cov,
                                                    double eigen_floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver;
  solver.computeDirect(cov);
  Eigen::Vector2d values = solver.eigenvalues();  // ascending
  const double largest = values(1);
  if (!(largest > 0.0)) return std::nullopt;
  const double floor = eigen_floor * largest;
  values(0) = std::max(values(0), floor);
  const Eigen::Matrix2d& vectors = solver.eigenvectors();
  Eigen::Matrix2d out = vectors * values.asDiagonal() * vectors.transpose();
  out(0, 1) = out(1, 0) = 0.5 * (out(0, 1) + out(1, 0));
  return out;
}

std::optional<GaussianComponent> ToComponent(const NdtCell& cell, const CellValidity& validity) {
  const auto cov = cell.Covariance(validity.min_points);
  if (!cov) return std::nullopt;
  const auto regularized = RegularizeCovariance(*cov, validity.eigen_floor);
  if (!regularized) return std::nullopt;
  GaussianComponent out;
  out.mean = cell.sum / static_cast<double>(cell.count);
  out.cov = *regularized;
  out.weight = static_cast<double>(cell.count);
  return out;
}

}  // namespace dynloc::ndt
