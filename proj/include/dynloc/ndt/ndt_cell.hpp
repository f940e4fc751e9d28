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

#ifndef DYNLOC_NDT_NDT_CELL_HPP_
#define DYNLOC_NDT_NDT_CELL_HPP_

#include <cstdint>
#include <optional>

#include "Eigen/Core"

namespace dynloc::ndt {

// Gaussian sufficient statistics of the points that fell into one cell, plus
// the occupancy log-odds of the cell.
struct NdtCell {
  std::uint32_t count = 0;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  Eigen::Matrix2d outer_sum = Eigen::Matrix2d::Zero();
  double log_odds = 0.0;

  void Add(const Eigen::Vector2d& p) {
    ++count;
    sum += p;
    outer_sum += p * p.transpose();
  }

  // Defined for count >= 1.
  std::optional<Eigen::Vector2d> Mean() const;

  // Unbiased sample covariance, defined for count >= max(2, min_points).
  // Not regularized.
  std::optional<Eigen::Matrix2d> Covariance(std::uint32_t min_points) const;

  friend bool operator==(const NdtCell&, const NdtCell&) = default;
};

struct GaussianComponent {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();
  double weight = 0.0;  // number of points
};

// Criteria for turning a cell into a Gaussian component.
struct CellValidity {
  std::uint32_t min_points = 3;
  // Smallest eigenvalue is clamped to at least eigen_floor * largest one.
  double eigen_floor = 1e-3;
};

// Clamps the eigenvalues of a symmetric covariance from below. Returns nullopt
// when the matrix has no positive eigenvalue (all samples identical).
std::optional<Eigen::Matrix2d> RegularizeCovariance(const Eigen::Matrix2d& cov,
                                                    double eigen_floor);

// Mean and regularized covariance of the cell, or nullopt if the cell is not
// valid under `validity`.
std::optional<GaussianComponent> ToComponent(const NdtCell& cell, const CellValidity& validity);

}  // namespace dynloc::ndt

#endif  // DYNLOC_NDT_NDT_CELL_HPP_
