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

#ifndef DYNLOC_IO_TRAJECTORY_IO_HPP_
#define DYNLOC_IO_TRAJECTORY_IO_HPP_

#include <iosfwd>
#include <string>

#include "dynloc/core/session.hpp"

namespace dynloc::io {

struct EstimatedTrajectory {
  Trajectory estimated;
  Trajectory ground_truth;
};

// CSV with header timestamp,est_x,est_y,est_psi,gt_x,gt_y,gt_psi. Reals are
// printed with 17 significant digits and read back exactly.
void WriteTrajectoryCsv(std::ostream& out, const EstimatedTrajectory& trajectory);
EstimatedTrajectory ParseTrajectoryCsv(const std::string& text);

void WriteTrajectoryFile(const std::string& path, const EstimatedTrajectory& trajectory);
EstimatedTrajectory ReadTrajectoryFile(const std::string& path);

}  // namespace dynloc::io

#endif  // DYNLOC_IO_TRAJECTORY_IO_HPP_
