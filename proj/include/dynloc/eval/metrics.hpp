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

#ifndef DYNLOC_EVAL_METRICS_HPP_
#define DYNLOC_EVAL_METRICS_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "dynloc/core/pose2.hpp"
#include "dynloc/core/session.hpp"

namespace dynloc::eval {

struct AlignedPair {
  Trajectory estimated;  // already transformed by `alignment`
  Trajectory reference;
  Pose2 alignment;
};

// Least-squares rigid fit of the estimated positions onto the reference ones
// (no scale). With `estimate_rotation` false only the translation is fitted.
// Throws MismatchError unless both have the same length >= 2.
AlignedPair Align(const Trajectory& estimated, const Trajectory& reference,
                  bool estimate_rotation = true);

// Pairs the trajectories without transforming them.
AlignedPair Unaligned(const Trajectory& estimated, const Trajectory& reference);

// Per-frame translational error.
std::vector<double> AteErrors(const AlignedPair& pair);
double AteRmse(const AlignedPair& pair);

// Translational norm of (ref_i^-1 ref_i+k)^-1 (est_i^-1 est_i+k) for every i.
// Throws MismatchError unless the length exceeds delta_k >= 1.
std::vector<double> RpeErrors(const AlignedPair& pair, std::size_t delta_k = 1);
double RpeRmse(const AlignedPair& pair, std::size_t delta_k = 1);

double Rmse(const std::vector<double>& errors);

struct RunMetrics {
  std::string map_type;
  std::string method;
  double ate_rmse = 0.0;
  double rpe_rmse = 0.0;
};

// One row of the experiment table. Quartiles, min and max describe ATE.
struct SummaryRow {
  std::string map_type;
  std::string method;
  double ate_mean = 0.0;
  double ate_var = 0.0;  // sample variance, 0 for a single run
  double rpe_mean = 0.0;
  double rpe_var = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n_runs = 0;
};

// Groups runs by (map_type, method), in order of first appearance.
std::vector<SummaryRow> Aggregate(const std::vector<RunMetrics>& runs);

double Mean(const std::vector<double>& values);
double SampleVariance(const std::vector<double>& values);
// Linear interpolation between order statistics (q in [0, 1]).
double Quantile(std::vector<double> values, double q);

void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows);
// timestamp,err_m
void WriteErrorSeriesCsv(std::ostream& out, const Trajectory& timestamps,
                         const std::vector<double>& errors);

}  // namespace dynloc::eval

#endif  // DYNLOC_EVAL_METRICS_HPP_
