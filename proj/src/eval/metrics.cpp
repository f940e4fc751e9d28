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

#include "dynloc/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "dynloc/core/error.hpp"

namespace dynloc::eval {

namespace {

std::string Format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

AlignedPair Align(const Trajectory& estimated, const Trajectory& reference,
                  bool estimate_rotation) {
  if (estimated.size() != reference.size()) {
    throw MismatchError("trajectories differ in length");
  }
  if (estimated.size() < 2) throw MismatchError("alignment needs at least two poses");

  const double n = static_cast<double>(estimated.size());
  Eigen::Vector2d c_est = Eigen::Vector2d::Zero();
  Eigen::Vector2d c_ref = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < estimated.size(); ++k) {
    c_est += estimated[k].pose.translation();
    c_ref += reference[k].pose.translation();
  }
  c_est /= n;
  c_ref /= n;

  double theta = 0.0;
  if (estimate_rotation) {
    double dot = 0.0;
    double cross = 0.0;
    for (std::size_t k = 0; k < estimated.size(); ++k) {
      const Eigen::Vector2d a = estimated[k].pose.translation() - c_est;
      const Eigen::Vector2d b = reference[k].pose.translation() - c_ref;
      dot += a.dot(b);
      cross += a.x() * b.y() - a.y() * b.x();
    }
    theta = std::atan2(cross, dot);
  }
  const Pose2 rotation(0.0, 0.0, theta);
  const Eigen::Vector2d t = c_ref - rotation * c_est;

  AlignedPair pair;
  pair.alignment = Pose2(t, theta);
  pair.reference = reference;
  pair.estimated.reserve(estimated.size());
  for (const TimedPose& p : estimated) {
    pair.estimated.push_back({p.timestamp, Compose(pair.alignment, p.pose)});
  }
  return pair;
}

AlignedPair Unaligned(const Trajectory& estimated, const Trajectory& reference) {
  if (estimated.size() != reference.size()) {
    throw MismatchError("trajectories differ in length");
  }
  return {estimated, reference, Pose2()};
}

double Rmse(const std::vector<double>& errors) {
  if (errors.empty()) return 0.0;
  double sum = 0.0;
  for (double e : errors) sum += e * e;
  return std::sqrt(sum / static_cast<double>(errors.size()));
}

std::vector<double> AteErrors(const AlignedPair& pair) {
  if (pair.estimated.size() != pair.reference.size()) {
    throw MismatchError("trajectories differ in length");
  }
  std::vector<double> out;
  out.reserve(pair.estimated.size());
  for (std::size_t k = 0; k < pair.estimated.size(); ++k) {
    out.push_back((pair.estimated[k].pose.translation() - pair.reference[k].pose.translation())
                      .norm());
  }
  return out;
}

double AteRmse(const AlignedPair& pair) { return Rmse(AteErrors(pair)); }

std::vector<double> RpeErrors(const AlignedPair& pair, std::size_t delta_k) {
  if (pair.estimated.size() != pair.reference.size()) {
    throw MismatchError("trajectories differ in length");
  }
  if (delta_k == 0 || pair.estimated.size() <= delta_k) {
    throw MismatchError("relative pose error needs more poses than delta_k");
  }
  std::vector<double> out;
  out.reserve(pair.estimated.size() - delta_k);
  for (std::size_t i = 0; i + delta_k < pair.estimated.size(); ++i) {
    const Pose2 ref = Between(pair.reference[i].pose, pair.reference[i + delta_k].pose);
    const Pose2 est = Between(pair.estimated[i].pose, pair.estimated[i + delta_k].pose);
    out.push_back(Between(ref, est).translation().norm());
  }
  return out;
}

double RpeRmse(const AlignedPair& pair, std::size_t delta_k) {
  return Rmse(RpeErrors(pair, delta_k));
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double SampleVariance(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double mean = Mean(values);
  double sum = 0.0;
  for (double v : values) sum += (v - mean) * (v - mean);
  return sum / static_cast<double>(values.size() - 1);
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<SummaryRow> Aggregate(const std::vector<RunMetrics>& runs) {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>>
      groups;
  for (const RunMetrics& run : runs) {
    const auto key = std::make_pair(run.map_type, run.method);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.first.push_back(run.ate_rmse);
    it->second.second.push_back(run.rpe_rmse);
  }
  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    const auto& [ate, rpe] = groups.at(key);
    SummaryRow row;
    row.map_type = key.first;
    row.method = key.second;
    row.ate_mean = Mean(ate);
    row.ate_var = SampleVariance(ate);
    row.rpe_mean = Mean(rpe);
    row.rpe_var = SampleVariance(rpe);
    row.q25 = Quantile(ate, 0.25);
    row.q50 = Quantile(ate, 0.5);
    row.q75 = Quantile(ate, 0.75);
    row.min = *std::min_element(ate.begin(), ate.end());
    row.max = *std::max_element(ate.begin(), ate.end());
    row.n_runs = ate.size();
    rows.push_back(row);
  }
  return rows;
}

void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "map_type,method,ate_mean,ate_var,rpe_mean,rpe_var,q25,q50,q75,min,max,n_runs\n";
  for (const SummaryRow& r : rows) {
    out << r.map_type << ',' << r.method << ',' << Format(r.ate_mean) << ','
        << Format(r.ate_var) << ',' << Format(r.rpe_mean) << ',' << Format(r.rpe_var) << ','
        << Format(r.q25) << ',' << Format(r.q50) << ',' << Format(r.q75) << ','
        << Format(r.min) << ',' << Format(r.max) << ',' << r.n_runs << '\n';
  }
}

void WriteErrorSeriesCsv(std::ostream& out, const Trajectory& timestamps,
                         const std::vector<double>& errors) {
  out << "timestamp,err_m\n";
  for (std::size_t k = 0; k < errors.size() && k < timestamps.size(); ++k) {
    out << Format(timestamps[k].timestamp) << ',' << Format(errors[k]) << '\n';
  }
}

}  // namespace dynloc::eval
