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

#include "dynloc/io/trajectory_io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "binary.hpp"
#include "dynloc/core/error.hpp"

namespace dynloc::io {

namespace {

constexpr const char* kHeader = "timestamp,est_x,est_y,est_psi,gt_x,gt_y,gt_psi";

void Put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

double ParseDouble(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("line " + std::to_string(line) + ": bad number '" + std::string(field) +
                      "'");
  }
  return v;
}

}  // namespace

void WriteTrajectoryCsv(std::ostream& out, const EstimatedTrajectory& t) {
  if (t.estimated.size() != t.ground_truth.size()) {
    throw MismatchError("estimate and ground truth differ in length");
  }
  out << kHeader << '\n';
  for (std::size_t k = 0; k < t.estimated.size(); ++k) {
    const Pose2& e = t.estimated[k].pose;
    const Pose2& g = t.ground_truth[k].pose;
    for (double v : {t.estimated[k].timestamp, e.x(), e.y(), e.psi(), g.x(), g.y()}) {
      Put(out, v);
      out << ',';
    }
    Put(out, g.psi());
    out << '\n';
  }
}

EstimatedTrajectory ParseTrajectoryCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw FormatError("trajectory CSV must start with '" + std::string(kHeader) + "'");
  }
  EstimatedTrajectory out;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    double v[7];
    std::size_t start = 0;
    for (int f = 0; f < 7; ++f) {
      const std::size_t end = f < 6 ? line.find(',', start) : line.size();
      if (end == std::string::npos) {
        throw FormatError("line " + std::to_string(number) + ": expected 7 fields");
      }
      v[f] = ParseDouble(std::string_view(line).substr(start, end - start), number);
      start = end + 1;
    }
    out.estimated.push_back({v[0], Pose2(v[1], v[2], v[3])});
    out.ground_truth.push_back({v[0], Pose2(v[4], v[5], v[6])});
  }
  return out;
}

void WriteTrajectoryFile(const std::string& path, const EstimatedTrajectory& trajectory) {
  std::ostringstream out;
  WriteTrajectoryCsv(out, trajectory);
  internal::WriteFile(path, out.str());
}

EstimatedTrajectory ReadTrajectoryFile(const std::string& path) {
  return ParseTrajectoryCsv(internal::ReadFile(path));
}

}  // namespace dynloc::io
