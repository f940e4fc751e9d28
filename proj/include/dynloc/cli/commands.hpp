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

#ifndef DYNLOC_CLI_COMMANDS_HPP_
#define DYNLOC_CLI_COMMANDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynloc/eval/metrics.hpp"
#include "dynloc/io/config_io.hpp"
#include "dynloc/io/trajectory_io.hpp"
#include "dynloc/ndt/ndt_grid.hpp"

namespace dynloc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitInputFormat = 3,
  kExitRuntime = 4,
};

// Maps the library's exception types onto exit codes.
int ExitCodeFor(const std::exception& e);

struct SimulateSummary {
  std::size_t frames = 0;
  std::size_t points = 0;
  std::size_t dynamic_agents = 0;
  std::size_t parked_cars = 0;
};

SessionLog Simulate(const io::Config& config, std::uint64_t seed,
                    std::optional<std::uint64_t> mapping_seed, SimulateSummary* summary = nullptr);

// map_type is "baseline" ({S,E,D}) or "static" ({S}); anything else throws ConfigError.
ndt::NdtGrid BuildMapOfType(const SessionLog& session, const std::string& map_type,
                            const io::Config& config);

// Throws MismatchError when a ground-truth pose lies outside the map.
io::EstimatedTrajectory Localize(const SessionLog& session, const ndt::NdtGrid& map,
                                 const std::string& method, const io::Config& config,
                                 std::uint64_t seed, std::size_t* exhaustion_events = nullptr);

struct TrajectoryMetrics {
  double ate_rmse = 0.0;
  double rpe_rmse = 0.0;
  std::vector<double> ate_errors;
};

TrajectoryMetrics Evaluate(const io::EstimatedTrajectory& trajectory, bool estimate_rotation = true);

struct RunSpec {
  std::uint64_t mapping_seed = 0;
  std::uint64_t localization_seed = 0;
  std::string map_type;
  std::string method;
};

struct RunRecord {
  RunSpec spec;
  double ate_rmse = 0.0;
  double rpe_rmse = 0.0;
};

// Runs in matrix order: mapping seed, map type, localization seed, method.
std::vector<RunSpec> PlanRuns(const io::ExperimentPlan& plan);

struct ExperimentOptions {
  std::string out_dir;
  unsigned jobs = 1;
  bool dry_run = false;
  std::ostream* log = nullptr;  // progress lines, optional
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  // in PlanRuns order
  std::vector<eval::SummaryRow> summary;
};

// Simulates (cached per seed pair), maps (cached per map type and mapping
// seed), localizes and evaluates every run of the plan, then writes
// summary.csv and runs.csv. Artifacts live under out_dir in sessions/, maps/
// and runs/. A dry run only prints the matrix.
ExperimentResult RunExperiment(const io::Config& config, const ExperimentOptions& options);

// Entry point of the dynloc tool.
int Main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dynloc::cli

#endif  // DYNLOC_CLI_COMMANDS_HPP_
