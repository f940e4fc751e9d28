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

#include "dynloc/cli/commands.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "dynloc/core/error.hpp"
#include "dynloc/filters/filters.hpp"
#include "dynloc/io/map_io.hpp"
#include "dynloc/io/session_io.hpp"
#include "dynloc/mcl/mcl.hpp"
#include "dynloc/ndt/map_builder.hpp"
#include "dynloc/sim/simulator.hpp"
#include "json.hpp"

namespace dynloc::cli {

namespace fs = std::filesystem;

namespace {

// Re-raises the active exception with `stage` prepended, keeping its category.
[[noreturn]] void RethrowWithStage(const std::string& stage) {
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(stage + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(stage + ": " + e.what());
  } catch (const MismatchError& e) {
    throw MismatchError(stage + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(stage + ": " + e.what());
  }
}

std::string SpecEcho(const io::Config& config, std::uint64_t seed,
                     std::optional<std::uint64_t> mapping_seed) {
  nlohmann::json echo;
  echo["config"] = nlohmann::json::parse(io::DumpConfig(config));
  echo["seed"] = seed;
  if (mapping_seed) echo["mapping_seed"] = *mapping_seed;
  return echo.dump();
}

std::string Tag(const RunSpec& r) {
  return r.map_type + "_" + r.method + "_" + std::to_string(r.mapping_seed) + "_" +
         std::to_string(r.localization_seed);
}

std::string Format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Runs `task(k)` for k in [0, n) on up to `jobs` threads. The first exception
// is rethrown after all workers stop.
template <typename Task>
void ParallelFor(std::size_t n, unsigned jobs, Task task) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n) return;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (failure) return;
      }
      try {
        task(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return kExitUsage;
  if (dynamic_cast<const FormatError*>(&e) != nullptr) return kExitInputFormat;
  if (dynamic_cast<const MismatchError*>(&e) != nullptr) return kExitInputFormat;
  if (dynamic_cast<const EmptyInputError*>(&e) != nullptr) return kExitInputFormat;
  return kExitRuntime;
}

SessionLog Simulate(const io::Config& config, std::uint64_t seed,
                    std::optional<std::uint64_t> mapping_seed, SimulateSummary* summary) {
  const sim::SessionSpec spec = config.MakeSessionSpec(seed, mapping_seed);
  sim::AnnotatedSession session = sim::GenerateAnnotated(spec);
  session.log.spec_echo = SpecEcho(config, seed, mapping_seed);
  if (summary != nullptr) {
    summary->frames = session.log.size();
    summary->points = 0;
    for (const SessionRecord& r : session.log.records) summary->points += r.scan.size();
    summary->dynamic_agents = spec.world.agents.size();
    summary->parked_cars = session.snapshot.parked.size();
  }
  return std::move(session.log);
}

ndt::NdtGrid BuildMapOfType(const SessionLog& session, const std::string& map_type,
                            const io::Config& config) {
  ClassSet delta;
  if (map_type == "baseline") {
    delta = ClassSet::All();
  } else if (map_type == "static") {
    delta = {DynamicClass::kStatic};
  } else {
    throw ConfigError("unknown map type '" + map_type + "' (expected baseline or static)");
  }
  return ndt::BuildMap(session, config.partition, delta, config.map, config.filter);
}

io::EstimatedTrajectory Localize(const SessionLog& session, const ndt::NdtGrid& map,
                                 const std::string& method, const io::Config& config,
                                 std::uint64_t seed, std::size_t* exhaustion_events) {
  const filters::MethodSpec spec = filters::MethodSpec::FromName(method);
  for (const SessionRecord& r : session.records) {
    if (!map.geometry().ContainsPoint(r.ground_truth.translation())) {
      throw MismatchError("session leaves the map extent");
    }
  }
  const ndt::NdtMap frozen(map, config.map.query);
  const mcl::LocalizationResult result = mcl::LocalizeSession(
      session, frozen, spec, config.localization, config.partition, config.filter, seed);
  if (exhaustion_events != nullptr) *exhaustion_events = result.exhaustion_events;
  return {result.trajectory, GroundTruthTrajectory(session)};
}

TrajectoryMetrics Evaluate(const io::EstimatedTrajectory& trajectory, bool estimate_rotation) {
  const eval::AlignedPair pair =
      eval::Align(trajectory.estimated, trajectory.ground_truth, estimate_rotation);
  TrajectoryMetrics m;
  m.ate_errors = eval::AteErrors(pair);
  m.ate_rmse = eval::Rmse(m.ate_errors);
  m.rpe_rmse = eval::RpeRmse(pair, 1);
  return m;
}

std::vector<RunSpec> PlanRuns(const io::ExperimentPlan& plan) {
  plan.Validate();
  std::vector<RunSpec> runs;
  for (std::uint64_t m : plan.mapping_seeds) {
    for (const std::string& map_type : plan.map_types) {
      for (std::uint64_t l : plan.localization_seeds) {
        for (const std::string& method : plan.methods) runs.push_back({m, l, map_type, method});
      }
    }
  }
  return runs;
}

ExperimentResult RunExperiment(const io::Config& config, const ExperimentOptions& options) {
  const std::vector<RunSpec> runs = PlanRuns(config.experiment);
  std::ostream* log = options.log;
  ExperimentResult result;
  if (options.dry_run) {
    if (log != nullptr) {
      *log << "mapping_seed,map_type,localization_seed,method\n";
      for (const RunSpec& r : runs) {
        *log << r.mapping_seed << ',' << r.map_type << ',' << r.localization_seed << ','
             << r.method << '\n';
      }
      *log << runs.size() << " runs\n";
    }
    return result;
  }
  if (options.out_dir.empty()) throw ConfigError("experiment needs an output directory");

  const fs::path root(options.out_dir);
  fs::create_directories(root / "sessions");
  fs::create_directories(root / "maps");
  fs::create_directories(root / "runs");

  // Cached artifacts are only valid for the config that produced them. The
  // plan itself may grow between invocations.
  io::Config cache_key = config;
  cache_key.experiment = io::ExperimentPlan();
  const std::string config_text = io::DumpConfig(cache_key);
  const fs::path config_path = root / "config.json";
  if (fs::exists(config_path)) {
    std::ifstream in(config_path);
    std::stringstream existing;
    existing << in.rdbuf();
    if (existing.str() != config_text) {
      throw ConfigError(options.out_dir + " holds results of a different config");
    }
  } else {
    std::ofstream(config_path) << config_text;
  }

  std::mutex log_mutex;
  auto progress = [&](const std::string& line) {
    if (log == nullptr) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    *log << line << '\n' << std::flush;
  };

  // Stage 1: sessions.
  struct SessionJob {
    std::uint64_t seed;
    std::optional<std::uint64_t> mapping_seed;
    fs::path path;
  };
  std::vector<SessionJob> session_jobs;
  const io::ExperimentPlan& plan = config.experiment;
  for (std::uint64_t m : plan.mapping_seeds) {
    session_jobs.push_back({m, std::nullopt, root / "sessions" / ("mapping_" + std::to_string(m) + ".dlsess")});
    for (std::uint64_t l : plan.localization_seeds) {
      session_jobs.push_back({l, m, root / "sessions" / ("localization_" + std::to_string(m) + "_" +
                                                         std::to_string(l) + ".dlsess")});
    }
  }
  ParallelFor(session_jobs.size(), options.jobs, [&](std::size_t k) {
    const SessionJob& job = session_jobs[k];
    if (fs::exists(job.path)) return;
    const std::string stage = "simulate seed " + std::to_string(job.seed);
    try {
      io::WriteSession(job.path.string(), Simulate(config, job.seed, job.mapping_seed));
    } catch (...) {
      RethrowWithStage(stage);
    }
    progress("simulated " + job.path.filename().string());
  });

  // Stage 2: maps.
  std::vector<std::pair<std::uint64_t, std::string>> map_jobs;
  for (std::uint64_t m : plan.mapping_seeds) {
    for (const std::string& t : plan.map_types) map_jobs.emplace_back(m, t);
  }
  auto map_path = [&](std::uint64_t m, const std::string& t) {
    return root / "maps" / (t + "_" + std::to_string(m) + ".dlmap");
  };
  ParallelFor(map_jobs.size(), options.jobs, [&](std::size_t k) {
    const auto& [m, t] = map_jobs[k];
    const fs::path path = map_path(m, t);
    if (fs::exists(path)) return;
    try {
      const SessionLog session =
          io::ReadSession((root / "sessions" / ("mapping_" + std::to_string(m) + ".dlsess")).string());
      io::WriteMap(path.string(), BuildMapOfType(session, t, config));
    } catch (...) {
      RethrowWithStage("map " + t + " seed " + std::to_string(m));
    }
    progress("mapped " + path.filename().string());
  });

  // Stage 3: localization and evaluation. Runs sharing a session and map are
  // grouped so each file is decoded once per group.
  result.runs.resize(runs.size());
  const std::size_t group_size = plan.methods.size();
  ParallelFor(runs.size() / group_size, options.jobs, [&](std::size_t g) {
    const RunSpec& first = runs[g * group_size];
    std::optional<SessionLog> session;
    std::optional<ndt::NdtGrid> map;
    for (std::size_t k = g * group_size; k < (g + 1) * group_size; ++k) {
      const RunSpec& run = runs[k];
      const fs::path path = root / "runs" / (Tag(run) + ".csv");
      try {
        io::EstimatedTrajectory trajectory;
        if (fs::exists(path)) {
          trajectory = io::ReadTrajectoryFile(path.string());
        } else {
          if (!session) {
            session = io::ReadSession((root / "sessions" /
                                       ("localization_" + std::to_string(first.mapping_seed) +
                                        "_" + std::to_string(first.localization_seed) + ".dlsess"))
                                          .string());
            map = io::ReadMap(map_path(first.mapping_seed, first.map_type).string());
          }
          trajectory = Localize(*session, *map, run.method, config, run.localization_seed);
          io::WriteTrajectoryFile(path.string(), trajectory);
        }
        const TrajectoryMetrics metrics = Evaluate(trajectory);
        result.runs[k] = {run, metrics.ate_rmse, metrics.rpe_rmse};
        progress("run " + Tag(run) + " ate " + Format(metrics.ate_rmse) + " rpe " +
                 Format(metrics.rpe_rmse));
      } catch (...) {
        RethrowWithStage("localize " + Tag(run));
      }
    }
  });

  std::vector<eval::RunMetrics> metrics;
  for (const RunRecord& r : result.runs) {
    metrics.push_back({r.spec.map_type, r.spec.method, r.ate_rmse, r.rpe_rmse});
  }
  result.summary = eval::Aggregate(metrics);

  std::ostringstream summary;
  eval::WriteSummaryCsv(summary, result.summary);
  std::ofstream(root / "summary.csv", std::ios::binary) << summary.str();

  std::ofstream runs_csv(root / "runs.csv", std::ios::binary);
  runs_csv << "map_type,method,mapping_seed,localization_seed,ate_rmse,rpe_rmse\n";
  for (const RunRecord& r : result.runs) {
    runs_csv << r.spec.map_type << ',' << r.spec.method << ',' << r.spec.mapping_seed << ','
             << r.spec.localization_seed << ',' << Format(r.ate_rmse) << ','
             << Format(r.rpe_rmse) << '\n';
  }
  return result;
}

}  // namespace dynloc::cli
