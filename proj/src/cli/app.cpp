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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dynloc/cli/commands.hpp"
#include "dynloc/core/error.hpp"
#include "dynloc/io/map_io.hpp"
#include "dynloc/io/session_io.hpp"
#include "dynloc/ndt/ndt_map.hpp"

namespace dynloc::cli {

namespace {

io::Config LoadOrDefault(const std::string& path) {
  if (path.empty()) {
    io::Config config;
    config.Validate();
    return config;
  }
  return io::LoadConfig(path);
}

std::vector<std::uint64_t> SeedRange(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(first + k);
  return out;
}

}  // namespace

int Main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo localization on NDT occupancy maps with dynamic-class selection",
               "dynloc"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;

  auto* simulate = app.add_subcommand("simulate", "generate a session log");
  std::uint64_t sim_seed = 0;
  std::uint64_t sim_mapping_seed = 0;
  simulate->add_option("--config", config_path, "JSON config file");
  auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "session seed");
  auto* sim_mapping_opt = simulate->add_option(
      "--mapping-seed", sim_mapping_seed, "seed of the mapping session this one revisits");
  simulate->add_option("--out", out_path, "session file")->required();

  auto* map = app.add_subcommand("map", "build an NDT occupancy map from a session");
  std::string session_path;
  std::string map_type = "baseline";
  map->add_option("--session", session_path, "session file")->required();
  map->add_option("--map-type", map_type, "baseline or static");
  map->add_option("--config", config_path, "JSON config file");
  map->add_option("--out", out_path, "map file")->required();

  auto* localize = app.add_subcommand("localize", "run Monte Carlo localization");
  std::string map_path;
  std::string method;
  std::uint64_t loc_seed = 1;
  localize->add_option("--session", session_path, "session file")->required();
  localize->add_option("--map", map_path, "map file")->required();
  localize->add_option("--method", method, "baseline, filtered, static or combined");
  localize->add_option("--config", config_path, "JSON config file");
  localize->add_option("--seed", loc_seed, "filter seed");
  localize->add_option("--out", out_path, "trajectory CSV")->required();

  auto* evaluate = app.add_subcommand("eval", "ATE and RPE of a trajectory CSV");
  std::string trajectory_path;
  bool no_rotation = false;
  evaluate->add_option("--trajectory", trajectory_path, "trajectory CSV")->required();
  evaluate->add_option("--out", out_path, "per-frame ATE series CSV");
  evaluate->add_flag("--no-rotation", no_rotation, "fit translation only");

  auto* experiment = app.add_subcommand("experiment", "run the map x method matrix");
  unsigned jobs = 1;
  bool dry_run = false;
  std::uint64_t base_seed = 0;
  std::size_t mapping_seeds = 0;
  std::size_t localization_seeds = 0;
  experiment->add_option("--config", config_path, "JSON config file");
  experiment->add_option("--out", out_path, "output directory");
  experiment->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
  experiment->add_flag("--dry-run", dry_run, "print the run matrix only");
  auto* base_seed_opt = experiment->add_option(
      "--seed", base_seed, "seed offset: mapping seeds start at seed+1, localization at seed+101");
  auto* mapping_opt =
      experiment->add_option("--mapping-seeds", mapping_seeds, "number of mapping seeds")
          ->check(CLI::PositiveNumber);
  auto* localization_opt = experiment
                               ->add_option("--localization-seeds", localization_seeds,
                                            "number of localization seeds")
                               ->check(CLI::PositiveNumber);
  std::string exp_map_type;
  std::string exp_method;
  experiment->add_option("--map-type", exp_map_type, "restrict to one map type");
  experiment->add_option("--method", exp_method, "restrict to one method");

  auto* dump = app.add_subcommand("config", "print the effective config");
  dump->add_option("--config", config_path, "JSON config file");
  dump->add_option("--out", out_path, "write to a file instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    io::Config config = LoadOrDefault(config_path);

    if (simulate->parsed()) {
      const std::uint64_t seed = sim_seed_opt->count() > 0 ? sim_seed : config.session.seed;
      std::optional<std::uint64_t> mapping_seed = config.session.mapping_seed;
      if (sim_mapping_opt->count() > 0) mapping_seed = sim_mapping_seed;
      SimulateSummary summary;
      const SessionLog log = Simulate(config, seed, mapping_seed, &summary);
      io::WriteSession(out_path, log);
      out << "frames " << summary.frames << "\npoints " << summary.points << "\ndynamic_agents "
          << summary.dynamic_agents << "\nparked_cars " << summary.parked_cars << '\n';
    } else if (map->parsed()) {
      const SessionLog session = io::ReadSession(session_path);
      const ndt::NdtGrid grid = BuildMapOfType(session, map_type, config);
      io::WriteMap(out_path, grid);
      const ndt::NdtMap frozen(grid, config.map.query);
      out << "cells " << grid.cell_count() << "\nvalid_cells " << frozen.component_count()
          << '\n';
    } else if (localize->parsed()) {
      const std::string name = method.empty() ? std::string(config.method.name()) : method;
      filters::MethodSpec::FromName(name);
      const SessionLog session = io::ReadSession(session_path);
      const ndt::NdtGrid grid = io::ReadMap(map_path);
      std::size_t exhaustion = 0;
      const io::EstimatedTrajectory trajectory =
          Localize(session, grid, name, config, loc_seed, &exhaustion);
      io::WriteTrajectoryFile(out_path, trajectory);
      const TrajectoryMetrics metrics = Evaluate(trajectory);
      out << "frames " << trajectory.estimated.size() << "\nate_rmse " << metrics.ate_rmse
          << "\nrpe_rmse " << metrics.rpe_rmse << "\nexhaustion_events " << exhaustion << '\n';
    } else if (evaluate->parsed()) {
      const io::EstimatedTrajectory trajectory = io::ReadTrajectoryFile(trajectory_path);
      const TrajectoryMetrics metrics = Evaluate(trajectory, !no_rotation);
      if (!out_path.empty()) {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw Error("cannot write " + out_path);
        eval::WriteErrorSeriesCsv(file, trajectory.estimated, metrics.ate_errors);
      }
      out << "ate_rmse " << metrics.ate_rmse << "\nrpe_rmse " << metrics.rpe_rmse << '\n';
    } else if (experiment->parsed()) {
      const std::uint64_t base = base_seed_opt->count() > 0 ? base_seed : 0;
      if (mapping_opt->count() > 0) {
        config.experiment.mapping_seeds = SeedRange(base + 1, mapping_seeds);
      } else if (base_seed_opt->count() > 0) {
        config.experiment.mapping_seeds =
            SeedRange(base + 1, config.experiment.mapping_seeds.size());
      }
      if (localization_opt->count() > 0) {
        config.experiment.localization_seeds = SeedRange(base + 101, localization_seeds);
      } else if (base_seed_opt->count() > 0) {
        config.experiment.localization_seeds =
            SeedRange(base + 101, config.experiment.localization_seeds.size());
      }
      if (!exp_map_type.empty()) config.experiment.map_types = {exp_map_type};
      if (!exp_method.empty()) config.experiment.methods = {exp_method};
      config.experiment.Validate();
      if (!dry_run && out_path.empty()) throw ConfigError("experiment needs --out");
      ExperimentOptions options;
      options.out_dir = out_path;
      options.jobs = jobs;
      options.dry_run = dry_run;
      options.log = dry_run ? &out : &err;
      const ExperimentResult result = RunExperiment(config, options);
      if (!dry_run) eval::WriteSummaryCsv(out, result.summary);
    } else if (dump->parsed()) {
      const std::string text = io::DumpConfig(config);
      if (out_path.empty()) {
        out << text;
      } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw Error("cannot write " + out_path);
        file << text;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e);
  }
  return kExitOk;
}

}  // namespace dynloc::cli
