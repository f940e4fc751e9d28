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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dynloc/cli/commands.hpp"
#include "dynloc/core/error.hpp"
#include "dynloc/io/map_io.hpp"
#include "dynloc/io/session_io.hpp"
#include "dynloc/ndt/ndt_map.hpp"
#include "dynloc/sim/simulator.hpp"
#include "gtest/gtest.h"

namespace dynloc::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "dynloc");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = Main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dynloc_cli_test_" + std::string(::testing::UnitTest::GetInstance()
                                                 ->current_test_info()
                                                 ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(Path("small.json"))
        << R"({"session": {"duration": 12.0, "beam_count": 360},
               "localization": {"particle_count": 100},
               "experiment": {"mapping_seeds": [1], "localization_seeds": [101]}})";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(RunCli({}).code, kExitUsage);
  EXPECT_EQ(RunCli({"teleport"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"simulate"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"experiment", "--jobs", "0", "--dry-run"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, SimulateIsDeterministicAndCountsFrames) {
  std::ofstream(Path("sixty.json")) << R"({"session": {"beam_count": 90}})";
  const Result r1 = RunCli({"simulate", "--config", Path("sixty.json"), "--seed", "1", "--out",
                         Path("a.bin")});
  ASSERT_EQ(r1.code, kExitOk) << r1.err;
  EXPECT_NE(r1.out.find("frames 600\n"), std::string::npos);
  const Result r2 = RunCli({"simulate", "--config", Path("sixty.json"), "--seed", "1", "--out",
                         Path("b.bin")});
  ASSERT_EQ(r2.code, kExitOk);
  EXPECT_EQ(ReadBytes(Path("a.bin")), ReadBytes(Path("b.bin")));
  EXPECT_EQ(io::ReadSession(Path("a.bin")).size(), 600u);
}

TEST_F(CliTest, StoppedRobotFails) {
  std::ofstream(Path("tiny.json")) << R"({"world": {"robot_speed": 0.0}})";
  const Result r = RunCli({"simulate", "--config", Path("tiny.json"), "--out", Path("s.bin")});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, InputErrors) {
  std::ofstream(Path("garbage.bin")) << "not a session";
  EXPECT_EQ(RunCli({"map", "--session", Path("garbage.bin"), "--out", Path("m.bin")}).code,
            kExitInputFormat);
  std::ofstream(Path("broken.json")) << "{";
  EXPECT_EQ(RunCli({"config", "--config", Path("broken.json")}).code, kExitInputFormat);
  std::ofstream(Path("unknown.json")) << R"({"sesion": {}})";
  EXPECT_EQ(RunCli({"config", "--config", Path("unknown.json")}).code, kExitUsage);
}

TEST_F(CliTest, MapLocalizeEvalPipeline) {
  const std::string config = Path("small.json");
  ASSERT_EQ(RunCli({"simulate", "--config", config, "--seed", "1", "--out", Path("map.bin")}).code,
            kExitOk);
  ASSERT_EQ(RunCli({"simulate", "--config", config, "--seed", "101", "--mapping-seed", "1", "--out",
                 Path("loc.bin")})
                .code,
            kExitOk);

  const Result m = RunCli({"map", "--session", Path("map.bin"), "--map-type", "baseline", "--config",
                        config, "--out", Path("grid.bin")});
  ASSERT_EQ(m.code, kExitOk) << m.err;
  const ndt::NdtGrid grid = io::ReadMap(Path("grid.bin"));
  EXPECT_NE(m.out.find("cells " + std::to_string(grid.cell_count()) + "\n"), std::string::npos);
  EXPECT_EQ(RunCli({"map", "--session", Path("map.bin"), "--map-type", "dynamic", "--out",
                 Path("x.bin")})
                .code,
            kExitUsage);

  for (const char* method : {"baseline", "filtered", "static", "combined"}) {
    const Result l = RunCli({"localize", "--session", Path("loc.bin"), "--map", Path("grid.bin"),
                          "--method", method, "--config", config, "--seed", "3", "--out",
                          Path(std::string(method) + ".csv")});
    EXPECT_EQ(l.code, kExitOk) << method << ": " << l.err;
  }
  EXPECT_EQ(RunCli({"localize", "--session", Path("loc.bin"), "--map", Path("grid.bin"), "--method",
                 "Combined", "--out", Path("bad.csv")})
                .code,
            kExitUsage);

  ASSERT_EQ(RunCli({"localize", "--session", Path("loc.bin"), "--map", Path("grid.bin"), "--method",
                 "combined", "--config", config, "--seed", "3", "--out", Path("again.csv")})
                .code,
            kExitOk);
  EXPECT_EQ(ReadBytes(Path("combined.csv")), ReadBytes(Path("again.csv")));

  const Result e = RunCli({"eval", "--trajectory", Path("combined.csv"), "--out", Path("ate.csv")});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  EXPECT_EQ(e.out.rfind("ate_rmse ", 0), 0u);
  EXPECT_EQ(ReadBytes(Path("ate.csv")).rfind("timestamp,err_m\n", 0), 0u);
}

TEST_F(CliTest, SessionOutsideMapIsRejected) {
  const std::string config = Path("small.json");
  ASSERT_EQ(RunCli({"simulate", "--config", config, "--seed", "1", "--out", Path("s.bin")}).code,
            kExitOk);
  io::WriteMap(Path("far.bin"),
               ndt::NdtGrid(ndt::GridGeometry(0.6, Eigen::Vector2d(500.0, 500.0),
                                              Eigen::Vector2d(50.0, 50.0))));
  EXPECT_EQ(RunCli({"localize", "--session", Path("s.bin"), "--map", Path("far.bin"), "--out",
                 Path("t.csv")})
                .code,
            kExitInputFormat);
}

// Valid map cells whose centre lies inside the footprint of a car at `pose`.
std::size_t ValidCellsInFootprint(const ndt::NdtMap& map, const Pose2& pose, double length,
                                  double width) {
  std::size_t n = 0;
  const double res = map.geometry().resolution();
  for (double u = -length / 2.0; u <= length / 2.0; u += res / 4.0) {
    for (double v = -width / 2.0; v <= width / 2.0; v += res / 4.0) {
      if (map.ComponentAtPoint(pose * Eigen::Vector2d(u, v)) != nullptr) ++n;
    }
  }
  return n;
}

TEST_F(CliTest, StaticMapHasNoCellsInParkingSlots) {
  io::Config config = io::LoadConfig(Path("small.json"));
  config.session.label_flip_prob = 0.0;
  const SessionLog session = Simulate(config, 1, std::nullopt);
  const sim::SessionSpec spec = config.MakeSessionSpec(1, std::nullopt);
  const sim::WorldSnapshot snapshot = sim::InstantiateSession(spec);
  ASSERT_EQ(spec.world.parking_slots.size(), 40u);

  const ndt::NdtMap baseline(BuildMapOfType(session, "baseline", config), config.map.query);
  const ndt::NdtMap statics(BuildMapOfType(session, "static", config), config.map.query);
  std::size_t occupied_with_cells = 0;
  std::size_t seen = 0;
  for (const sim::ParkedCar& car : snapshot.parked) {
    ++seen;
    EXPECT_EQ(ValidCellsInFootprint(statics, car.pose, spec.world.car_length,
                                    spec.world.car_width),
              0u)
        << "slot " << car.slot;
    if (ValidCellsInFootprint(baseline, car.pose, spec.world.car_length, spec.world.car_width) >
        0) {
      ++occupied_with_cells;
    }
  }
  ASSERT_GT(seen, 0u);
  // Only cars the robot passed within the 12 s session show up in the map.
  EXPECT_GT(occupied_with_cells, 0u);
  EXPECT_THROW(BuildMapOfType(session, "dynamic", config), ConfigError);
}

TEST_F(CliTest, DryRunPrintsMatrix) {
  const Result r = RunCli({"experiment", "--dry-run"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("112 runs\n"), std::string::npos);
  const io::ExperimentPlan plan;
  EXPECT_EQ(PlanRuns(plan).size(), 112u);
  EXPECT_FALSE(fs::exists(Path("out")));
}

TEST_F(CliTest, ExperimentWritesEightRowSummaryDeterministically) {
  const Result a = RunCli({"experiment", "--config", Path("small.json"), "--out", Path("a"),
                        "--jobs", "4"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const Result b = RunCli({"experiment", "--config", Path("small.json"), "--out", Path("b"),
                        "--jobs", "1"});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_EQ(a.out, b.out);
  const std::string summary = ReadBytes(Path("a/summary.csv"));
  EXPECT_EQ(summary, ReadBytes(Path("b/summary.csv")));
  EXPECT_EQ(ReadBytes(Path("a/runs.csv")), ReadBytes(Path("b/runs.csv")));
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 9);
  EXPECT_EQ(summary.rfind("map_type,method,ate_mean,", 0), 0u);
}

}  // namespace
}  // namespace dynloc::cli
