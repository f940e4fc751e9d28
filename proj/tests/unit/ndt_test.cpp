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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "Eigen/Eigenvalues"
#include "dynloc/core/error.hpp"
#include "dynloc/core/session.hpp"
#include "dynloc/ndt/map_builder.hpp"
#include "dynloc/ndt/ndt_cell.hpp"
#include "dynloc/ndt/ndt_grid.hpp"
#include "dynloc/ndt/ndt_map.hpp"
#include "gtest/gtest.h"

namespace dynloc::ndt {
namespace {

// Two-pass batch statistics.
void BatchStats(const std::vector<Eigen::Vector2d>& pts, Eigen::Vector2d& mean,
                Eigen::Matrix2d& cov) {
  mean.setZero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  cov.setZero();
  for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose();
  cov /= static_cast<double>(pts.size() - 1);
}

TEST(NdtCellTest, SinglePointHasMeanButNoCovariance) {
  NdtCell cell;
  cell.Add({0.0, 0.0});
  ASSERT_TRUE(cell.Mean().has_value());
  EXPECT_EQ(*cell.Mean(), Eigen::Vector2d(0.0, 0.0));
  EXPECT_FALSE(cell.Covariance(3).has_value());
  EXPECT_FALSE(ToComponent(cell, CellValidity{}).has_value());
}

TEST(NdtCellTest, ThreePointExample) {
  NdtCell cell;
  for (const Eigen::Vector2d& p : {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0),
                                  Eigen::Vector2d(0, 1)}) {
    cell.Add(p);
  }
  const Eigen::Vector2d mean = *cell.Mean();
  EXPECT_NEAR(mean.x(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(mean.y(), 1.0 / 3.0, 1e-15);
  const Eigen::Matrix2d cov = *cell.Covariance(3);
  EXPECT_NEAR(cov(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(cov(0, 1), -1.0 / 6.0, 1e-15);
  EXPECT_NEAR(cov(1, 0), -1.0 / 6.0, 1e-15);
  EXPECT_NEAR(cov(1, 1), 1.0 / 3.0, 1e-15);
}

TEST(NdtCellTest, TwoBatchesEqualOneBatch) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(2.0, 0.3);
  std::vector<Eigen::Vector2d> pts;
  for (int k = 0; k < 100; ++k) pts.emplace_back(g(rng), g(rng));
  NdtCell split;
  NdtCell whole;
  for (int k = 0; k < 50; ++k) split.Add(pts[k]);
  for (int k = 50; k < 100; ++k) split.Add(pts[k]);
  for (int k = 99; k >= 0; --k) whole.Add(pts[k]);
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;
  BatchStats(pts, mean, cov);
  EXPECT_LT((*split.Mean() - mean).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((*split.Covariance(3) - cov).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((*whole.Covariance(3) - cov).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(RegularizeTest, FloorsSmallEigenvalue) {
  Eigen::Matrix2d cov;
  cov << 1.0, 0.0, 0.0, 0.0;
  const Eigen::Matrix2d reg = *RegularizeCovariance(cov, 1e-3);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(reg);
  EXPECT_NEAR(es.eigenvalues()(0), 1e-3, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-12);
  EXPECT_FALSE(RegularizeCovariance(Eigen::Matrix2d::Zero(), 1e-3).has_value());
}

TEST(GridGeometryTest, CellOfIsFloor) {
  const GridGeometry g(0.6, Eigen::Vector2d(-100, -100), Eigen::Vector2d(200, 200));
  EXPECT_EQ(g.cols(), 334);
  EXPECT_EQ(g.rows(), 334);
  const CellIndex c = *g.CellOf({0.0, 0.0});
  EXPECT_EQ(c.i, static_cast<int>(std::floor(100.0 / 0.6)));
  EXPECT_FALSE(g.CellOf({-100.1, 0.0}).has_value());
  EXPECT_EQ(g.UncheckedCellOf({-100.1, 0.0}).i, -1);
}

TEST(NdtGridTest, InsertDropsOutsidePoints) {
  NdtGrid grid(GridGeometry(1.0, Eigen::Vector2d(0, 0), 4, 4));
  const std::vector<Eigen::Vector2d> pts{{0.5, 0.5}, {10.0, 0.5}, {-0.1, 0.5}};
  grid.InsertPoints(pts);
  EXPECT_EQ(grid.dropped_points(), 2u);
  EXPECT_EQ(grid.cell_count(), 1u);
}

TEST(NdtGridTest, RayTraversalExample) {
  NdtGrid grid(GridGeometry(1.0, Eigen::Vector2d(0, 0), 5, 2));
  const std::vector<Eigen::Vector2d> end{{3.5, 0.5}};
  grid.UpdateOccupancy({0.5, 0.5}, end);
  const OccupancyParams occ;
  for (int i = 0; i < 3; ++i) {
    ASSERT_NE(grid.Find({i, 0}), nullptr);
    EXPECT_NEAR(grid.Find({i, 0})->log_odds, occ.l_miss(), 1e-12);
  }
  ASSERT_NE(grid.Find({3, 0}), nullptr);
  EXPECT_NEAR(grid.Find({3, 0})->log_odds, std::log(0.7 / 0.3), 1e-12);
  EXPECT_NEAR(grid.Find({3, 0})->log_odds, 0.847, 1e-3);
  EXPECT_EQ(grid.Find({4, 0}), nullptr);
  EXPECT_EQ(grid.Find({0, 1}), nullptr);
}

TEST(NdtGridTest, EmptyEndpointsLeaveGridUnchanged) {
  NdtGrid grid(GridGeometry(1.0, Eigen::Vector2d(0, 0), 5, 5));
  grid.UpdateOccupancy({0.5, 0.5}, {});
  EXPECT_EQ(grid.cell_count(), 0u);
}

TEST(NdtGridTest, OriginOutsideThrows) {
  NdtGrid grid(GridGeometry(1.0, Eigen::Vector2d(0, 0), 5, 5));
  const std::vector<Eigen::Vector2d> end{{1.5, 1.5}};
  EXPECT_THROW(grid.UpdateOccupancy({-1.0, 0.5}, end), ConfigError);
}

// Cells visited by a ray, by dense sampling. Used as an oracle for the
// incremental traversal on rays that avoid cell corners.
std::vector<CellIndex> SampledCells(const GridGeometry& g, const Eigen::Vector2d& a,
                                    const Eigen::Vector2d& b) {
  std::vector<CellIndex> out;
  const int steps = 20000;
  for (int k = 0; k <= steps; ++k) {
    const Eigen::Vector2d p = a + (b - a) * (static_cast<double>(k) / steps);
    const CellIndex c = g.UncheckedCellOf(p);
    if (out.empty() || !(out.back() == c)) out.push_back(c);
  }
  return out;
}

TEST(NdtGridTest, TraversalMatchesSampledOracleAndClamps) {
  const GridGeometry g(0.5, Eigen::Vector2d(0, 0), 40, 40);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.3, 19.7);
  for (int trial = 0; trial < 200; ++trial) {
    NdtGrid grid(g);
    const Eigen::Vector2d a(u(rng), u(rng));
    const Eigen::Vector2d b(u(rng), u(rng));
    const std::vector<Eigen::Vector2d> end{b};
    grid.UpdateOccupancy(a, end);
    const auto cells = SampledCells(g, a, b);
    const OccupancyParams occ;
    for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
      const NdtCell* cell = grid.Find(cells[k]);
      ASSERT_NE(cell, nullptr);
      EXPECT_NEAR(cell->log_odds, occ.l_miss(), 1e-12);
    }
    EXPECT_NEAR(grid.Find(cells.back())->log_odds, occ.l_hit(), 1e-12);
    // Touching cells sharing only a corner with the sampled path is allowed,
    // otherwise the traversal visits exactly these cells.
    EXPECT_LE(grid.cell_count(), cells.size() + 2);
  }
  NdtGrid grid(g);
  const std::vector<Eigen::Vector2d> end{{5.25, 5.25}};
  for (int k = 0; k < 50; ++k) grid.UpdateOccupancy({1.25, 1.25}, end);
  EXPECT_DOUBLE_EQ(grid.Find(*g.CellOf({5.25, 5.25}))->log_odds, 3.5);
  EXPECT_DOUBLE_EQ(grid.Find(*g.CellOf({1.25, 1.25}))->log_odds, -2.0);
}

TEST(RasterizeTest, EmptyScan) { EXPECT_TRUE(RasterizeScan({}, 0.6).empty()); }

TEST(RasterizeTest, CollinearPointsAreRegularized) {
  std::vector<Eigen::Vector2d> pts;
  for (int k = 0; k < 10; ++k) pts.emplace_back(5.05 + 0.04 * k, 5.1);
  const auto comps = RasterizeScan(pts, 0.6);
  ASSERT_EQ(comps.size(), 1u);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(comps[0].cov);
  EXPECT_NEAR(es.eigenvalues()(0), 1e-3 * es.eigenvalues()(1), 1e-15);
}

TEST(RasterizeTest, TwoBlobsGiveTwoComponents) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  std::vector<Eigen::Vector2d> a;
  std::vector<Eigen::Vector2d> b;
  for (int k = 0; k < 20; ++k) {
    a.emplace_back(3.0 + u(rng), 1.0 + u(rng));
    b.emplace_back(-4.0 + u(rng), 6.0 + u(rng));
  }
  std::vector<Eigen::Vector2d> all = a;
  all.insert(all.end(), b.begin(), b.end());
  const auto comps = RasterizeScan(all, 0.6);
  ASSERT_EQ(comps.size(), 2u);
  Eigen::Vector2d ma;
  Eigen::Vector2d mb;
  Eigen::Matrix2d cov;
  BatchStats(a, ma, cov);
  BatchStats(b, mb, cov);
  const bool first_is_a = (comps[0].mean - ma).norm() < 1.0;
  EXPECT_LT((comps[first_is_a ? 0 : 1].mean - ma).norm(), 1e-6);
  EXPECT_LT((comps[first_is_a ? 1 : 0].mean - mb).norm(), 1e-6);
}

NdtGrid GridWithBlob(const Eigen::Vector2d& center, int n = 30) {
  NdtGrid grid(GridGeometry(0.6, Eigen::Vector2d(-30, -30), 100, 100));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::vector<Eigen::Vector2d> pts;
  for (int k = 0; k < n; ++k) pts.push_back(center + Eigen::Vector2d(u(rng), u(rng)));
  grid.InsertPoints(pts);
  return grid;
}

TEST(L2ScoreTest, IdenticalComponentScoresD1) {
  const Eigen::Vector2d center(0.3, 0.3);
  const NdtMap map(GridWithBlob(center), QueryParams{});
  ASSERT_EQ(map.component_count(), 1u);
  std::vector<GaussianComponent> scan{map.components()[0]};
  EXPECT_NEAR(L2Score(map, scan, Pose2(), L2Params{}), 1.0, 1e-12);
}

TEST(L2ScoreTest, PairTermFormula) {
  NdtGrid grid(GridGeometry(1.0, Eigen::Vector2d(-10, -10), 20, 20));
  NdtMap empty_map(grid, QueryParams{});
  EXPECT_EQ(L2Score(empty_map, std::vector<GaussianComponent>{GaussianComponent{}}, Pose2(),
                    L2Params{}),
            0.0);

  // Map component with covariance 0.1 I at the origin cell; scan component
  // with covariance 0.1 I offset by 0.6 m.
  const Eigen::Vector2d c(0.5, 0.5);
  std::vector<Eigen::Vector2d> pts;
  const double r = std::sqrt(0.1 * 3.0 / 4.0);  // four points at +-r: unbiased var 0.1
  for (const Eigen::Vector2d& d : {Eigen::Vector2d(r, 0), Eigen::Vector2d(-r, 0),
                                  Eigen::Vector2d(0, r), Eigen::Vector2d(0, -r)}) {
    pts.push_back(c + d);
    pts.push_back(c + d);
  }
  grid.InsertPoints(pts);
  const NdtMap map(grid, QueryParams{});
  ASSERT_EQ(map.component_count(), 1u);
  const Eigen::Matrix2d mcov = map.components()[0].cov;
  GaussianComponent scan;
  scan.mean = c + Eigen::Vector2d(0.6, 0.0);
  scan.cov = 0.2 * Eigen::Matrix2d::Identity() - mcov;
  const std::vector<GaussianComponent> scans{scan};
  EXPECT_NEAR(L2Score(map, scans, Pose2(), L2Params{}), std::exp(-0.025 * 1.8), 1e-12);
  EXPECT_NEAR(std::exp(-0.025 * 1.8), 0.9560, 5e-5);

  GaussianComponent far = scan;
  far.mean = c + Eigen::Vector2d(6.0, 0.0);
  EXPECT_EQ(L2Score(map, std::vector<GaussianComponent>{far}, Pose2(), L2Params{}), 0.0);
}

TEST(L2ScoreTest, BoundedAndOrderFree) {
  NdtGrid grid(GridGeometry(0.6, Eigen::Vector2d(-20, -20), 70, 70));
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  std::vector<Eigen::Vector2d> pts;
  for (int k = 0; k < 4000; ++k) pts.emplace_back(u(rng), 0.3 * u(rng));
  grid.InsertPoints(pts);
  const NdtMap map(grid, QueryParams{});
  auto scan = RasterizeScan(pts, 0.6);
  for (int k = 0; k < 50; ++k) {
    const Pose2 pose(0.1 * u(rng), 0.1 * u(rng), 0.01 * u(rng));
    const double s = L2Score(map, scan, pose, L2Params{});
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  const double before = L2Score(map, scan, Pose2(0.2, 0.1, 0.05), L2Params{});
  std::reverse(scan.begin(), scan.end());
  EXPECT_NEAR(L2Score(map, scan, Pose2(0.2, 0.1, 0.05), L2Params{}), before, 1e-12);
}

TEST(NdtMapTest, OccupancyThresholdGatesQueries) {
  NdtGrid grid = GridWithBlob({0.3, 0.3});
  const CellIndex c = *grid.geometry().CellOf({0.3, 0.3});
  grid.Touch(c).log_odds = -0.1;
  EXPECT_EQ(NdtMap(grid, QueryParams{}).component_count(), 0u);
  grid.Touch(c).log_odds = 0.0;
  EXPECT_EQ(NdtMap(grid, QueryParams{}).component_count(), 1u);
}

TEST(BuildMapTest, EmptyLogThrows) {
  EXPECT_THROW(BuildMap(SessionLog{}, LabelPartition::SemanticKittiDefault(), ClassSet::All(),
                        MapConfig{}),
               EmptyInputError);
}

SessionLog WallLog(Label label, int frames) {
  SessionLog log;
  for (int f = 0; f < frames; ++f) {
    SessionRecord r;
    r.ground_truth = Pose2(0.0, 0.0, 0.0);
    r.scan.timestamp = 0.1 * f;
    for (int k = 0; k < 40; ++k) r.scan.points.push_back({5.0 + 0.01 * (k % 3), -2.0 + 0.1 * k, label});
    log.records.push_back(r);
  }
  return log;
}

TEST(BuildMapTest, StaticMapDropsCars) {
  const auto partition = LabelPartition::SemanticKittiDefault();
  const NdtGrid cars = BuildMap(WallLog(labels::kCar, 3), partition, {DynamicClass::kStatic},
                                MapConfig{});
  EXPECT_EQ(NdtMap(cars, QueryParams{}).component_count(), 0u);
  const NdtGrid baseline = BuildMap(WallLog(labels::kCar, 3), partition, ClassSet::All(),
                                    MapConfig{});
  EXPECT_GT(NdtMap(baseline, QueryParams{}).component_count(), 0u);
}

TEST(BuildMapTest, ObservedFreeCellIsExcluded) {
  // An agent occupies a cell once, then 50 rays pass through it.
  NdtGrid grid(GridGeometry(0.6, Eigen::Vector2d(-10, -10), Eigen::Vector2d(20, 20)));
  const std::vector<Eigen::Vector2d> agent{{3.0, 0.0}, {3.05, 0.08}, {3.1, 0.03}};
  grid.InsertPoints(agent);
  grid.UpdateOccupancy({0.1, 0.1}, agent);
  EXPECT_EQ(NdtMap(grid, QueryParams{}).component_count(), 1u);
  const std::vector<Eigen::Vector2d> wall{{8.0, 0.1}};
  for (int k = 0; k < 50; ++k) grid.UpdateOccupancy({0.1, 0.1}, wall);
  const NdtCell* cell = grid.Find(*grid.geometry().CellOf({3.05, 0.05}));
  EXPECT_DOUBLE_EQ(cell->log_odds, -2.0);
  EXPECT_EQ(NdtMap(grid, QueryParams{}).ComponentAtPoint({3.05, 0.05}), nullptr);
}

}  // namespace
}  // namespace dynloc::ndt
