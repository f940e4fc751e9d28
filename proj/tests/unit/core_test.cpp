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

#include "dynloc/core/error.hpp"
#include "dynloc/core/labels.hpp"
#include "dynloc/core/motion_noise.hpp"
#include "dynloc/core/pose2.hpp"
#include "dynloc/core/random.hpp"
#include "dynloc/core/session.hpp"
#include "gtest/gtest.h"

namespace dynloc {
namespace {

constexpr double kPi = std::numbers::pi;

void ExpectPoseNear(const Pose2& a, const Pose2& b, double tol) {
  EXPECT_NEAR(a.x(), b.x(), tol);
  EXPECT_NEAR(a.y(), b.y(), tol);
  EXPECT_NEAR(std::abs(NormalizeAngle(a.psi() - b.psi())), 0.0, tol);
}

TEST(NormalizeAngleTest, MapsIntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(NormalizeAngle(kPi), kPi);
  EXPECT_DOUBLE_EQ(NormalizeAngle(-kPi), kPi);
  EXPECT_NEAR(NormalizeAngle(3.0 * kPi), kPi, 1e-12);
  EXPECT_NEAR(NormalizeAngle(2.0 * kPi), 0.0, 1e-15);
  EXPECT_NEAR(NormalizeAngle(-0.5), -0.5, 0.0);
}

TEST(Pose2Test, ComposeExamples) {
  ExpectPoseNear(Compose(Pose2::Identity(), Pose2(1, 2, 0.5)), Pose2(1, 2, 0.5), 1e-15);
  ExpectPoseNear(Compose(Pose2(0, 0, kPi / 2), Pose2(1, 0, 0)), Pose2(0, 1, kPi / 2), 1e-15);
  const Pose2 twice = Compose(Pose2(1, 1, kPi), Pose2(1, 1, kPi));
  ExpectPoseNear(twice, Pose2(0, 0, 0), 1e-15);
  EXPECT_NEAR(twice.psi(), 0.0, 1e-15);
}

TEST(Pose2Test, InverseExamples) {
  ExpectPoseNear(Inverse(Pose2::Identity()), Pose2::Identity(), 0.0);
  ExpectPoseNear(Inverse(Pose2(1, 0, 0)), Pose2(-1, 0, 0), 0.0);
  ExpectPoseNear(Inverse(Pose2(1, 2, kPi / 2)), Pose2(-2, 1, -kPi / 2), 1e-15);
}

// Homogeneous-matrix oracle for the group operations.
Eigen::Matrix3d Homogeneous(const Pose2& p) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m.topLeftCorner<2, 2>() << std::cos(p.psi()), -std::sin(p.psi()), std::sin(p.psi()),
      std::cos(p.psi());
  m(0, 2) = p.x();
  m(1, 2) = p.y();
  return m;
}

TEST(Pose2Test, GroupPropertiesOnRandomPoses) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const Pose2 a(coord(rng), coord(rng), angle(rng));
    const Pose2 b(coord(rng), coord(rng), angle(rng));
    const Pose2 c(coord(rng), coord(rng), angle(rng));
    EXPECT_GT(a.psi(), -kPi);
    EXPECT_LE(a.psi(), kPi);
    ExpectPoseNear(Compose(Compose(a, b), c), Compose(a, Compose(b, c)), 1e-9);
    ExpectPoseNear(Compose(a, Pose2::Identity()), a, 1e-12);
    ExpectPoseNear(Compose(Pose2::Identity(), a), a, 1e-12);
    ExpectPoseNear(Compose(Inverse(a), a), Pose2::Identity(), 1e-12);
    ExpectPoseNear(Inverse(Inverse(a)), a, 1e-12);

    const Eigen::Matrix3d product = Homogeneous(a) * Homogeneous(b);
    const Pose2 ab = Compose(a, b);
    EXPECT_NEAR(ab.x(), product(0, 2), 1e-9);
    EXPECT_NEAR(ab.y(), product(1, 2), 1e-9);
    EXPECT_NEAR(ab.psi(), std::atan2(product(1, 0), product(0, 0)), 1e-9);
  }
}

TEST(Pose2Test, TransformsPoints) {
  const Pose2 p(1.0, 2.0, kPi / 2);
  const Eigen::Vector2d q = p * Eigen::Vector2d(1.0, 0.0);
  EXPECT_NEAR(q.x(), 1.0, 1e-15);
  EXPECT_NEAR(q.y(), 3.0, 1e-15);
}

SessionLog LogWithOdometry(const std::vector<Pose2>& odometry) {
  SessionLog log;
  for (std::size_t k = 0; k < odometry.size(); ++k) {
    SessionRecord r;
    r.odometry = odometry[k];
    r.ground_truth = odometry[k];
    r.scan.timestamp = 0.1 * static_cast<double>(k);
    log.records.push_back(r);
  }
  return log;
}

TEST(NormalizeSessionTest, Examples) {
  const SessionLog identity_first = LogWithOdometry({Pose2(), Pose2(1, 2, 0.3)});
  EXPECT_EQ(NormalizeSession(identity_first), identity_first);

  const SessionLog constant = NormalizeSession(LogWithOdometry({Pose2(5, 5, 0), Pose2(5, 5, 0)}));
  for (const SessionRecord& r : constant.records) ExpectPoseNear(r.odometry, Pose2(), 1e-15);

  const SessionLog rotated =
      NormalizeSession(LogWithOdometry({Pose2(1, 0, kPi / 2), Pose2(1, 1, kPi / 2)}));
  ExpectPoseNear(rotated.records[0].odometry, Pose2(), 0.0);
  ExpectPoseNear(rotated.records[1].odometry, Pose2(1, 0, 0), 1e-15);
}

TEST(NormalizeSessionTest, IdempotentAndLeavesGroundTruth) {
  const SessionLog log = LogWithOdometry({Pose2(3, -2, 1.0), Pose2(4, -1, 1.2), Pose2(6, 0, -2.9)});
  const SessionLog once = NormalizeSession(log);
  const SessionLog twice = NormalizeSession(once);
  for (std::size_t k = 0; k < log.size(); ++k) {
    ExpectPoseNear(once.records[k].odometry, twice.records[k].odometry, 1e-12);
    EXPECT_EQ(once.records[k].ground_truth, log.records[k].ground_truth);
  }
}

TEST(NormalizeSessionTest, EmptyLogThrows) {
  EXPECT_THROW(NormalizeSession(SessionLog{}), EmptyInputError);
}

TEST(ValidateTest, RejectsNonIncreasingTimestamps) {
  Trajectory t{{0.0, Pose2()}, {0.1, Pose2()}, {0.1, Pose2()}};
  EXPECT_THROW(ValidateTrajectory(t), ConfigError);
  t[2].timestamp = 0.2;
  EXPECT_NO_THROW(ValidateTrajectory(t));
  SessionLog log = LogWithOdometry({Pose2(), Pose2()});
  log.records[1].scan.timestamp = 0.0;
  EXPECT_THROW(ValidateSession(log), ConfigError);
}

TEST(ClassSetTest, Basics) {
  ClassSet s{DynamicClass::kStatic, DynamicClass::kSemiStatic};
  EXPECT_TRUE(s.Contains(DynamicClass::kStatic));
  EXPECT_FALSE(s.Contains(DynamicClass::kDynamic));
  EXPECT_EQ(s.ToString(), "{S,E}");
  EXPECT_EQ(ClassSet::All().ToString(), "{S,E,D}");
  EXPECT_TRUE(ClassSet::None().empty());
}

TEST(LabelPartitionTest, DefaultPartitionCoversRegistry) {
  const LabelPartition p = LabelPartition::SemanticKittiDefault();
  const LabelRegistry registry = LabelRegistry::SemanticKitti();
  EXPECT_NO_THROW(p.Validate(registry));
  for (Label l : registry.ids()) {
    const DynamicClass c = p.Classify(l);
    if (l >= 40 && l <= 99) {
      EXPECT_EQ(c, DynamicClass::kStatic) << l;
    } else if (l >= 252 && l <= 259) {
      EXPECT_EQ(c, DynamicClass::kDynamic) << l;
    } else {
      EXPECT_EQ(c, DynamicClass::kSemiStatic) << l;
    }
  }
  EXPECT_TRUE(p.IsGround(40));
  EXPECT_TRUE(p.IsGround(49));
  EXPECT_FALSE(p.IsGround(50));
  EXPECT_TRUE(p.IsMovable(10));
  EXPECT_FALSE(p.IsMovable(50));
}

TEST(LabelPartitionTest, RejectsOverlapAndGaps) {
  const LabelRegistry registry = LabelRegistry::SemanticKitti();
  EXPECT_THROW(LabelPartition({{40, 99}}, {10, 50}, {252}, {40}), ConfigError);
  const LabelPartition gap({{40, 99}}, {10}, {252}, {40});
  EXPECT_THROW(gap.Validate(registry), ConfigError);
  EXPECT_THROW(gap.Classify(1), ConfigError);
  EXPECT_FALSE(gap.TryClassify(1).has_value());
}

TEST(RandomTest, SubstreamsAreDistinctAndStable) {
  EXPECT_EQ(DeriveSeed(1, {2, 3}), DeriveSeed(1, {2, 3}));
  EXPECT_NE(DeriveSeed(1, {2, 3}), DeriveSeed(1, {3, 2}));
  EXPECT_NE(DeriveSeed(1, {2}), DeriveSeed(2, {2}));
  Rng a = MakeRng(5, {stream::kMotion});
  Rng b = MakeRng(5, {stream::kMotion});
  EXPECT_EQ(a(), b());
}

TEST(MotionNoiseTest, ZeroIncrementIsExact) {
  Rng rng = MakeRng(1);
  const Pose2 out = PerturbIncrement(Pose2(), MotionNoise(), rng);
  EXPECT_EQ(out, Pose2());
}

TEST(MotionNoiseTest, RejectsNegativeVariance) {
  MotionNoise n;
  n.y.var_psi = -1.0;
  EXPECT_THROW(n.Validate(), ConfigError);
}

}  // namespace
}  // namespace dynloc
