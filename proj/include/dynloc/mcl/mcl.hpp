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

#ifndef DYNLOC_MCL_MCL_HPP_
#define DYNLOC_MCL_MCL_HPP_

#include <cstdint>
#include <vector>

#include "dynloc/core/labels.hpp"
#include "dynloc/core/motion_noise.hpp"
#include "dynloc/core/pose2.hpp"
#include "dynloc/core/random.hpp"
#include "dynloc/core/scan.hpp"
#include "dynloc/core/session.hpp"
#include "dynloc/filters/filters.hpp"
#include "dynloc/ndt/ndt_map.hpp"

namespace dynloc::mcl {

using filters::MethodSpec;

struct Particle {
  Pose2 pose;
  double weight = 0.0;
};

using ParticleSet = std::vector<Particle>;

struct LocalizationConfig {
  std::size_t particle_count = 500;
  double init_half_extent = 20.0;  // m, in x and y around the initial pose
  double resample_threshold = 0.5;  // fraction of particle_count
  double scan_ndt_resolution = 0.6;
  ndt::L2Params l2;
  ndt::CellValidity scan_validity;
  double weight_floor = 1e-6;
  MotionNoise motion;
  // Reset to uniform weights when every particle scored at the floor.
  bool exhaustion_reset = true;

  void Validate() const;
};

// Uniform in x0 +- init_half_extent (x, y) and over the full circle in psi,
// equal weights.
ParticleSet Initialize(const Pose2& x0, const LocalizationConfig& config, std::uint64_t seed);

// Composes every particle with the increment perturbed by zero-mean Gaussian
// noise; the variance of axis a is a.var_t * |translation| + a.var_psi * |rotation|.
void Predict(ParticleSet& particles, const Pose2& odom_increment, const MotionNoise& noise,
             Rng& rng);

struct WeightUpdate {
  filters::TrackState state;
  bool exhausted = false;
  std::size_t scan_points = 0;      // after filtering
  std::size_t scan_components = 0;  // after rasterization
};

// Filters the scan according to `method`, rasterizes it once and multiplies
// each weight by max(L2 score, weight_floor) before renormalizing.
// `sensor_pose` (odometry) places cluster centroids for the dynamic filter.
WeightUpdate UpdateWeights(ParticleSet& particles, const ndt::NdtMap& map,
                           const LabeledScan& scan, const Pose2& sensor_pose,
                           const MethodSpec& method, const filters::TrackState& state,
                           const LabelPartition& partition, const LocalizationConfig& config,
                           const filters::FilterConfig& filter_config = {});

// Weight-only part of UpdateWeights for an already rasterized scan.
bool WeighParticles(ParticleSet& particles, const ndt::NdtMap& map,
                    const std::vector<ndt::GaussianComponent>& scan_ndt,
                    const LocalizationConfig& config);

void NormalizeWeights(ParticleSet& particles);
double EffectiveSampleSize(const ParticleSet& particles);

// Systematic resampling to `count` particles with offset u0 in [0, 1/count).
ParticleSet SystematicResample(const ParticleSet& particles, std::size_t count, double u0);

// Resamples when the effective sample size drops below
// resample_threshold * N. Returns whether it resampled.
bool ResampleIfNeeded(ParticleSet& particles, const LocalizationConfig& config, Rng& rng);

// Weighted mean position with a circular mean heading.
Pose2 Estimate(const ParticleSet& particles);

struct LocalizationResult {
  Trajectory trajectory;
  std::size_t exhaustion_events = 0;
  std::size_t resample_count = 0;
};

// Runs predict -> update -> resample -> estimate over every frame. The filter
// starts around the first ground-truth pose. Throws EmptyInputError on an empty log.
LocalizationResult LocalizeSession(const SessionLog& log, const ndt::NdtMap& map,
                                   const MethodSpec& method, const LocalizationConfig& config,
                                   const LabelPartition& partition,
                                   const filters::FilterConfig& filter_config,
                                   std::uint64_t seed);

}  // namespace dynloc::mcl

#endif  // DYNLOC_MCL_MCL_HPP_
