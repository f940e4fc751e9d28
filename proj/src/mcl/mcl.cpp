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

#include "dynloc/mcl/mcl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dynloc/core/error.hpp"

namespace dynloc::mcl {

void LocalizationConfig::Validate() const {
  if (particle_count < 1) throw ConfigError("particle_count must be at least 1");
  if (!(init_half_extent >= 0.0)) throw ConfigError("init_half_extent must be non-negative");
  if (!(resample_threshold >= 0.0 && resample_threshold <= 1.0)) {
    throw ConfigError("resample_threshold must lie in [0, 1]");
  }
  if (!(scan_ndt_resolution > 0.0)) throw ConfigError("scan_ndt_resolution must be positive");
  if (!(weight_floor > 0.0)) throw ConfigError("weight_floor must be positive");
  motion.Validate();
}

ParticleSet Initialize(const Pose2& x0, const LocalizationConfig& config, std::uint64_t seed) {
  config.Validate();
  Rng rng = MakeRng(seed, {stream::kInit});
  std::uniform_real_distribution<double> offset(-config.init_half_extent,
                                                config.init_half_extent);
  std::uniform_real_distribution<double> heading(0.0, 2.0 * std::numbers::pi);
  const double w = 1.0 / static_cast<double>(config.particle_count);
  ParticleSet particles;
  particles.reserve(config.particle_count);
  for (std::size_t k = 0; k < config.particle_count; ++k) {
    const double dx = offset(rng);
    const double dy = offset(rng);
    particles.push_back({Pose2(x0.x() + dx, x0.y() + dy, heading(rng)), w});
  }
  return particles;
}

void Predict(ParticleSet& particles, const Pose2& odom_increment, const MotionNoise& noise,
             Rng& rng) {
  for (Particle& p : particles) {
    p.pose = Compose(p.pose, PerturbIncrement(odom_increment, noise, rng));
  }
}

void NormalizeWeights(ParticleSet& particles) {
  double total = 0.0;
  for (const Particle& p : particles) total += p.weight;
  if (!(total > 0.0)) {
    const double w = 1.0 / static_cast<double>(particles.size());
    for (Particle& p : particles) p.weight = w;
    return;
  }
  for (Particle& p : particles) p.weight /= total;
}

bool WeighParticles(ParticleSet& particles, const ndt::NdtMap& map,
                    const std::vector<ndt::GaussianComponent>& scan_ndt,
                    const LocalizationConfig& config) {
  bool all_at_floor = true;
  for (Particle& p : particles) {
    const double score = ndt::L2Score(map, scan_ndt, p.pose, config.l2);
    if (score > config.weight_floor) all_at_floor = false;
    p.weight *= std::max(score, config.weight_floor);
  }
  if (all_at_floor && config.exhaustion_reset) {
    const double w = 1.0 / static_cast<double>(particles.size());
    for (Particle& p : particles) p.weight = w;
    return true;
  }
  NormalizeWeights(particles);
  return all_at_floor;
}

WeightUpdate UpdateWeights(ParticleSet& particles, const ndt::NdtMap& map,
                           const LabeledScan& scan, const Pose2& sensor_pose,
                           const MethodSpec& method, const filters::TrackState& state,
                           const LabelPartition& partition, const LocalizationConfig& config,
                           const filters::FilterConfig& filter_config) {
  filters::Selection selected =
      filters::Select(scan, sensor_pose, state, partition, method, filter_config);
  const std::vector<Eigen::Vector2d> points = Positions(selected.scan);
  const std::vector<ndt::GaussianComponent> scan_ndt =
      ndt::RasterizeScan(points, config.scan_ndt_resolution, config.scan_validity);
  WeightUpdate out;
  out.state = std::move(selected.state);
  out.scan_points = points.size();
  out.scan_components = scan_ndt.size();
  out.exhausted = WeighParticles(particles, map, scan_ndt, config);
  return out;
}

double EffectiveSampleSize(const ParticleSet& particles) {
  double sum_sq = 0.0;
  for (const Particle& p : particles) sum_sq += p.weight * p.weight;
  return sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
}

ParticleSet SystematicResample(const ParticleSet& particles, std::size_t count, double u0) {
  ParticleSet out;
  out.reserve(count);
  if (particles.empty() || count == 0) return out;
  const double step = 1.0 / static_cast<double>(count);
  const double w = step;
  std::size_t i = 0;
  double cumulative = particles[0].weight;
  for (std::size_t m = 0; m < count; ++m) {
    const double u = u0 + static_cast<double>(m) * step;
    while (u >= cumulative && i + 1 < particles.size()) {
      ++i;
      cumulative += particles[i].weight;
    }
    out.push_back({particles[i].pose, w});
  }
  return out;
}

bool ResampleIfNeeded(ParticleSet& particles, const LocalizationConfig& config, Rng& rng) {
  const double n = static_cast<double>(particles.size());
  // Always draw, so the stream position depends only on the frame count.
  std::uniform_real_distribution<double> offset(0.0, 1.0 / n);
  const double u0 = offset(rng);
  if (!(EffectiveSampleSize(particles) < config.resample_threshold * n)) return false;
  particles = SystematicResample(particles, particles.size(), u0);
  return true;
}

Pose2 Estimate(const ParticleSet& particles) {
  double x = 0.0;
  double y = 0.0;
  double sin_sum = 0.0;
  double cos_sum = 0.0;
  double total = 0.0;
  for (const Particle& p : particles) {
    x += p.weight * p.pose.x();
    y += p.weight * p.pose.y();
    sin_sum += p.weight * std::sin(p.pose.psi());
    cos_sum += p.weight * std::cos(p.pose.psi());
    total += p.weight;
  }
  if (!(total > 0.0)) throw ConfigError("cannot estimate from particles with zero total weight");
  return Pose2(x / total, y / total, std::atan2(sin_sum, cos_sum));
}

LocalizationResult LocalizeSession(const SessionLog& log, const ndt::NdtMap& map,
                                   const MethodSpec& method, const LocalizationConfig& config,
                                   const LabelPartition& partition,
                                   const filters::FilterConfig& filter_config,
                                   std::uint64_t seed) {
  if (log.empty()) throw EmptyInputError("cannot localize an empty session");
  config.Validate();
  const SessionLog session = NormalizeSession(log);

  Rng motion_rng = MakeRng(seed, {stream::kMotion});
  Rng resample_rng = MakeRng(seed, {stream::kResample});
  ParticleSet particles = Initialize(session.records.front().ground_truth, config, seed);
  filters::TrackState tracks;

  LocalizationResult result;
  result.trajectory.reserve(session.size());
  for (std::size_t k = 0; k < session.size(); ++k) {
    const SessionRecord& record = session.records[k];
    if (k > 0) {
      const Pose2 increment = Between(session.records[k - 1].odometry, record.odometry);
      Predict(particles, increment, config.motion, motion_rng);
    }
    WeightUpdate update = UpdateWeights(particles, map, record.scan, record.odometry, method,
                                        tracks, partition, config, filter_config);
    tracks = std::move(update.state);
    if (update.exhausted) ++result.exhaustion_events;
    if (ResampleIfNeeded(particles, config, resample_rng)) ++result.resample_count;
    result.trajectory.push_back({record.timestamp(), Estimate(particles)});
  }
  return result;
}

}  // namespace dynloc::mcl
