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

#ifndef DYNLOC_IO_CONFIG_IO_HPP_
#define DYNLOC_IO_CONFIG_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dynloc/core/labels.hpp"
#include "dynloc/filters/filters.hpp"
#include "dynloc/mcl/mcl.hpp"
#include "dynloc/ndt/map_builder.hpp"
#include "dynloc/sim/simulator.hpp"
#include "dynloc/sim/world.hpp"

namespace dynloc::io {

struct ExperimentPlan {
  std::vector<std::uint64_t> mapping_seeds{1, 2};
  std::vector<std::uint64_t> localization_seeds{101, 102, 103, 104, 105, 106, 107};
  std::vector<std::string> map_types{"baseline", "static"};
  std::vector<std::string> methods{"baseline", "filtered", "static", "combined"};

  // Throws ConfigError for empty lists or unknown names.
  void Validate() const;
};

// Everything a command needs. The session's world is generated from `world`
// by sim::MakeCityWorld; session.world is ignored here.
struct Config {
  sim::CityParams world;
  sim::SessionSpec session;
  ndt::MapConfig map;
  filters::FilterConfig filter;
  mcl::LocalizationConfig localization;
  filters::MethodSpec method;
  // "semantic_kitti" (moving classes dynamic) or "semantic_kitti_merged"
  // (moving classes treated like their parked counterparts).
  std::string partition_preset = "semantic_kitti";
  LabelPartition partition = LabelPartition::SemanticKittiDefault();
  ExperimentPlan experiment;

  void Validate() const;
  // Session spec with the generated world and the given seeds.
  sim::SessionSpec MakeSessionSpec(std::uint64_t seed,
                                   std::optional<std::uint64_t> mapping_seed) const;
};

LabelPartition PartitionPreset(const std::string& name);

// JSON document. Every section and key is optional; missing keys keep their
// defaults, unknown keys throw ConfigError, malformed JSON throws FormatError.
Config ParseConfig(const std::string& text);
Config LoadConfig(const std::string& path);
// Complete document with every key, stable key order.
std::string DumpConfig(const Config& config);

}  // namespace dynloc::io

#endif  // DYNLOC_IO_CONFIG_IO_HPP_
