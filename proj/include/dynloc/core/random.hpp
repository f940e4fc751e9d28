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

#ifndef DYNLOC_CORE_RANDOM_HPP_
#define DYNLOC_CORE_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dynloc {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t MixBits(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent substream seed for (seed, tags...). Used to give every stage of
// a run its own generator so results do not depend on evaluation order.
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = MixBits(seed);
  for (std::uint64_t t : tags) h = MixBits(h ^ MixBits(t + 0x632be59bd9b4e019ull));
  return h;
}

inline Rng MakeRng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags = {}) {
  return Rng(DeriveSeed(seed, tags));
}

// Stage tags for DeriveSeed.
namespace stream {
inline constexpr std::uint64_t kMappingOccupancy = 1;
inline constexpr std::uint64_t kSessionChanges = 2;
inline constexpr std::uint64_t kAgents = 3;
inline constexpr std::uint64_t kSensor = 4;
inline constexpr std::uint64_t kOdometry = 5;
inline constexpr std::uint64_t kWorld = 6;
inline constexpr std::uint64_t kInit = 10;
inline constexpr std::uint64_t kMotion = 11;
inline constexpr std::uint64_t kResample = 12;
}  // namespace stream

}  // namespace dynloc

#endif  // DYNLOC_CORE_RANDOM_HPP_
