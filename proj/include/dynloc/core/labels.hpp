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

#ifndef DYNLOC_CORE_LABELS_HPP_
#define DYNLOC_CORE_LABELS_HPP_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace dynloc {

using Label = std::uint16_t;

// Semantic KITTI ids used throughout the simulator and the default partition.
namespace labels {
inline constexpr Label kUnlabeled = 0;
inline constexpr Label kCar = 10;
inline constexpr Label kPerson = 30;
inline constexpr Label kRoad = 40;
inline constexpr Label kParking = 44;
inline constexpr Label kSidewalk = 48;
inline constexpr Label kOtherGround = 49;
inline constexpr Label kBuilding = 50;
inline constexpr Label kFence = 51;
inline constexpr Label kTrunk = 71;
inline constexpr Label kPole = 80;
inline constexpr Label kMovingCar = 252;
inline constexpr Label kMovingPerson = 254;
}  // namespace labels

enum class DynamicClass : std::uint8_t { kStatic = 0, kSemiStatic = 1, kDynamic = 2 };

const char* ToString(DynamicClass c);

// Subset of the three dynamic classes (the delta of a map or a localizer).
class ClassSet {
 public:
  constexpr ClassSet() = default;
  ClassSet(std::initializer_list<DynamicClass> classes) {
    for (DynamicClass c : classes) Insert(c);
  }

  static ClassSet All() {
    return {DynamicClass::kStatic, DynamicClass::kSemiStatic, DynamicClass::kDynamic};
  }
  static ClassSet None() { return {}; }

  void Insert(DynamicClass c) { bits_ |= Bit(c); }
  bool Contains(DynamicClass c) const { return (bits_ & Bit(c)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::uint8_t bits() const { return bits_; }

  // e.g. "{S,E}".
  std::string ToString() const;

  friend bool operator==(const ClassSet&, const ClassSet&) = default;

 private:
  static constexpr std::uint8_t Bit(DynamicClass c) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  std::uint8_t bits_ = 0;
};

// The set of labels a segmentation source can emit.
class LabelRegistry {
 public:
  LabelRegistry() = default;
  explicit LabelRegistry(std::vector<Label> ids);

  // The Semantic KITTI label vocabulary.
  static LabelRegistry SemanticKitti();

  const std::vector<Label>& ids() const { return ids_; }
  bool Contains(Label label) const;
  std::size_t size() const { return ids_.size(); }

  friend bool operator==(const LabelRegistry&, const LabelRegistry&) = default;

 private:
  std::vector<Label> ids_;  // sorted, unique
};

struct LabelRange {
  Label first = 0;
  Label last = 0;  // inclusive
  friend bool operator==(const LabelRange&, const LabelRange&) = default;
};

// Assignment of every registry label to exactly one dynamic class, plus the
// labels treated as ground by the dynamic filter.
class LabelPartition {
 public:
  LabelPartition() = default;
  LabelPartition(std::vector<LabelRange> static_ranges, std::vector<Label> semi_static,
                 std::vector<Label> dynamic, std::vector<Label> ground);

  // Static = 40-99, dynamic = the 25x moving classes, everything else
  // movable-but-not-moving.
  static LabelPartition SemanticKittiDefault();

  // Throws ConfigError unless the three sets are pairwise disjoint and cover
  // every label of the registry.
  void Validate(const LabelRegistry& registry) const;

  // Throws ConfigError for labels that belong to none of the sets.
  DynamicClass Classify(Label label) const {
    if (label < table_.size() && table_[label] >= 0) {
      return static_cast<DynamicClass>(table_[label]);
    }
    ThrowUnknown(label);
  }
  std::optional<DynamicClass> TryClassify(Label label) const;
  bool IsGround(Label label) const {
    return label < ground_table_.size() && ground_table_[label] != 0;
  }
  bool IsMovable(Label label) const { return Classify(label) != DynamicClass::kStatic; }

  const std::vector<LabelRange>& static_ranges() const { return static_ranges_; }
  const std::vector<Label>& semi_static_labels() const { return semi_static_; }
  const std::vector<Label>& dynamic_labels() const { return dynamic_; }
  const std::vector<Label>& ground_labels() const { return ground_; }

 private:
  [[noreturn]] static void ThrowUnknown(Label label);
  void BuildTables();

  std::vector<LabelRange> static_ranges_;
  std::vector<Label> semi_static_;
  std::vector<Label> dynamic_;
  std::vector<Label> ground_;
  std::vector<std::int8_t> table_;  // label -> class, -1 for unassigned
  std::vector<std::uint8_t> ground_table_;
};

}  // namespace dynloc

#endif  // DYNLOC_CORE_LABELS_HPP_
