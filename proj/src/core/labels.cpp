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

#include "dynloc/core/labels.hpp"

#include <algorithm>

#include "dynloc/core/error.hpp"

namespace dynloc {

const char* ToString(DynamicClass c) {
  switch (c) {
    case DynamicClass::kStatic:
      return "S";
    case DynamicClass::kSemiStatic:
      return "E";
    case DynamicClass::kDynamic:
      return "D";
  }
  return "?";
}

std::string ClassSet::ToString() const {
  std::string out = "{";
  for (DynamicClass c :
       {DynamicClass::kStatic, DynamicClass::kSemiStatic, DynamicClass::kDynamic}) {
    if (!Contains(c)) continue;
    if (out.size() > 1) out += ",";
    out += dynloc::ToString(c);
  }
  return out + "}";
}

LabelRegistry::LabelRegistry(std::vector<Label> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

LabelRegistry LabelRegistry::SemanticKitti() {
  return LabelRegistry({0,  1,  10, 11, 13, 15, 16, 18, 20, 30, 31, 32,
                        40, 44, 48, 49, 50, 51, 52, 60, 70, 71, 72, 80,
                        81, 99, 252, 253, 254, 255, 256, 257, 258, 259});
}

bool LabelRegistry::Contains(Label label) const {
  return std::binary_search(ids_.begin(), ids_.end(), label);
}

LabelPartition::LabelPartition(std::vector<LabelRange> static_ranges,
                               std::vector<Label> semi_static, std::vector<Label> dynamic,
                               std::vector<Label> ground)
    : static_ranges_(std::move(static_ranges)),
      semi_static_(std::move(semi_static)),
      dynamic_(std::move(dynamic)),
      ground_(std::move(ground)) {
  for (const LabelRange& r : static_ranges_) {
    if (r.first > r.last) throw ConfigError("static label range with first > last");
  }
  BuildTables();
}

LabelPartition LabelPartition::SemanticKittiDefault() {
  return LabelPartition({{40, 99}}, {0, 1, 10, 11, 13, 15, 16, 18, 20, 30, 31, 32},
                        {252, 253, 254, 255, 256, 257, 258, 259}, {40, 44, 48, 49});
}

void LabelPartition::BuildTables() {
  Label max_label = 0;
  for (const LabelRange& r : static_ranges_) max_label = std::max(max_label, r.last);
  for (Label l : semi_static_) max_label = std::max(max_label, l);
  for (Label l : dynamic_) max_label = std::max(max_label, l);
  table_.assign(static_cast<std::size_t>(max_label) + 1, -1);

  auto assign = [this](Label l, DynamicClass c) {
    if (table_[l] >= 0 && table_[l] != static_cast<std::int8_t>(c)) {
      throw ConfigError("label " + std::to_string(l) + " assigned to two dynamic classes");
    }
    if (table_[l] >= 0) {
      throw ConfigError("label " + std::to_string(l) + " listed twice");
    }
    table_[l] = static_cast<std::int8_t>(c);
  };
  for (const LabelRange& r : static_ranges_) {
    for (unsigned l = r.first; l <= r.last; ++l) {
      assign(static_cast<Label>(l), DynamicClass::kStatic);
    }
  }
  for (Label l : semi_static_) assign(l, DynamicClass::kSemiStatic);
  for (Label l : dynamic_) assign(l, DynamicClass::kDynamic);

  Label max_ground = 0;
  for (Label l : ground_) max_ground = std::max(max_ground, l);
  ground_table_.assign(ground_.empty() ? 0 : static_cast<std::size_t>(max_ground) + 1, 0);
  for (Label l : ground_) ground_table_[l] = 1;
}

void LabelPartition::Validate(const LabelRegistry& registry) const {
  for (Label l : registry.ids()) {
    if (!TryClassify(l)) {
      throw ConfigError("label " + std::to_string(l) +
                        " of the registry is not covered by the partition");
    }
  }
}

std::optional<DynamicClass> LabelPartition::TryClassify(Label label) const {
  if (label < table_.size() && table_[label] >= 0) {
    return static_cast<DynamicClass>(table_[label]);
  }
  return std::nullopt;
}

void LabelPartition::ThrowUnknown(Label label) {
  throw ConfigError("label " + std::to_string(label) + " is not part of the label partition");
}

}  // namespace dynloc
