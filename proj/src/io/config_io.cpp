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

#include "dynloc/io/config_io.hpp"

#include <algorithm>
#include <set>

#include "binary.hpp"
#include "dynloc/core/error.hpp"
#include "json.hpp"

namespace dynloc::io {

namespace {

using nlohmann::json;

// Reads the keys of one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const json& parent, const std::string& key, const std::string& path)
      : path_(path.empty() ? key : path + "." + key) {
    if (parent.contains(key)) {
      node_ = &parent.at(key);
      if (!node_->is_object()) throw ConfigError(path_ + " must be an object");
    }
  }
  explicit Section(const json& root) : node_(&root), path_("") {
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0 || node_ == nullptr) return;
    for (const auto& [key, value] : node_->items()) {
      if (!known_.contains(key)) {
        throw ConfigError("unknown config key " + (path_.empty() ? key : path_ + "." + key));
      }
    }
  }
  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  const json& node() const {
    static const json kEmpty = json::object();
    return node_ != nullptr ? *node_ : kEmpty;
  }
  const std::string& path() const { return path_; }

  template <typename T>
  void Get(const std::string& key, T& out) {
    known_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return;
    try {
      out = node_->at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("bad value for " + Name(key) + ": " + e.what());
    }
  }

  void GetVector(const std::string& key, Eigen::Vector2d& out) {
    std::vector<double> v{out.x(), out.y()};
    Get(key, v);
    if (v.size() != 2) throw ConfigError(Name(key) + " must have two entries");
    out = Eigen::Vector2d(v[0], v[1]);
  }

  void GetAxis(const std::string& key, AxisNoise& out) {
    std::vector<double> v{out.var_t, out.var_psi};
    Get(key, v);
    if (v.size() != 2) throw ConfigError(Name(key) + " must be [var_t, var_psi]");
    out = {v[0], v[1]};
  }

  bool Has(const std::string& key) {
    known_.insert(key);
    return node_ != nullptr && node_->contains(key);
  }

  std::string Name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json* node_ = nullptr;
  std::string path_;
  std::set<std::string> known_;
};

void ReadMotion(Section& parent, const std::string& key, MotionNoise& noise) {
  Section s(parent.node(), key, parent.path());
  s.GetAxis("x", noise.x);
  s.GetAxis("y", noise.y);
  s.GetAxis("psi", noise.psi);
}

json MotionJson(const MotionNoise& n) {
  return {{"x", {n.x.var_t, n.x.var_psi}},
          {"y", {n.y.var_t, n.y.var_psi}},
          {"psi", {n.psi.var_t, n.psi.var_psi}}};
}

}  // namespace

void ExperimentPlan::Validate() const {
  if (mapping_seeds.empty()) throw ConfigError("experiment needs at least one mapping seed");
  if (localization_seeds.empty()) {
    throw ConfigError("experiment needs at least one localization seed");
  }
  if (map_types.empty() || methods.empty()) {
    throw ConfigError("experiment needs at least one map type and one method");
  }
  for (const std::string& m : map_types) {
    if (m != "baseline" && m != "static") throw ConfigError("unknown map type '" + m + "'");
  }
  for (const std::string& m : methods) filters::MethodSpec::FromName(m);
}

LabelPartition PartitionPreset(const std::string& name) {
  const LabelPartition base = LabelPartition::SemanticKittiDefault();
  if (name == "semantic_kitti") return base;
  if (name == "semantic_kitti_merged") {
    std::vector<Label> semi = base.semi_static_labels();
    for (Label l : base.dynamic_labels()) semi.push_back(l);
    return LabelPartition(base.static_ranges(), semi, {}, base.ground_labels());
  }
  throw ConfigError("unknown partition preset '" + name + "'");
}

void Config::Validate() const {
  MakeSessionSpec(session.seed, session.mapping_seed).Validate();
  if (!(map.resolution > 0.0)) throw ConfigError("map resolution must be positive");
  if (!(map.extent.x() > 0.0 && map.extent.y() > 0.0)) {
    throw ConfigError("map extent must be positive");
  }
  filter.Validate();
  localization.Validate();
  partition.Validate(session.registry);
  experiment.Validate();
}

sim::SessionSpec Config::MakeSessionSpec(std::uint64_t seed,
                                         std::optional<std::uint64_t> mapping_seed) const {
  sim::SessionSpec spec = session;
  spec.world = sim::MakeCityWorld(world);
  spec.seed = seed;
  spec.mapping_seed = mapping_seed;
  return spec;
}

Config ParseConfig(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed config: ") + e.what());
  }
  Config c;
  Section top(root);

  {
    Section s(top.node(), "world", "");
    top.Has("world");
    sim::CityParams& w = c.world;
    s.Get("seed", w.seed);
    s.GetVector("bounds_min", w.bounds_min);
    s.GetVector("bounds_max", w.bounds_max);
    s.Get("block_half_x", w.block_half_x);
    s.Get("block_half_y", w.block_half_y);
    s.Get("size_jitter", w.size_jitter);
    s.Get("corner_radius", w.corner_radius);
    s.Get("lane_offset", w.lane_offset);
    s.Get("parking_offset", w.parking_offset);
    s.Get("facade_offset", w.facade_offset);
    s.Get("sidewalk_offset", w.sidewalk_offset);
    s.Get("parking_slots", w.parking_slots);
    s.Get("slot_occupancy", w.slot_occupancy);
    s.Get("moving_cars", w.moving_cars);
    s.Get("pedestrians", w.pedestrians);
    s.Get("robot_speed", w.robot_speed);
    s.Get("moving_labels_distinct", w.moving_labels_distinct);
  }
  {
    Section s(top.node(), "session", "");
    top.Has("session");
    sim::SessionSpec& x = c.session;
    s.Get("seed", x.seed);
    if (s.Has("mapping_seed")) {
      std::uint64_t m = 0;
      s.Get("mapping_seed", m);
      x.mapping_seed = m;
    }
    s.Get("persistence", x.persistence);
    s.Get("spawn_rate", x.spawn_rate);
    s.Get("parking_jitter_min", x.parking_jitter_min);
    s.Get("parking_jitter_max", x.parking_jitter_max);
    s.Get("label_flip_prob", x.label_flip_prob);
    s.Get("range_noise_sigma", x.range_noise_sigma);
    ReadMotion(s, "odom_noise", x.odom_noise);
    s.Has("odom_noise");
    s.Get("frame_rate", x.frame_rate);
    s.Get("duration", x.duration);
    s.Get("beam_count", x.beam_count);
    s.Get("max_range", x.max_range);
    s.Get("ground_return_fraction", x.ground_return_fraction);
    if (s.Has("registry")) {
      std::vector<Label> ids;
      s.Get("registry", ids);
      x.registry = LabelRegistry(std::move(ids));
    }
  }
  {
    Section s(top.node(), "map", "");
    top.Has("map");
    ndt::MapConfig& m = c.map;
    s.Get("resolution", m.resolution);
    s.GetVector("origin", m.origin);
    s.GetVector("extent", m.extent);
    s.Get("p_hit", m.occupancy.p_hit);
    s.Get("p_miss", m.occupancy.p_miss);
    s.Get("l_min", m.occupancy.l_min);
    s.Get("l_max", m.occupancy.l_max);
    s.Get("min_points", m.query.validity.min_points);
    s.Get("eigen_floor", m.query.validity.eigen_floor);
    s.Get("occupancy_threshold", m.query.occupancy_threshold);
  }
  {
    Section s(top.node(), "filter", "");
    top.Has("filter");
    filters::FilterConfig& f = c.filter;
    s.Get("cluster_dist", f.cluster_dist);
    s.Get("min_cluster_size", f.min_cluster_size);
    s.Get("speed_threshold", f.speed_threshold);
    s.Get("gate_radius", f.gate_radius);
    s.Get("voxel_leaf", f.voxel_leaf);
  }
  {
    Section s(top.node(), "localization", "");
    top.Has("localization");
    mcl::LocalizationConfig& l = c.localization;
    s.Get("particle_count", l.particle_count);
    s.Get("init_half_extent", l.init_half_extent);
    s.Get("resample_threshold", l.resample_threshold);
    s.Get("scan_ndt_resolution", l.scan_ndt_resolution);
    s.Get("d1", l.l2.d1);
    s.Get("d2", l.l2.d2);
    s.Get("min_points", l.scan_validity.min_points);
    s.Get("eigen_floor", l.scan_validity.eigen_floor);
    s.Get("weight_floor", l.weight_floor);
    s.Get("exhaustion_reset", l.exhaustion_reset);
    ReadMotion(s, "motion", l.motion);
    s.Has("motion");
  }
  {
    std::string method(c.method.name());
    top.Get("method", method);
    c.method = filters::MethodSpec::FromName(method);
  }
  {
    Section s(top.node(), "partition", "");
    top.Has("partition");
    s.Get("preset", c.partition_preset);
    const LabelPartition base = PartitionPreset(c.partition_preset);
    std::vector<std::vector<Label>> ranges;
    for (const LabelRange& r : base.static_ranges()) ranges.push_back({r.first, r.last});
    std::vector<Label> semi = base.semi_static_labels();
    std::vector<Label> dyn = base.dynamic_labels();
    std::vector<Label> ground = base.ground_labels();
    s.Get("static_ranges", ranges);
    s.Get("semi_static", semi);
    s.Get("dynamic", dyn);
    s.Get("ground", ground);
    std::vector<LabelRange> static_ranges;
    for (const auto& r : ranges) {
      if (r.size() != 2 || r[0] > r[1]) {
        throw ConfigError("partition.static_ranges entries must be [first, last]");
      }
      static_ranges.push_back({r[0], r[1]});
    }
    c.partition = LabelPartition(static_ranges, semi, dyn, ground);
  }
  {
    Section s(top.node(), "experiment", "");
    top.Has("experiment");
    ExperimentPlan& e = c.experiment;
    s.Get("mapping_seeds", e.mapping_seeds);
    s.Get("localization_seeds", e.localization_seeds);
    s.Get("map_types", e.map_types);
    s.Get("methods", e.methods);
  }
  c.Validate();
  return c;
}

Config LoadConfig(const std::string& path) { return ParseConfig(internal::ReadFile(path)); }

std::string DumpConfig(const Config& c) {
  json root;
  const sim::CityParams& w = c.world;
  root["world"] = {{"seed", w.seed},
                   {"bounds_min", {w.bounds_min.x(), w.bounds_min.y()}},
                   {"bounds_max", {w.bounds_max.x(), w.bounds_max.y()}},
                   {"block_half_x", w.block_half_x},
                   {"block_half_y", w.block_half_y},
                   {"size_jitter", w.size_jitter},
                   {"corner_radius", w.corner_radius},
                   {"lane_offset", w.lane_offset},
                   {"parking_offset", w.parking_offset},
                   {"facade_offset", w.facade_offset},
                   {"sidewalk_offset", w.sidewalk_offset},
                   {"parking_slots", w.parking_slots},
                   {"slot_occupancy", w.slot_occupancy},
                   {"moving_cars", w.moving_cars},
                   {"pedestrians", w.pedestrians},
                   {"robot_speed", w.robot_speed},
                   {"moving_labels_distinct", w.moving_labels_distinct}};
  const sim::SessionSpec& x = c.session;
  root["session"] = {{"seed", x.seed},
                     {"persistence", x.persistence},
                     {"spawn_rate", x.spawn_rate},
                     {"parking_jitter_min", x.parking_jitter_min},
                     {"parking_jitter_max", x.parking_jitter_max},
                     {"label_flip_prob", x.label_flip_prob},
                     {"range_noise_sigma", x.range_noise_sigma},
                     {"odom_noise", MotionJson(x.odom_noise)},
                     {"frame_rate", x.frame_rate},
                     {"duration", x.duration},
                     {"beam_count", x.beam_count},
                     {"max_range", x.max_range},
                     {"ground_return_fraction", x.ground_return_fraction},
                     {"registry", x.registry.ids()}};
  if (x.mapping_seed) root["session"]["mapping_seed"] = *x.mapping_seed;
  const ndt::MapConfig& m = c.map;
  root["map"] = {{"resolution", m.resolution},
                 {"origin", {m.origin.x(), m.origin.y()}},
                 {"extent", {m.extent.x(), m.extent.y()}},
                 {"p_hit", m.occupancy.p_hit},
                 {"p_miss", m.occupancy.p_miss},
                 {"l_min", m.occupancy.l_min},
                 {"l_max", m.occupancy.l_max},
                 {"min_points", m.query.validity.min_points},
                 {"eigen_floor", m.query.validity.eigen_floor},
                 {"occupancy_threshold", m.query.occupancy_threshold}};
  const filters::FilterConfig& f = c.filter;
  root["filter"] = {{"cluster_dist", f.cluster_dist},
                    {"min_cluster_size", f.min_cluster_size},
                    {"speed_threshold", f.speed_threshold},
                    {"gate_radius", f.gate_radius},
                    {"voxel_leaf", f.voxel_leaf}};
  const mcl::LocalizationConfig& l = c.localization;
  root["localization"] = {{"particle_count", l.particle_count},
                          {"init_half_extent", l.init_half_extent},
                          {"resample_threshold", l.resample_threshold},
                          {"scan_ndt_resolution", l.scan_ndt_resolution},
                          {"d1", l.l2.d1},
                          {"d2", l.l2.d2},
                          {"min_points", l.scan_validity.min_points},
                          {"eigen_floor", l.scan_validity.eigen_floor},
                          {"weight_floor", l.weight_floor},
                          {"exhaustion_reset", l.exhaustion_reset},
                          {"motion", MotionJson(l.motion)}};
  root["method"] = std::string(c.method.name());
  json ranges = json::array();
  for (const LabelRange& r : c.partition.static_ranges()) ranges.push_back({r.first, r.last});
  root["partition"] = {{"preset", c.partition_preset},
                       {"static_ranges", ranges},
                       {"semi_static", c.partition.semi_static_labels()},
                       {"dynamic", c.partition.dynamic_labels()},
                       {"ground", c.partition.ground_labels()}};
  root["experiment"] = {{"mapping_seeds", c.experiment.mapping_seeds},
                        {"localization_seeds", c.experiment.localization_seeds},
                        {"map_types", c.experiment.map_types},
                        {"methods", c.experiment.methods}};
  return root.dump(2) + "\n";
}

}  // namespace dynloc::io
