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

#include "dynloc/io/session_io.hpp"

#include "binary.hpp"
#include "dynloc/core/error.hpp"

namespace dynloc::io {

namespace {

constexpr std::string_view kMagic("DLSESS\0\0", 8);
// timestamp, two poses, point count
constexpr std::size_t kRecordHeaderBytes = 8 + 6 * 8 + 4;
constexpr std::size_t kPointBytes = 8 + 8 + 2;

void PutPose(internal::Writer& w, const Pose2& p) {
  w.F64(p.x());
  w.F64(p.y());
  w.F64(p.psi());
}

Pose2 GetPose(internal::Reader& r) {
  const double x = r.F64();
  const double y = r.F64();
  const double psi = r.F64();
  return Pose2(x, y, psi);
}

}  // namespace

std::string EncodeSession(const SessionLog& log) {
  internal::Writer w;
  w.Raw(kMagic);
  w.U32(kSessionFormatVersion);
  w.F64(log.frame_rate);
  w.U32(static_cast<std::uint32_t>(log.registry.size()));
  for (Label id : log.registry.ids()) w.U16(id);
  w.String(log.spec_echo);
  w.U64(log.records.size());
  for (const SessionRecord& rec : log.records) {
    w.U64(kRecordHeaderBytes + kPointBytes * rec.scan.points.size());
    w.F64(rec.scan.timestamp);
    PutPose(w, rec.ground_truth);
    PutPose(w, rec.odometry);
    w.U32(static_cast<std::uint32_t>(rec.scan.points.size()));
    for (const LabeledPoint& p : rec.scan.points) {
      w.F64(p.x);
      w.F64(p.y);
      w.U16(p.label);
    }
  }
  return std::move(w.bytes());
}

SessionLog DecodeSession(const std::string& bytes) {
  internal::Reader r(bytes);
  if (r.remaining() < kMagic.size() || r.Raw(kMagic.size()) != kMagic) {
    throw FormatError("not a session file");
  }
  const std::uint32_t version = r.U32();
  if (version != kSessionFormatVersion) {
    throw VersionMismatchError("unsupported session format version " + std::to_string(version));
  }
  SessionLog log;
  log.frame_rate = r.F64();
  const std::uint32_t registry_size = r.U32();
  r.Need(2ull * registry_size);
  std::vector<Label> ids(registry_size);
  for (Label& id : ids) id = r.U16();
  log.registry = LabelRegistry(std::move(ids));
  log.spec_echo = r.String();
  const std::uint64_t frames = r.U64();
  // Each record needs at least its length prefix and header.
  if (frames > r.remaining() / (8 + kRecordHeaderBytes)) {
    throw TruncatedFileError("file too short for " + std::to_string(frames) + " frames");
  }
  log.records.reserve(frames);
  for (std::uint64_t f = 0; f < frames; ++f) {
    const std::uint64_t record_bytes = r.U64();
    r.Need(record_bytes);
    const std::size_t start = r.position();
    SessionRecord rec;
    rec.scan.timestamp = r.F64();
    rec.ground_truth = GetPose(r);
    rec.odometry = GetPose(r);
    const std::uint32_t count = r.U32();
    if (record_bytes != kRecordHeaderBytes + kPointBytes * static_cast<std::uint64_t>(count)) {
      throw CountMismatchError("frame " + std::to_string(f) + " declares " +
                               std::to_string(count) + " points but holds " +
                               std::to_string(record_bytes) + " bytes");
    }
    rec.scan.points.resize(count);
    for (LabeledPoint& p : rec.scan.points) {
      p.x = r.F64();
      p.y = r.F64();
      p.label = r.U16();
    }
    if (r.position() - start != record_bytes) throw FormatError("record length mismatch");
    log.records.push_back(std::move(rec));
  }
  if (r.remaining() != 0) {
    throw CountMismatchError("data after the declared " + std::to_string(frames) + " frames");
  }
  return log;
}

void WriteSession(const std::string& path, const SessionLog& log) {
  internal::WriteFile(path, EncodeSession(log));
}

SessionLog ReadSession(const std::string& path) {
  return DecodeSession(internal::ReadFile(path));
}

}  // namespace dynloc::io
