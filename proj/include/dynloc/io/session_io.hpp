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

#ifndef DYNLOC_IO_SESSION_IO_HPP_
#define DYNLOC_IO_SESSION_IO_HPP_

#include <cstdint>
#include <string>

#include "dynloc/core/session.hpp"

namespace dynloc::io {

inline constexpr std::uint32_t kSessionFormatVersion = 1;

// Binary little-endian encoding, see docs/file_formats.md. Reals are stored
// as IEEE-754 doubles, so decoding is bit-exact.
std::string EncodeSession(const SessionLog& log);

// Throws VersionMismatchError, TruncatedFileError or CountMismatchError, and
// FormatError for anything else malformed.
SessionLog DecodeSession(const std::string& bytes);

void WriteSession(const std::string& path, const SessionLog& log);
SessionLog ReadSession(const std::string& path);

}  // namespace dynloc::io

#endif  // DYNLOC_IO_SESSION_IO_HPP_
