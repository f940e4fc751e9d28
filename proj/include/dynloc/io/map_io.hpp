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

#ifndef DYNLOC_IO_MAP_IO_HPP_
#define DYNLOC_IO_MAP_IO_HPP_

#include <cstdint>
#include <string>

#include "dynloc/ndt/ndt_grid.hpp"

namespace dynloc::io {

inline constexpr std::uint32_t kMapFormatVersion = 1;

// Geometry, occupancy parameters and the allocated cells in (row, column)
// order. See docs/file_formats.md.
std::string EncodeMap(const ndt::NdtGrid& grid);
ndt::NdtGrid DecodeMap(const std::string& bytes);

void WriteMap(const std::string& path, const ndt::NdtGrid& grid);
ndt::NdtGrid ReadMap(const std::string& path);

}  // namespace dynloc::io

#endif  // DYNLOC_IO_MAP_IO_HPP_
