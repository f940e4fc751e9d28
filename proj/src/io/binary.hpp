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

#ifndef DYNLOC_SRC_IO_BINARY_HPP_
#define DYNLOC_SRC_IO_BINARY_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "dynloc/core/error.hpp"

namespace dynloc::io::internal {

// Little-endian encoder into a growing byte buffer.
class Writer {
 public:
  void U8(std::uint8_t v) { bytes_.push_back(static_cast<char>(v)); }
  void U16(std::uint16_t v) { Put(v, 2); }
  void U32(std::uint32_t v) { Put(v, 4); }
  void U64(std::uint64_t v) { Put(v, 8); }
  void I32(std::int32_t v) { Put(static_cast<std::uint32_t>(v), 4); }
  void F64(double v) { Put(std::bit_cast<std::uint64_t>(v), 8); }
  void Raw(std::string_view s) { bytes_.append(s); }
  void String(std::string_view s) {
    U32(static_cast<std::uint32_t>(s.size()));
    Raw(s);
  }
  std::size_t size() const { return bytes_.size(); }
  const std::string& bytes() const { return bytes_; }
  std::string& bytes() { return bytes_; }

 private:
  void Put(std::uint64_t v, int n) {
    for (int k = 0; k < n; ++k) bytes_.push_back(static_cast<char>((v >> (8 * k)) & 0xffu));
  }
  std::string bytes_;
};

// Little-endian decoder. Running past the end throws TruncatedFileError.
class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint8_t U8() { return static_cast<std::uint8_t>(Get(1)); }
  std::uint16_t U16() { return static_cast<std::uint16_t>(Get(2)); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Get(4)); }
  std::uint64_t U64() { return Get(8); }
  std::int32_t I32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(Get(4))); }
  double F64() { return std::bit_cast<double>(Get(8)); }
  std::string_view Raw(std::size_t n) {
    Need(n);
    std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::string String() { return std::string(Raw(U32())); }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  void Need(std::size_t n) const {
    if (n > remaining()) throw TruncatedFileError("unexpected end of file");
  }

 private:
  std::uint64_t Get(int n) {
    Need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int k = 0; k < n; ++k) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + k])) << (8 * k);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string ReadFile(const std::string& path);
// Writes through a temporary file and renames it into place.
void WriteFile(const std::string& path, const std::string& bytes);

}  // namespace dynloc::io::internal

#endif  // DYNLOC_SRC_IO_BINARY_HPP_
