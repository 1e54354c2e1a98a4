// Copyright 2026 The sdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SDB_UTIL_BINARY_IO_HPP_
#define SDB_UTIL_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>

#include "sdb/error.hpp"

namespace sdb::io {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

// Appends little-endian scalars to a byte buffer.
class ByteWriter {
 public:
  template <typename T>
  void Put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    char raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    buf_.append(raw, sizeof(T));
  }
  void PutBytes(std::string_view b) { buf_.append(b); }
  void PutString(std::string_view s) {
    Put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  const std::string& bytes() const { return buf_; }
  std::string& bytes() { return buf_; }

 private:
  std::string buf_;
};

// Bounds-checked reader; every overrun is reported as a corrupt file.
class ByteReader {
 public:
  ByteReader(std::string_view data, std::string context)
      : data_(data), context_(std::move(context)) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string_view GetBytes(std::size_t n) {
    Need(n);
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::string GetString() { return std::string(GetBytes(Get<std::uint32_t>())); }
  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void Need(std::size_t n) const {
    if (data_.size() - pos_ < n) Fail(ErrorCode::kCorrupt, context_ + ": unexpected end of data");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
  std::string context_;
};

std::uint32_t Crc32(std::string_view data);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view data);

// Appends a CRC32 of the payload.
void SealWithChecksum(std::string& payload);
// Verifies and strips the trailing CRC32; throws kCorrupt on mismatch.
std::string_view CheckAndStripChecksum(std::string_view data, const std::string& context);

}  // namespace sdb::io

#endif  // SDB_UTIL_BINARY_IO_HPP_
