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

#include "util/binary_io.hpp"

#include <fstream>
#include <iterator>

#include <zlib.h>

namespace sdb::io {

std::uint32_t Crc32(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void WriteFile(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

void SealWithChecksum(std::string& payload) {
  const std::uint32_t crc = Crc32(payload);
  char raw[4];
  std::memcpy(raw, &crc, 4);
  payload.append(raw, 4);
}

std::string_view CheckAndStripChecksum(std::string_view data, const std::string& context) {
  if (data.size() < 4) Fail(ErrorCode::kCorrupt, context + ": file too short");
  const auto body = data.substr(0, data.size() - 4);
  std::uint32_t stored;
  std::memcpy(&stored, data.data() + body.size(), 4);
  if (stored != Crc32(body)) Fail(ErrorCode::kCorrupt, context + ": checksum mismatch");
  return body;
}

}  // namespace sdb::io
