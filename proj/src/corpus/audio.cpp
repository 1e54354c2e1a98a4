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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "sdb/corpus.hpp"
#include "sdb/error.hpp"

namespace sdb {

AudioClip::AudioClip(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ != kSampleRate)
    Fail(ErrorCode::kInvalidArgument, fmt::format("sample rate must be 16000, got {}", sample_rate));
  for (std::size_t i = 0; i < samples_.size(); ++i)
    if (!std::isfinite(samples_[i]))
      Fail(ErrorCode::kInvalidArgument, fmt::format("non-finite sample at index {}", i));
}

namespace {

std::uint32_t ReadU32(const unsigned char* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
         (std::uint32_t{p[3]} << 24);
}

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace

AudioClip LoadAudio(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, fmt::format("cannot open audio file '{}'", path.string()));
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const auto bad = [&](const std::string& why) {
    Fail(ErrorCode::kFormat, fmt::format("'{}': {}", path.string(), why));
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    bad("not a RIFF/WAVE file");

  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) bad("truncated chunk");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) bad("short fmt chunk");
      const unsigned char* f = bytes.data() + body;
      const std::uint16_t format = ReadU16(f);
      const std::uint16_t channels = ReadU16(f + 2);
      const std::uint32_t rate = ReadU32(f + 4);
      const std::uint16_t bits = ReadU16(f + 14);
      if (format != 1) bad(fmt::format("format={} (PCM required)", format));
      if (channels != 1) bad(fmt::format("channels={} (mono required)", channels));
      if (rate != kSampleRate) bad(fmt::format("sample_rate={} (16000 required)", rate));
      if (bits != 16) bad(fmt::format("bits_per_sample={} (16 required)", bits));
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) bad("data chunk before fmt chunk");
      std::vector<double> samples(size / 2);
      const unsigned char* d = bytes.data() + body;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(ReadU16(d + 2 * i));
        samples[i] = v / 32768.0;
      }
      return AudioClip(std::move(samples));
    }
    pos = body + size + (size & 1u);
  }
  Fail(ErrorCode::kFormat, fmt::format("'{}': no data chunk", path.string()));
}

void SaveAudio(const AudioClip& clip, const std::filesystem::path& path) {
  const auto n = static_cast<std::uint32_t>(clip.size());
  std::string out;
  out.reserve(44 + 2 * std::size_t{n});
  out += "RIFF";
  PutU32(out, 36 + 2 * n);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, kSampleRate);
  PutU32(out, kSampleRate * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out += "data";
  PutU32(out, 2 * n);
  for (double s : clip.samples()) {
    const double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) Fail(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) Fail(ErrorCode::kIo, fmt::format("write failed for '{}'", path.string()));
}

}  // namespace sdb
