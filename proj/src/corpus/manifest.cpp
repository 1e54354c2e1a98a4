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

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sdb/corpus.hpp"
#include "sdb/error.hpp"

namespace sdb {

std::string_view ToString(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      break;
  }
  return "test";
}

std::filesystem::path CorpusManifest::Resolve(const std::string& p) const {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

std::vector<ManifestEntry> CorpusManifest::Select(std::initializer_list<Split> splits) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries)
    for (Split s : splits)
      if (e.split == s) {
        out.push_back(e);
        break;
      }
  return out;
}

CorpusManifest ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, fmt::format("cannot open manifest '{}'", path.string()));
  CorpusManifest m;
  m.base_dir = path.parent_path();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() != 4)
      Fail(ErrorCode::kFormat,
           fmt::format("{}:{}: expected 4 tab-separated fields", path.string(), line_no));
    ManifestEntry e{f[0], f[1], Split::kTrain, f[3]};
    if (f[2] == "train")
      e.split = Split::kTrain;
    else if (f[2] == "dev")
      e.split = Split::kDev;
    else if (f[2] == "test")
      e.split = Split::kTest;
    else
      Fail(ErrorCode::kFormat,
           fmt::format("{}:{}: unknown split '{}'", path.string(), line_no, f[2]));
    m.entries.push_back(std::move(e));
  }
  return m;
}

void WriteManifest(const CorpusManifest& manifest, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) Fail(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
  for (const auto& e : manifest.entries)
    f << e.audio_path << '\t' << e.label_path << '\t' << ToString(e.split) << '\t' << e.speaker
      << '\n';
}

std::string RecordingId(const ManifestEntry& e) {
  return std::filesystem::path(e.audio_path).stem().string();
}

}  // namespace sdb
