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

#ifndef SDB_BUNDLE_HPP_
#define SDB_BUNDLE_HPP_

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "sdb/decoder.hpp"
#include "sdb/frontend.hpp"
#include "sdb/hmm.hpp"
#include "sdb/lm.hpp"
#include "sdb/neural.hpp"

namespace sdb {

inline constexpr std::uint32_t kBundleFormatVersion = 1;

// Everything needed to decode one system: the acoustic model (four class
// HMMs, or the frame classifier), the event LM, class priors, the input
// standardiser and the names of the autoencoder normalisers it depends on.
struct ModelBundle {
  SystemKind system = SystemKind::kTandem;
  std::string features;  // mfcc | rm | acf | rm+acf
  std::array<HmmClassModel, kNumClasses> hmms;
  MlpModel classifier;
  BigramLm lm;
  ClassPriors priors;
  Standardizer standardizer;
  std::vector<std::string> norm_refs;

  DecodeGraph Graph() const;
};

std::string SerializeBundle(const ModelBundle& b);
ModelBundle DeserializeBundle(std::string_view bytes, const std::string& context = "bundle");
void SaveBundle(const ModelBundle& b, const std::filesystem::path& path);
ModelBundle LoadBundle(const std::filesystem::path& path);

// Standalone NormStats / BigramLm files.
void SaveNormStats(const NormStats& s, const std::filesystem::path& path);
NormStats LoadNormStats(const std::filesystem::path& path);
void SaveBigram(const BigramLm& lm, const std::filesystem::path& path);
BigramLm LoadBigram(const std::filesystem::path& path);

}  // namespace sdb

#endif  // SDB_BUNDLE_HPP_
