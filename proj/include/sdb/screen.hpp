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

#ifndef SDB_SCREEN_HPP_
#define SDB_SCREEN_HPP_

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "sdb/corpus.hpp"
#include "sdb/features.hpp"
#include "sdb/gmm.hpp"

namespace sdb {

inline constexpr double kScreenSegmentSeconds = 120.0;
inline constexpr double kScreenThreshold = 0.20;

// Snore / non-snore GMM pair over 12-dim MFCC frames.
struct Screener {
  Gmm snore;
  Gmm non_snore;
};

Screener TrainScreener(std::span<const FeatureMatrix> mfccs, std::span<const FrameLabels> labels,
                       const GmmFitOptions& opts);

// Fraction of frames in [begin, end) where the snore GMM scores higher.
double SnoreFraction(const FeatureMatrix& mfcc, const Screener& s, std::size_t begin, std::size_t end);

// Full 120 s segments whose snore fraction reaches the threshold, as
// (start, end) seconds. Clips shorter than one segment yield nothing.
std::vector<std::pair<double, double>> ScreenSegments(const AudioClip& clip, const Screener& s,
                                                      double threshold = kScreenThreshold,
                                                      double segment_seconds = kScreenSegmentSeconds);

void SaveScreener(const Screener& s, const std::filesystem::path& path);
Screener LoadScreener(const std::filesystem::path& path);

}  // namespace sdb

#endif  // SDB_SCREEN_HPP_
