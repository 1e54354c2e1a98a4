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

#include "sdb/screen.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "sdb/frontend.hpp"

namespace sdb {

Screener TrainScreener(std::span<const FeatureMatrix> mfccs, std::span<const FrameLabels> labels,
                       const GmmFitOptions& opts) {
  if (mfccs.size() != labels.size())
    Fail(ErrorCode::kInvalidArgument, "screener: feature and label counts differ");
  WeightedFrames snore, rest;
  for (std::size_t i = 0; i < mfccs.size(); ++i) {
    if (mfccs[i].rows() != labels[i].size())
      Fail(ErrorCode::kInvalidArgument, fmt::format("screener: recording {} has {} frames but {} labels", i,
                                                    mfccs[i].rows(), labels[i].size()));
    for (std::size_t t = 0; t < mfccs[i].rows(); ++t) {
      (labels[i].labels[t] == EventClass::kSnore ? snore : rest).Add(mfccs[i].row(t));
    }
  }
  if (snore.size() == 0 || rest.size() == 0)
    Fail(ErrorCode::kInvalidArgument, "screener: need both snore and non-snore frames");
  Screener s;
  s.snore = FitGmm(snore, opts).gmm;
  GmmFitOptions other = opts;
  other.seed = opts.seed + 1;
  s.non_snore = FitGmm(rest, other).gmm;
  return s;
}

double SnoreFraction(const FeatureMatrix& mfcc, const Screener& s, std::size_t begin, std::size_t end) {
  if (begin > end || end > mfcc.rows()) Fail(ErrorCode::kInvalidArgument, "screener: bad frame range");
  if (begin == end) return 0.0;
  std::size_t hits = 0;
  for (std::size_t t = begin; t < end; ++t) {
    if (s.snore.LogLikelihood(mfcc.row(t)) > s.non_snore.LogLikelihood(mfcc.row(t))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(end - begin);
}

std::vector<std::pair<double, double>> ScreenSegments(const AudioClip& clip, const Screener& s,
                                                      double threshold, double segment_seconds) {
  if (!(segment_seconds > 0.0)) Fail(ErrorCode::kInvalidArgument, "screener: segment length must be positive");
  std::vector<std::pair<double, double>> out;
  const auto n_segments = static_cast<std::size_t>(std::floor(clip.duration() / segment_seconds + 1e-9));
  if (n_segments == 0) return out;
  const FeatureMatrix mfcc = Mfcc(clip);
  const double period = mfcc.frame_period();
  const double half_win = 0.5 * kFrameLength / static_cast<double>(kSampleRate);
  // A frame belongs to the segment holding its centre.
  auto first_frame = [&](double t) {
    double f = std::ceil((t - half_win) / period - 1e-9);
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(mfcc.rows())));
  };
  for (std::size_t k = 0; k < n_segments; ++k) {
    const double a = k * segment_seconds, b = (k + 1) * segment_seconds;
    const double frac = SnoreFraction(mfcc, s, first_frame(a), first_frame(b));
    if (frac >= threshold) out.emplace_back(a, b);
  }
  return out;
}

}  // namespace sdb
