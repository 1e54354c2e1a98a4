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

#include "sdb/lm.hpp"

#include <cmath>

#include "sdb/error.hpp"

namespace sdb {

double BigramLm::LogTransition(EventClass from, EventClass to) const {
  return std::log(transition(static_cast<Eigen::Index>(Index(from)), static_cast<Eigen::Index>(Index(to))));
}

BigramLm TrainBigram(std::span<const std::vector<EventClass>> sequences, double alpha) {
  if (sequences.empty()) Fail(ErrorCode::kInvalidArgument, "bigram training needs at least one sequence");
  if (!(alpha > 0.0)) Fail(ErrorCode::kInvalidArgument, "smoothing alpha must be positive");
  Eigen::Matrix4d counts = Eigen::Matrix4d::Zero();
  Eigen::Vector4d first = Eigen::Vector4d::Zero();
  Eigen::Vector4d last = Eigen::Vector4d::Zero();
  for (const auto& seq : sequences) {
    if (seq.empty()) continue;
    first(static_cast<Eigen::Index>(Index(seq.front()))) += 1.0;
    last(static_cast<Eigen::Index>(Index(seq.back()))) += 1.0;
    for (std::size_t i = 1; i < seq.size(); ++i)
      counts(static_cast<Eigen::Index>(Index(seq[i - 1])), static_cast<Eigen::Index>(Index(seq[i]))) += 1.0;
  }
  const double k = static_cast<double>(kNumClasses);
  BigramLm lm;
  lm.alpha = alpha;
  for (Eigen::Index i = 0; i < 4; ++i) {
    const double row = counts.row(i).sum();
    for (Eigen::Index j = 0; j < 4; ++j) lm.transition(i, j) = (counts(i, j) + alpha) / (row + k * alpha);
  }
  lm.initial = (first.array() + alpha) / (first.sum() + k * alpha);
  lm.final = (last.array() + alpha) / (last.sum() + k * alpha);
  return lm;
}

BigramLm TrainBigram(std::span<const LabelTrack> tracks, double alpha) {
  std::vector<std::vector<EventClass>> seqs;
  seqs.reserve(tracks.size());
  for (const auto& t : tracks) seqs.push_back(EventLabels(t));
  return TrainBigram(seqs, alpha);
}

}  // namespace sdb
