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

#ifndef SDB_HMM_HPP_
#define SDB_HMM_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sdb/gmm.hpp"
#include "sdb/types.hpp"

namespace sdb {

// Tandem HMM state counts per class: snore 7, breath 5, other 3, silence 3.
int TandemStateCount(EventClass c);

// Left-to-right HMM with self-loops. self[j] + next[j] == 1, where next of the
// last state is the exit probability.
struct HmmClassModel {
  EventClass label = EventClass::kSilence;
  std::vector<double> self;
  std::vector<double> next;
  std::vector<Gmm> states;

  int n_states() const { return static_cast<int>(states.size()); }
};

// A stretch of frames [begin, end) of one feature matrix, with a weight.
struct Segment {
  const FeatureMatrix* features = nullptr;
  std::size_t begin = 0;
  std::size_t end = 0;
  double weight = 1.0;

  std::size_t length() const { return end - begin; }
};

struct HmmTrainOptions {
  int gmm_components = 7;
  int max_iterations = 20;
  double tolerance = 1e-5;  // per-frame log-likelihood gain
  double variance_floor = kVarianceFloor;
  std::uint64_t seed = 1;
};

struct HmmTrainResult {
  HmmClassModel model;
  std::vector<double> log_likelihood;  // total, before each re-estimation
  std::size_t skipped_segments = 0;    // shorter than the state count
  double frames = 0.0;                 // weighted frame count used
};

// Uniform segmentation into states and a GMM per state.
HmmClassModel InitHmm(EventClass label, int n_states, std::span<const Segment> segments,
                      const HmmTrainOptions& opts);

// Baum-Welch re-estimation of transitions and state mixtures, starting from
// `init`. Every segment enters at state 0 and leaves from the last state.
HmmTrainResult BaumWelch(const HmmClassModel& init, std::span<const Segment> segments,
                         const HmmTrainOptions& opts);

// Total log-likelihood of the segments (weighted).
double SegmentLogLikelihood(const HmmClassModel& model, std::span<const Segment> segments);

// InitHmm followed by BaumWelch with the per-class state count.
HmmTrainResult TrainClassHmm(EventClass label, std::span<const Segment> segments,
                             const HmmTrainOptions& opts);

// Per-class training on labelled segments. `per_class[c]` lists class c's
// cut-out segments.
std::array<HmmTrainResult, kNumClasses> TrainTandem(
    const std::array<std::vector<Segment>, kNumClasses>& per_class, const HmmTrainOptions& opts);

}  // namespace sdb

#endif  // SDB_HMM_HPP_
