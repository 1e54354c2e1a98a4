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

#ifndef SDB_TUNE_HPP_
#define SDB_TUNE_HPP_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "sdb/decoder.hpp"
#include "sdb/metrics.hpp"

namespace sdb {

// A held-out recording with precomputed emission scores.
struct DevRecording {
  Eigen::MatrixXd emissions;
  FrameLabels reference;
};

struct TuneGrid {
  std::vector<double> lm_scales;
  std::vector<double> insertion_penalties;
};

struct TunePoint {
  double lm_scale = 1.0;
  double insertion_penalty = 0.0;
  EventErrorReport events;
  FrameEvalReport frames;
};

struct TuneResult {
  TunePoint best;
  std::vector<TunePoint> evaluated;
};

// Pooled scores of one decode setting over the dev set.
TunePoint EvaluateSetting(std::span<const DevRecording> dev, const DecodeGraph& graph,
                          const DecodeConfig& cfg);

// Grid search: lowest pooled event error rate, then highest snore F-measure,
// then smallest |insertion_penalty|, then grid order.
TuneResult TuneDecode(std::span<const DevRecording> dev, const DecodeGraph& graph,
                      const TuneGrid& grid, const DecodeConfig& base);

}  // namespace sdb

#endif  // SDB_TUNE_HPP_
