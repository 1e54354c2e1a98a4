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

#ifndef SDB_LM_HPP_
#define SDB_LM_HPP_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "sdb/corpus.hpp"
#include "sdb/types.hpp"

namespace sdb {

// Event bigram with add-alpha smoothing. Rows of `transition` are previous
// events, columns next events.
struct BigramLm {
  Eigen::Matrix4d transition = Eigen::Matrix4d::Constant(0.25);
  Eigen::Vector4d initial = Eigen::Vector4d::Constant(0.25);
  Eigen::Vector4d final = Eigen::Vector4d::Constant(0.25);
  double alpha = 1.0;

  double LogTransition(EventClass from, EventClass to) const;
};

BigramLm TrainBigram(std::span<const std::vector<EventClass>> sequences, double alpha = 1.0);
BigramLm TrainBigram(std::span<const LabelTrack> tracks, double alpha = 1.0);

}  // namespace sdb

#endif  // SDB_LM_HPP_
