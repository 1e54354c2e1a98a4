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

#ifndef SDB_DECODER_HPP_
#define SDB_DECODER_HPP_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "sdb/features.hpp"
#include "sdb/hmm.hpp"
#include "sdb/lm.hpp"
#include "sdb/types.hpp"

namespace sdb {

// Per-class left-to-right chain in the log domain. log_next of the last state
// is the exit score.
struct ClassChain {
  std::vector<double> log_self;
  std::vector<double> log_next;

  int n_states() const { return static_cast<int>(log_self.size()); }
};

// Connected-event network: any class may follow any other class; an event of
// a class is never directly followed by another event of the same class.
struct DecodeGraph {
  std::vector<ClassChain> classes;
  // Log LM scores indexed [from][to]; empty when the graph has no LM.
  Eigen::MatrixXd log_transition;
  Eigen::VectorXd log_initial;
  Eigen::VectorXd log_final;

  int total_states() const;
  int first_state(int c) const;
  int last_state(int c) const;
  int class_of(int state) const;
};

enum class SystemKind : std::uint8_t { kTandem = 0, kHybrid = 1 };
std::string_view ToString(SystemKind s);

struct DecodeConfig {
  double lm_scale = 1.0;
  double insertion_penalty = 0.0;  // added per event boundary
  bool use_lm = true;
  SystemKind mode = SystemKind::kTandem;
};

struct DecodeResult {
  std::vector<int> states;  // per frame
  std::vector<int> labels;  // class index per frame
  double score = 0.0;
};

// Token-passing Viterbi over emissions (T x total_states log scores). Ties go
// to the earlier candidate: staying, then advancing, then entering from the
// lowest class index.
DecodeResult Viterbi(const Eigen::MatrixXd& emissions, const DecodeGraph& graph,
                     const DecodeConfig& cfg);

// Scores one state path under the same rules; -inf for illegal paths.
double PathScore(const Eigen::MatrixXd& emissions, const DecodeGraph& graph,
                 const DecodeConfig& cfg, std::span<const int> states);

struct ClassPriors {
  std::array<double, kNumClasses> prior{0.25, 0.25, 0.25, 0.25};
  // Mean event length in frames, for the hybrid self-loop probability.
  std::array<double, kNumClasses> mean_duration{10.0, 10.0, 10.0, 10.0};
};

ClassPriors EstimatePriors(std::span<const FrameLabels> labels);

DecodeGraph TandemGraph(const std::array<HmmClassModel, kNumClasses>& models, const BigramLm& lm);
DecodeGraph HybridGraph(const ClassPriors& priors, const BigramLm& lm);

// T x total_states emission scores.
Eigen::MatrixXd TandemEmissions(const std::array<HmmClassModel, kNumClasses>& models,
                                const FeatureMatrix& features);
// log p(c|x) - log p(c), posteriors floored at 1e-10.
Eigen::MatrixXd HybridEmissions(const FeatureMatrix& posteriors, const ClassPriors& priors);

EventSequence ToEvents(const DecodeResult& r);

}  // namespace sdb

#endif  // SDB_DECODER_HPP_
