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

#ifndef SDB_TESTS_ORACLES_FIXTURES_HPP_
#define SDB_TESTS_ORACLES_FIXTURES_HPP_

#include <algorithm>
#include <cmath>
#include <random>

#include "sdb/decoder.hpp"

namespace testgraph {

// Random decode graph with at most max_states states in 1 to 3 classes of 1
// or 2 states each, optionally with LM scores.
inline sdb::DecodeGraph RandomGraph(std::mt19937& gen, int max_states, bool with_lm) {
  std::uniform_int_distribution<int> n_classes_d(1, 3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  sdb::DecodeGraph g;
  int remaining = max_states;
  int n_classes = std::min(n_classes_d(gen), remaining);
  for (int c = 0; c < n_classes; ++c) {
    int left = remaining - (n_classes - c - 1);
    int n = std::uniform_int_distribution<int>(1, std::min(2, left))(gen);
    remaining -= n;
    sdb::ClassChain chain;
    for (int j = 0; j < n; ++j) {
      double p = u(gen);
      chain.log_self.push_back(std::log(p));
      chain.log_next.push_back(std::log(1 - p));
    }
    g.classes.push_back(chain);
  }
  if (with_lm) {
    g.log_transition = Eigen::MatrixXd(n_classes, n_classes);
    g.log_initial = Eigen::VectorXd(n_classes);
    g.log_final = Eigen::VectorXd(n_classes);
    for (Eigen::Index i = 0; i < g.log_transition.size(); ++i) g.log_transition.data()[i] = std::log(u(gen));
    for (Eigen::Index i = 0; i < n_classes; ++i) {
      g.log_initial(i) = std::log(u(gen));
      g.log_final(i) = std::log(u(gen));
    }
  }
  return g;
}

}  // namespace testgraph

#endif  // SDB_TESTS_ORACLES_FIXTURES_HPP_
