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

#ifndef SDB_TESTS_ORACLES_HPP_
#define SDB_TESTS_ORACLES_HPP_

// Straightforward reference implementations used to check the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace oracle {

// A(tau) = sum_n y(n) y(n - tau) with y(n - tau) = 0 outside the frame,
// divided by A(0) + 1e-10.
inline std::vector<double> Acf(std::span<const double> y, int max_lag) {
  double a0 = 0.0;
  for (double v : y) a0 += v * v;
  std::vector<double> out(max_lag, 0.0);
  for (int tau = 1; tau <= max_lag; ++tau) {
    double s = 0.0;
    for (int n = 0; n < static_cast<int>(y.size()); ++n) {
      if (n - tau >= 0) s += y[n] * y[n - tau];
    }
    out[tau - 1] = s / (a0 + 1e-10);
  }
  return out;
}

inline double GlasbergMooreErbRate(double f) { return 21.4 * std::log10(4.37 * f / 1000.0 + 1.0); }

// Plain recursive edit distance between two label strings.
inline int EditDistance(std::span<const int> a, std::span<const int> b) {
  if (a.empty()) return static_cast<int>(b.size());
  if (b.empty()) return static_cast<int>(a.size());
  const int sub = EditDistance(a.subspan(1), b.subspan(1)) + (a[0] == b[0] ? 0 : 1);
  const int del = EditDistance(a.subspan(1), b) + 1;
  const int ins = EditDistance(a, b.subspan(1)) + 1;
  return std::min({sub, del, ins});
}

// Enumerates every state sequence of length T over n_states and returns the
// best one under `score` (-inf marks illegal paths). Ties keep the
// lexicographically first sequence.
inline std::vector<int> BestPath(int n_states, int T,
                                 const std::function<double(std::span<const int>)>& score,
                                 double* best_score = nullptr) {
  std::vector<int> cur(T, 0), best;
  double best_s = -std::numeric_limits<double>::infinity();
  while (true) {
    const double s = score(cur);
    if (s > best_s) {
      best_s = s;
      best = cur;
    }
    int i = T - 1;
    while (i >= 0 && cur[i] == n_states - 1) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  if (best_score) *best_score = best_s;
  return best;
}

inline double FMeasure(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

}  // namespace oracle

#endif  // SDB_TESTS_ORACLES_HPP_
