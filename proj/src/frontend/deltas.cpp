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

#include <algorithm>

#include "sdb/frontend.hpp"

namespace sdb {

namespace {

// Regression deltas over +-window frames with edge replication.
void Regress(const FeatureMatrix& in, std::size_t in_off, FeatureMatrix& out, std::size_t out_off,
             std::size_t dims, int window) {
  const auto rows = static_cast<long>(in.rows());
  double denom = 0.0;
  for (int th = 1; th <= window; ++th) denom += th * th;
  denom *= 2.0;
  for (long t = 0; t < rows; ++t) {
    for (std::size_t d = 0; d < dims; ++d) {
      double acc = 0.0;
      for (int th = 1; th <= window; ++th) {
        const long ahead = std::min(t + th, rows - 1);
        const long behind = std::max(t - th, 0L);
        acc += th * (in(static_cast<std::size_t>(ahead), in_off + d) -
                     in(static_cast<std::size_t>(behind), in_off + d));
      }
      out(static_cast<std::size_t>(t), out_off + d) = acc / denom;
    }
  }
}

}  // namespace

FeatureMatrix AddDeltas(const FeatureMatrix& f, int window) {
  const std::size_t d = f.cols();
  FeatureMatrix out(f.rows(), 3 * d, f.kind(), f.frame_period());
  for (std::size_t t = 0; t < f.rows(); ++t)
    std::copy(f.row(t).begin(), f.row(t).end(), out.row(t).begin());
  if (f.rows() == 0) return out;
  Regress(out, 0, out, d, d, window);
  Regress(out, d, out, 2 * d, d, window);
  return out;
}

}  // namespace sdb
