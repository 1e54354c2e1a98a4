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

#include "sdb/error.hpp"
#include "sdb/frontend.hpp"

namespace sdb {

namespace {
constexpr double kAcfEpsilon = 1e-10;
}

std::vector<double> FrameAcf(std::span<const double> frame, int max_lag) {
  const auto n = static_cast<int>(frame.size());
  double energy = 0.0;
  for (double v : frame) energy += v * v;
  const double scale = 1.0 / (energy + kAcfEpsilon);
  std::vector<double> out(static_cast<std::size_t>(max_lag), 0.0);
  for (int lag = 1; lag <= max_lag && lag < n; ++lag) {
    double acc = 0.0;
    const double* lead = frame.data() + lag;
    const double* lagged = frame.data();
    for (int i = 0; i < n - lag; ++i) acc += lead[i] * lagged[i];
    out[static_cast<std::size_t>(lag - 1)] = acc * scale;
  }
  return out;
}

FeatureMatrix AcfFrames(const AudioClip& clip) {
  const std::size_t n_frames = NumFrames(clip.size());
  if (n_frames == 0) Fail(ErrorCode::kInvalidArgument, "clip is shorter than one 25 ms frame");
  FeatureMatrix out(n_frames, kAcfLags, FeatureKind::kAcf);
  const auto s = clip.samples();
  for (std::size_t t = 0; t < n_frames; ++t) {
    const auto acf = FrameAcf(s.subspan(t * kFrameStep, kFrameLength));
    std::copy(acf.begin(), acf.end(), out.row(t).begin());
  }
  return out;
}

}  // namespace sdb
