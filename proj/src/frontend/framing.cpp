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

#include <cmath>

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "sdb/frontend.hpp"

namespace sdb {

std::size_t NumFrames(std::size_t n_samples, int win, int step) {
  const auto w = static_cast<std::size_t>(win);
  if (n_samples < w) return 0;
  return (n_samples - w) / static_cast<std::size_t>(step) + 1;
}

std::vector<std::vector<double>> FrameSignal(const AudioClip& clip, double win_s, double step_s) {
  const int win = static_cast<int>(std::lround(win_s * clip.sample_rate()));
  const int step = static_cast<int>(std::lround(step_s * clip.sample_rate()));
  if (win <= 0 || step <= 0) Fail(ErrorCode::kInvalidArgument, "window and step must be positive");
  const std::size_t n = NumFrames(clip.size(), win, step);
  if (n == 0)
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("clip of {} samples is shorter than one {}-sample window", clip.size(), win));
  std::vector<std::vector<double>> frames(n);
  const auto s = clip.samples();
  for (std::size_t t = 0; t < n; ++t) {
    const auto begin = s.begin() + static_cast<long>(t) * step;
    frames[t].assign(begin, begin + win);
  }
  return frames;
}

}  // namespace sdb
