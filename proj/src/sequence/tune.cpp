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

#include "sdb/tune.hpp"

#include <cmath>

#include "sdb/corpus.hpp"
#include "sdb/error.hpp"

namespace sdb {

TunePoint EvaluateSetting(std::span<const DevRecording> dev, const DecodeGraph& graph,
                          const DecodeConfig& cfg) {
  std::vector<EventErrorReport> ev;
  std::vector<FrameEvalReport> fr;
  for (const auto& rec : dev) {
    const DecodeResult r = Viterbi(rec.emissions, graph, cfg);
    const EventSequence hyp = ToEvents(r);
    const EventSequence ref = FramesToEvents(rec.reference);
    ev.push_back(EventErrorRate(ref, hyp));
    fr.push_back(FrameFMeasure(rec.reference, EventsToFrames(hyp, static_cast<int>(rec.reference.size()))));
  }
  TunePoint p;
  p.lm_scale = cfg.lm_scale;
  p.insertion_penalty = cfg.insertion_penalty;
  p.events = Accumulate(std::span<const EventErrorReport>(ev));
  p.frames = Accumulate(std::span<const FrameEvalReport>(fr));
  return p;
}

TuneResult TuneDecode(std::span<const DevRecording> dev, const DecodeGraph& graph,
                      const TuneGrid& grid, const DecodeConfig& base) {
  if (dev.empty()) Fail(ErrorCode::kInvalidArgument, "tuning needs a non-empty dev set");
  if (grid.lm_scales.empty() || grid.insertion_penalties.empty())
    Fail(ErrorCode::kInvalidArgument, "tuning grid is empty");
  TuneResult result;
  bool have = false;
  for (double scale : grid.lm_scales)
    for (double penalty : grid.insertion_penalties) {
      DecodeConfig cfg = base;
      cfg.lm_scale = scale;
      cfg.insertion_penalty = penalty;
      TunePoint p = EvaluateSetting(dev, graph, cfg);
      result.evaluated.push_back(p);
      const TunePoint& b = result.best;
      const bool better =
          !have || p.events.eer < b.events.eer ||
          (p.events.eer == b.events.eer &&
           (p.frames.f_measure > b.frames.f_measure ||
            (p.frames.f_measure == b.frames.f_measure &&
             std::abs(p.insertion_penalty) < std::abs(b.insertion_penalty))));
      if (better) {
        result.best = p;
        have = true;
      }
    }
  return result;
}

}  // namespace sdb
