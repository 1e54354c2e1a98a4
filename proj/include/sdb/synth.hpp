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

#ifndef SDB_SYNTH_HPP_
#define SDB_SYNTH_HPP_

#include <cstdint>
#include <filesystem>

#include "sdb/corpus.hpp"

namespace sdb {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Event mix for synthetic whole-night-style clips. Counts are per clip;
// events that do not fit in the clip are dropped.
struct SynthConfig {
  int speakers = 6;
  int test_speakers = 2;
  int clips_per_speaker = 3;
  int dev_clips_per_speaker = 1;  // drawn from the training speakers' clips
  double clip_seconds = 100.0;
  int snore_events = 28;
  int breath_events = 14;
  int other_events = 4;
  Range snore_duration{0.8, 1.6};
  Range breath_duration{0.6, 1.4};
  Range other_duration{0.4, 1.2};
  Range gap_duration{0.4, 1.4};
  double adjacent_probability = 0.25;  // no silence before the next event
  Range snr_db{10.0, 30.0};
  Range f0{60.0, 250.0};

  // Throws kConfig on empty or inverted ranges and impossible split sizes.
  void Validate() const;
};

// Voice parameters drawn per synthetic speaker.
struct SpeakerParams {
  double f0 = 100.0;          // Hz, snore pitch centre
  double formant = 500.0;     // Hz, snore resonance
  double breath_band = 2000;  // Hz, breath noise centre
  double gain = 1.0;
};

SpeakerParams DrawSpeaker(const SynthConfig& cfg, std::uint64_t seed);

struct SynthClip {
  AudioClip audio;
  LabelTrack labels;  // merged labels, silence segments explicit
};

SynthClip SynthesizeClip(const SynthConfig& cfg, const SpeakerParams& speaker, std::uint64_t seed);

// Writes audio/, labels/ and manifest.tsv under out_dir. Pure in (cfg, seed).
CorpusManifest SynthCorpus(const SynthConfig& cfg, std::uint64_t seed,
                           const std::filesystem::path& out_dir);

}  // namespace sdb

#endif  // SDB_SYNTH_HPP_
