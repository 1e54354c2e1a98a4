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

#ifndef SDB_CORPUS_HPP_
#define SDB_CORPUS_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sdb/types.hpp"

namespace sdb {

inline constexpr int kSampleRate = 16000;

// Mono 16 kHz audio with samples in [-1, 1].
class AudioClip {
 public:
  AudioClip() = default;
  // Throws kInvalidArgument on a non-finite sample or a rate other than 16 kHz.
  explicit AudioClip(std::vector<double> samples, int sample_rate = kSampleRate);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  double duration() const { return static_cast<double>(samples_.size()) / sample_rate_; }

 private:
  std::vector<double> samples_;
  int sample_rate_ = kSampleRate;
};

// Reads a RIFF/WAVE PCM 16-bit mono 16 kHz file; samples are scaled by 1/32768.
AudioClip LoadAudio(const std::filesystem::path& path);
// Writes PCM 16-bit; samples are clamped to [-1, 1) before quantisation.
void SaveAudio(const AudioClip& clip, const std::filesystem::path& path);

struct LabelSegment {
  double start = 0.0;
  double end = 0.0;
  RawLabel label = RawLabel::kSilence;

  friend bool operator==(const LabelSegment&, const LabelSegment&) = default;
};

struct LabelTrack {
  std::vector<LabelSegment> segments;
  LabelScheme scheme = LabelScheme::kRaw;

  friend bool operator==(const LabelTrack&, const LabelTrack&) = default;
};

// Parses `start<TAB>end<TAB>label` lines. Segments come back sorted by start;
// unknown labels, overlaps and end <= start are errors.
LabelTrack ParseLabels(std::istream& in, LabelScheme scheme);
LabelTrack ParseLabels(const std::filesystem::path& path, LabelScheme scheme);
std::string FormatLabels(const LabelTrack& track);
void WriteLabels(const LabelTrack& track, const std::filesystem::path& path);

// Validates ordering, overlap and scheme membership. Throws kFormat.
void ValidateTrack(const LabelTrack& track);

LabelTrack MergeClasses(const LabelTrack& raw);

// Frame t takes the label of the segment containing t*frame_period + win_len/2.
// Frames outside every segment are silence.
FrameLabels LabelsToFrames(const LabelTrack& merged, int n_frames, double frame_period = 0.010,
                           double win_len = 0.025);
// Same rule, returning scheme-native codes (RawLabel or EventClass index).
std::vector<int> LabelCodesToFrames(const LabelTrack& track, int n_frames,
                                    double frame_period = 0.010, double win_len = 0.025);

EventSequence FramesToEvents(const FrameLabels& frames);
FrameLabels EventsToFrames(const EventSequence& events, int n_frames, double frame_period = 0.010);

// Converts frame events to a merged track. Event boundaries sit at
// frame_index*frame_period + win_len/2 - frame_period/2 so that the frame
// centre rule maps the track back onto the same frames; the first event
// starts at 0 and the last ends at the given clip duration.
LabelTrack EventsToTrack(const EventSequence& events, double frame_period, double win_len,
                         double clip_duration);

// Sequence of merged labels with adjacent duplicates coalesced. Gaps between
// track segments (and before the first) count as silence.
std::vector<EventClass> EventLabels(const LabelTrack& merged);
std::vector<EventClass> EventLabels(const EventSequence& events);

enum class Split : std::uint8_t { kTrain, kDev, kTest };
std::string_view ToString(Split s);

struct ManifestEntry {
  std::string audio_path;
  std::string label_path;
  Split split = Split::kTrain;
  std::string speaker;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;  // relative entry paths resolve against this

  std::filesystem::path Resolve(const std::string& p) const;
  std::vector<ManifestEntry> Select(std::initializer_list<Split> splits) const;
};

CorpusManifest ReadManifest(const std::filesystem::path& path);
void WriteManifest(const CorpusManifest& manifest, const std::filesystem::path& path);
// Stem of the audio file name, used as the recording id.
std::string RecordingId(const ManifestEntry& e);

}  // namespace sdb

#endif  // SDB_CORPUS_HPP_
