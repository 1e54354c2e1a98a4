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
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sdb/corpus.hpp"
#include "sdb/error.hpp"

namespace sdb {

namespace {

double ParseSeconds(std::string_view field, int line_no) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    Fail(ErrorCode::kFormat, fmt::format("line {}: bad time value '{}'", line_no, field));
  return v;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

void ValidateTrack(const LabelTrack& track) {
  for (std::size_t i = 0; i < track.segments.size(); ++i) {
    const auto& s = track.segments[i];
    if (!(s.start >= 0.0) || !(s.end > s.start))
      Fail(ErrorCode::kFormat,
           fmt::format("segment {} has invalid bounds [{}, {})", i, s.start, s.end));
    if (track.scheme == LabelScheme::kMerged && !IsMergedLabel(s.label))
      Fail(ErrorCode::kFormat,
           fmt::format("label '{}' is not part of the merged scheme", ToString(s.label)));
    if (i > 0 && track.segments[i - 1].end > s.start + 1e-9)
      Fail(ErrorCode::kFormat, fmt::format("segments {} and {} overlap", i - 1, i));
  }
}

LabelTrack ParseLabels(std::istream& in, LabelScheme scheme) {
  LabelTrack track;
  track.scheme = scheme;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 3)
      Fail(ErrorCode::kFormat, fmt::format("line {}: expected 3 tab-separated fields", line_no));
    LabelSegment seg;
    seg.start = ParseSeconds(fields[0], line_no);
    seg.end = ParseSeconds(fields[1], line_no);
    const auto label = ParseRawLabel(fields[2]);
    if (!label || (scheme == LabelScheme::kMerged && !IsMergedLabel(*label)))
      Fail(ErrorCode::kFormat, fmt::format("line {}: unknown label '{}' for {} scheme", line_no,
                                           fields[2], ToString(scheme)));
    seg.label = *label;
    if (!(seg.end > seg.start) || seg.start < 0.0)
      Fail(ErrorCode::kFormat, fmt::format("line {}: end must exceed start", line_no));
    track.segments.push_back(seg);
  }
  std::stable_sort(track.segments.begin(), track.segments.end(),
                   [](const LabelSegment& a, const LabelSegment& b) { return a.start < b.start; });
  ValidateTrack(track);
  return track;
}

LabelTrack ParseLabels(const std::filesystem::path& path, LabelScheme scheme) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, fmt::format("cannot open label file '{}'", path.string()));
  try {
    return ParseLabels(in, scheme);
  } catch (const Error& e) {
    Fail(e.code(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string FormatLabels(const LabelTrack& track) {
  std::string out;
  for (const auto& s : track.segments)
    out += fmt::format("{:.6f}\t{:.6f}\t{}\n", s.start, s.end, ToString(s.label));
  return out;
}

void WriteLabels(const LabelTrack& track, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) Fail(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
  f << FormatLabels(track);
}

LabelTrack MergeClasses(const LabelTrack& raw) {
  if (raw.scheme != LabelScheme::kRaw)
    Fail(ErrorCode::kInvalidArgument, "track is already merged");
  LabelTrack merged;
  merged.scheme = LabelScheme::kMerged;
  for (const auto& s : raw.segments) {
    const RawLabel label = AsRawLabel(MergeLabel(s.label));
    if (!merged.segments.empty()) {
      auto& last = merged.segments.back();
      if (last.label == label && last.end == s.start) {
        last.end = s.end;
        continue;
      }
    }
    merged.segments.push_back({s.start, s.end, label});
  }
  return merged;
}

std::vector<int> LabelCodesToFrames(const LabelTrack& track, int n_frames, double frame_period,
                                    double win_len) {
  if (n_frames <= 0) Fail(ErrorCode::kInvalidArgument, "n_frames must be positive");
  const int silence = track.scheme == LabelScheme::kRaw
                          ? static_cast<int>(RawLabel::kSilence)
                          : static_cast<int>(EventClass::kSilence);
  std::vector<int> codes(static_cast<std::size_t>(n_frames), silence);
  std::size_t seg = 0;
  const auto& segs = track.segments;
  for (int t = 0; t < n_frames; ++t) {
    const double centre = t * frame_period + win_len / 2.0;
    while (seg < segs.size() && segs[seg].end <= centre) ++seg;
    if (seg < segs.size() && segs[seg].start <= centre) {
      codes[static_cast<std::size_t>(t)] =
          track.scheme == LabelScheme::kRaw
              ? static_cast<int>(segs[seg].label)
              : static_cast<int>(Index(MergeLabel(segs[seg].label)));
    }
  }
  return codes;
}

FrameLabels LabelsToFrames(const LabelTrack& merged, int n_frames, double frame_period,
                           double win_len) {
  LabelTrack track = merged;
  track.scheme = LabelScheme::kMerged;
  for (auto& s : track.segments) s.label = AsRawLabel(MergeLabel(s.label));
  const auto codes = LabelCodesToFrames(track, n_frames, frame_period, win_len);
  FrameLabels out;
  out.frame_period = frame_period;
  out.labels.reserve(codes.size());
  for (int c : codes) out.labels.push_back(ClassAt(static_cast<std::size_t>(c)));
  return out;
}

EventSequence FramesToEvents(const FrameLabels& frames) {
  EventSequence events;
  const auto& l = frames.labels;
  for (std::size_t t = 0; t < l.size(); ++t) {
    if (events.empty() || events.back().label != l[t])
      events.push_back({l[t], static_cast<int>(t), static_cast<int>(t) + 1});
    else
      events.back().end_frame = static_cast<int>(t) + 1;
  }
  return events;
}

FrameLabels EventsToFrames(const EventSequence& events, int n_frames, double frame_period) {
  FrameLabels out;
  out.frame_period = frame_period;
  out.labels.assign(static_cast<std::size_t>(std::max(n_frames, 0)), EventClass::kSilence);
  for (const auto& e : events)
    for (int t = std::max(e.start_frame, 0); t < std::min(e.end_frame, n_frames); ++t)
      out.labels[static_cast<std::size_t>(t)] = e.label;
  return out;
}

LabelTrack EventsToTrack(const EventSequence& events, double frame_period, double win_len,
                         double clip_duration) {
  LabelTrack track;
  track.scheme = LabelScheme::kMerged;
  const double offset = win_len / 2.0 - frame_period / 2.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    double start = i == 0 ? 0.0 : e.start_frame * frame_period + offset;
    double end = i + 1 == events.size() ? std::max(clip_duration, e.end_frame * frame_period + offset)
                                        : e.end_frame * frame_period + offset;
    track.segments.push_back({start, end, AsRawLabel(e.label)});
  }
  return track;
}

std::vector<EventClass> EventLabels(const LabelTrack& merged) {
  std::vector<EventClass> out;
  const auto push = [&out](EventClass c) {
    if (out.empty() || out.back() != c) out.push_back(c);
  };
  double covered = 0.0;
  for (const auto& s : merged.segments) {
    if (s.start > covered + 1e-9) push(EventClass::kSilence);
    push(MergeLabel(s.label));
    covered = s.end;
  }
  return out;
}

std::vector<EventClass> EventLabels(const EventSequence& events) {
  std::vector<EventClass> out;
  for (const auto& e : events)
    if (out.empty() || out.back() != e.label) out.push_back(e.label);
  return out;
}

}  // namespace sdb
