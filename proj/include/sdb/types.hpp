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

#ifndef SDB_TYPES_HPP_
#define SDB_TYPES_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace sdb {

// Merged event classes. The order is fixed and is used for tie-breaking
// during decoding and as the row/column order of every 4-way table.
enum class EventClass : std::uint8_t { kSnore = 0, kBreath = 1, kOther = 2, kSilence = 3 };
inline constexpr std::size_t kNumClasses = 4;
inline constexpr std::array<EventClass, kNumClasses> kAllClasses = {
    EventClass::kSnore, EventClass::kBreath, EventClass::kOther, EventClass::kSilence};

// Annotation labels as recorded by annotators.
enum class RawLabel : std::uint8_t {
  kSnore = 0,
  kWheezing = 1,
  kNoisyInBreath = 2,
  kBreath = 3,
  kOther = 4,
  kSilence = 5,
};
inline constexpr std::size_t kNumRawLabels = 6;

enum class LabelScheme : std::uint8_t { kRaw, kMerged };

std::string_view ToString(EventClass c);
std::string_view ToString(RawLabel l);
std::string_view ToString(LabelScheme s);
std::optional<EventClass> ParseEventClass(std::string_view name);
std::optional<RawLabel> ParseRawLabel(std::string_view name);

// wheezing and noisy in-breath fold into snore.
EventClass MergeLabel(RawLabel l);
RawLabel AsRawLabel(EventClass c);
bool IsMergedLabel(RawLabel l);

inline std::size_t Index(EventClass c) { return static_cast<std::size_t>(c); }
inline EventClass ClassAt(std::size_t i) { return static_cast<EventClass>(i); }

struct Event {
  EventClass label;
  int start_frame;
  int end_frame;  // exclusive

  friend bool operator==(const Event&, const Event&) = default;
};

using EventSequence = std::vector<Event>;

struct FrameLabels {
  std::vector<EventClass> labels;
  double frame_period = 0.010;

  std::size_t size() const { return labels.size(); }
};

}  // namespace sdb

#endif  // SDB_TYPES_HPP_
