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

#include "sdb/types.hpp"

namespace sdb {

namespace {
constexpr std::array<std::string_view, kNumClasses> kClassNames = {"snore", "breath", "other",
                                                                   "silence"};
constexpr std::array<std::string_view, kNumRawLabels> kRawNames = {
    "snore", "wheezing", "noisy_in_breath", "breath", "other", "silence"};
}  // namespace

std::string_view ToString(EventClass c) { return kClassNames[Index(c)]; }

std::string_view ToString(RawLabel l) { return kRawNames[static_cast<std::size_t>(l)]; }

std::string_view ToString(LabelScheme s) { return s == LabelScheme::kRaw ? "raw" : "merged"; }

std::optional<EventClass> ParseEventClass(std::string_view name) {
  for (std::size_t i = 0; i < kNumClasses; ++i)
    if (kClassNames[i] == name) return ClassAt(i);
  return std::nullopt;
}

std::optional<RawLabel> ParseRawLabel(std::string_view name) {
  for (std::size_t i = 0; i < kNumRawLabels; ++i)
    if (kRawNames[i] == name) return static_cast<RawLabel>(i);
  return std::nullopt;
}

EventClass MergeLabel(RawLabel l) {
  switch (l) {
    case RawLabel::kSnore:
    case RawLabel::kWheezing:
    case RawLabel::kNoisyInBreath:
      return EventClass::kSnore;
    case RawLabel::kBreath:
      return EventClass::kBreath;
    case RawLabel::kOther:
      return EventClass::kOther;
    case RawLabel::kSilence:
      break;
  }
  return EventClass::kSilence;
}

RawLabel AsRawLabel(EventClass c) {
  switch (c) {
    case EventClass::kSnore:
      return RawLabel::kSnore;
    case EventClass::kBreath:
      return RawLabel::kBreath;
    case EventClass::kOther:
      return RawLabel::kOther;
    case EventClass::kSilence:
      break;
  }
  return RawLabel::kSilence;
}

bool IsMergedLabel(RawLabel l) {
  return l != RawLabel::kWheezing && l != RawLabel::kNoisyInBreath;
}

}  // namespace sdb
