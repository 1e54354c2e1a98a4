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

#ifndef SDB_METRICS_HPP_
#define SDB_METRICS_HPP_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "sdb/types.hpp"

namespace sdb {

struct EventErrorReport {
  int n = 0;  // reference events
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  double eer = 0.0;  // (S + D + I) / N

  int errors() const { return substitutions + deletions + insertions; }
};

// Label-sequence edit distance with unit costs. Among minimal alignments the
// backtrace prefers match, then substitution, then deletion, then insertion.
EventErrorReport EventErrorRate(std::span<const EventClass> ref, std::span<const EventClass> hyp);
EventErrorReport EventErrorRate(const EventSequence& ref, const EventSequence& hyp);
// Pools counts across recordings.
EventErrorReport Accumulate(std::span<const EventErrorReport> parts);

struct FrameEvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  bool precision_undefined = false;  // no frame predicted as target
  bool recall_undefined = false;     // no target frame in reference
  std::array<std::array<long, kNumClasses>, kNumClasses> confusion{};  // [ref][hyp]
  EventClass target = EventClass::kSnore;
};

double FMeasure(double precision, double recall);

FrameEvalReport FrameFMeasure(const FrameLabels& ref, const FrameLabels& hyp,
                              EventClass target = EventClass::kSnore);
// Recomputes P/R/F from a pooled confusion matrix.
FrameEvalReport FromConfusion(const std::array<std::array<long, kNumClasses>, kNumClasses>& confusion,
                              EventClass target = EventClass::kSnore);
FrameEvalReport Accumulate(std::span<const FrameEvalReport> parts);

struct KappaReport {
  double kappa = 0.0;
  double observed = 0.0;
  double expected = 0.0;
};

// Cohen's kappa over arbitrary integer label codes (raw or merged scheme).
KappaReport CohensKappa(std::span<const int> a, std::span<const int> b);
KappaReport CohensKappa(const FrameLabels& a, const FrameLabels& b);

// `key = value` lines.
std::string FormatReport(const EventErrorReport& e, const FrameEvalReport& f);
// JSON object with the same fields.
std::string ReportJson(const EventErrorReport& e, const FrameEvalReport& f);
std::string FormatReport(const KappaReport& k);

}  // namespace sdb

#endif  // SDB_METRICS_HPP_
