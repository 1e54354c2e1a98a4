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

#include "sdb/metrics.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>
#include "json.hpp"

#include "sdb/corpus.hpp"
#include "sdb/error.hpp"

namespace sdb {

EventErrorReport EventErrorRate(std::span<const EventClass> ref, std::span<const EventClass> hyp) {
  if (ref.empty()) Fail(ErrorCode::kInvalidArgument, "event error rate is undefined for an empty reference");
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) cost[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) cost[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      cost[i][j] = std::min({cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1),
                             cost[i - 1][j] + 1, cost[i][j - 1] + 1});

  EventErrorReport r;
  r.n = static_cast<int>(n);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && cost[i][j] == cost[i - 1][j - 1]) {
      --i;
      --j;
    } else if (i > 0 && j > 0 && cost[i][j] == cost[i - 1][j - 1] + 1) {
      ++r.substitutions;
      --i;
      --j;
    } else if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      ++r.deletions;
      --i;
    } else {
      ++r.insertions;
      --j;
    }
  }
  r.eer = static_cast<double>(r.errors()) / static_cast<double>(r.n);
  return r;
}

EventErrorReport EventErrorRate(const EventSequence& ref, const EventSequence& hyp) {
  const auto r = EventLabels(ref);
  const auto h = EventLabels(hyp);
  return EventErrorRate(std::span<const EventClass>(r), std::span<const EventClass>(h));
}

EventErrorReport Accumulate(std::span<const EventErrorReport> parts) {
  EventErrorReport total;
  for (const auto& p : parts) {
    total.n += p.n;
    total.substitutions += p.substitutions;
    total.deletions += p.deletions;
    total.insertions += p.insertions;
  }
  if (total.n == 0) Fail(ErrorCode::kInvalidArgument, "no reference events");
  total.eer = static_cast<double>(total.errors()) / total.n;
  return total;
}

double FMeasure(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

FrameEvalReport FromConfusion(const std::array<std::array<long, kNumClasses>, kNumClasses>& confusion,
                              EventClass target) {
  FrameEvalReport r;
  r.confusion = confusion;
  r.target = target;
  const std::size_t k = Index(target);
  long tp = confusion[k][k], predicted = 0, actual = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    predicted += confusion[c][k];
    actual += confusion[k][c];
  }
  r.precision_undefined = predicted == 0;
  r.recall_undefined = actual == 0;
  r.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  r.recall = actual > 0 ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
  r.f_measure = FMeasure(r.precision, r.recall);
  return r;
}

FrameEvalReport FrameFMeasure(const FrameLabels& ref, const FrameLabels& hyp, EventClass target) {
  if (ref.size() != hyp.size())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("frame label lengths differ: {} vs {}", ref.size(), hyp.size()));
  std::array<std::array<long, kNumClasses>, kNumClasses> confusion{};
  for (std::size_t t = 0; t < ref.size(); ++t) ++confusion[Index(ref.labels[t])][Index(hyp.labels[t])];
  return FromConfusion(confusion, target);
}

FrameEvalReport Accumulate(std::span<const FrameEvalReport> parts) {
  std::array<std::array<long, kNumClasses>, kNumClasses> confusion{};
  EventClass target = parts.empty() ? EventClass::kSnore : parts.front().target;
  for (const auto& p : parts)
    for (std::size_t a = 0; a < kNumClasses; ++a)
      for (std::size_t b = 0; b < kNumClasses; ++b) confusion[a][b] += p.confusion[a][b];
  return FromConfusion(confusion, target);
}

KappaReport CohensKappa(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    Fail(ErrorCode::kInvalidArgument, fmt::format("rater lengths differ: {} vs {}", a.size(), b.size()));
  if (a.empty()) Fail(ErrorCode::kInvalidArgument, "kappa needs at least one frame");
  std::map<int, double> pa, pb;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa[a[i]] += 1.0;
    pb[b[i]] += 1.0;
    if (a[i] == b[i]) agree += 1.0;
  }
  const double n = static_cast<double>(a.size());
  KappaReport r;
  r.observed = agree / n;
  for (const auto& [label, count] : pa) {
    const auto it = pb.find(label);
    if (it != pb.end()) r.expected += (count / n) * (it->second / n);
  }
  if (r.expected >= 1.0) {
    if (r.observed == 1.0) {
      r.kappa = 1.0;
      return r;
    }
    Fail(ErrorCode::kInvalidArgument, "kappa is undefined when chance agreement is 1");
  }
  r.kappa = (r.observed - r.expected) / (1.0 - r.expected);
  return r;
}

KappaReport CohensKappa(const FrameLabels& a, const FrameLabels& b) {
  std::vector<int> x, y;
  for (EventClass c : a.labels) x.push_back(static_cast<int>(Index(c)));
  for (EventClass c : b.labels) y.push_back(static_cast<int>(Index(c)));
  return CohensKappa(x, y);
}

std::string FormatReport(const EventErrorReport& e, const FrameEvalReport& f) {
  std::string out;
  out += fmt::format("events_reference = {}\n", e.n);
  out += fmt::format("substitutions = {}\n", e.substitutions);
  out += fmt::format("deletions = {}\n", e.deletions);
  out += fmt::format("insertions = {}\n", e.insertions);
  out += fmt::format("event_error_rate = {:.6f}\n", e.eer);
  out += fmt::format("target = {}\n", ToString(f.target));
  out += fmt::format("precision = {:.6f}\n", f.precision);
  out += fmt::format("recall = {:.6f}\n", f.recall);
  out += fmt::format("f_measure = {:.6f}\n", f.f_measure);
  if (f.precision_undefined) out += "precision_undefined = true\n";
  if (f.recall_undefined) out += "recall_undefined = true\n";
  for (std::size_t a = 0; a < kNumClasses; ++a)
    for (std::size_t b = 0; b < kNumClasses; ++b)
      out += fmt::format("confusion.{}.{} = {}\n", ToString(ClassAt(a)), ToString(ClassAt(b)),
                         f.confusion[a][b]);
  return out;
}

std::string ReportJson(const EventErrorReport& e, const FrameEvalReport& f) {
  nlohmann::ordered_json j;
  j["events_reference"] = e.n;
  j["substitutions"] = e.substitutions;
  j["deletions"] = e.deletions;
  j["insertions"] = e.insertions;
  j["event_error_rate"] = e.eer;
  j["target"] = std::string(ToString(f.target));
  j["precision"] = f.precision;
  j["recall"] = f.recall;
  j["f_measure"] = f.f_measure;
  j["precision_undefined"] = f.precision_undefined;
  j["recall_undefined"] = f.recall_undefined;
  nlohmann::ordered_json conf;
  for (std::size_t a = 0; a < kNumClasses; ++a) {
    nlohmann::ordered_json row;
    for (std::size_t b = 0; b < kNumClasses; ++b) row[std::string(ToString(ClassAt(b)))] = f.confusion[a][b];
    conf[std::string(ToString(ClassAt(a)))] = row;
  }
  j["confusion"] = conf;
  return j.dump(2) + "\n";
}

std::string FormatReport(const KappaReport& k) {
  return fmt::format("kappa = {:.6f}\nobserved_agreement = {:.6f}\nexpected_agreement = {:.6f}\n", k.kappa,
                     k.observed, k.expected);
}

}  // namespace sdb
