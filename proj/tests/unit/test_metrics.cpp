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

#include <random>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "sdb/error.hpp"
#include "sdb/metrics.hpp"

using namespace sdb;
using E = EventClass;

TEST_CASE("event error rate examples") {
  std::vector<E> ref{E::kSnore, E::kBreath, E::kSnore};
  auto same = EventErrorRate(ref, ref);
  CHECK(same.errors() == 0);
  CHECK(same.eer == 0.0);

  std::vector<E> hyp{E::kSnore, E::kSnore};
  auto r = EventErrorRate(ref, hyp);
  // One deletion of the breath event is the cheapest alignment.
  CHECK(r.substitutions == 0);
  CHECK(r.deletions == 1);
  CHECK(r.insertions == 0);
  CHECK(r.eer == doctest::Approx(1.0 / 3.0));

  std::vector<E> ref2{E::kSnore, E::kBreath, E::kOther};
  std::vector<E> hyp2{E::kSnore, E::kSnore};
  auto r2 = EventErrorRate(ref2, hyp2);
  CHECK(r2.substitutions == 1);
  CHECK(r2.deletions == 1);
  CHECK(r2.eer == doctest::Approx(2.0 / 3.0));

  std::vector<E> one{E::kSnore};
  std::vector<E> three{E::kSnore, E::kBreath, E::kBreath};
  auto ins = EventErrorRate(one, three);
  CHECK(ins.insertions == 2);
  CHECK(ins.eer == doctest::Approx(2.0));

  CHECK_THROWS_AS(EventErrorRate(std::vector<E>{}, one), Error);
}

TEST_CASE("event error rate equals brute-force edit distance") {
  std::mt19937 gen(42);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> len(1, 7), hlen(0, 7), lab(0, 3);
    std::vector<E> a(len(gen)), b(hlen(gen));
    std::vector<int> ai, bi;
    for (auto& x : a) ai.push_back(static_cast<int>(x = ClassAt(lab(gen))));
    for (auto& x : b) bi.push_back(static_cast<int>(x = ClassAt(lab(gen))));
    auto r = EventErrorRate(a, b);
    CHECK(r.errors() == oracle::EditDistance(ai, bi));
    CHECK(r.substitutions + r.deletions <= r.n);
    CHECK(static_cast<int>(b.size()) == r.n - r.deletions + r.insertions);
    // Relabelling bijection leaves the rate unchanged.
    std::vector<E> pa, pb;
    for (auto x : a) pa.push_back(ClassAt((Index(x) + 1) % 4));
    for (auto x : b) pb.push_back(ClassAt((Index(x) + 1) % 4));
    CHECK(EventErrorRate(pa, pb).eer == r.eer);
  }
}

TEST_CASE("f-measure spot values") {
  for (double x : {0.1, 0.5, 0.93}) CHECK(FMeasure(x, x) == doctest::Approx(x));
  CHECK(FMeasure(0.9, 0.8) == doctest::Approx(0.8471).epsilon(1e-4));
  CHECK(FMeasure(0.0, 0.0) == 0.0);
}

TEST_CASE("frame f-measure") {
  FrameLabels ref, hyp;
  ref.labels = {E::kSnore, E::kSnore, E::kBreath, E::kSilence, E::kSnore};
  auto perfect = FrameFMeasure(ref, ref);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f_measure == 1.0);

  hyp.labels = {E::kSnore, E::kBreath, E::kSnore, E::kSilence, E::kSnore};
  auto r = FrameFMeasure(ref, hyp);
  CHECK(r.precision == doctest::Approx(2.0 / 3.0));
  CHECK(r.recall == doctest::Approx(2.0 / 3.0));
  CHECK(r.confusion[0][1] == 1);
  CHECK(r.confusion[1][0] == 1);

  FrameLabels none;
  none.labels = {E::kBreath, E::kBreath, E::kBreath, E::kBreath, E::kBreath};
  auto u = FrameFMeasure(ref, none);
  CHECK(u.precision_undefined);
  CHECK(u.precision == 0.0);
  CHECK(u.f_measure == 0.0);

  FrameLabels shorter;
  shorter.labels = {E::kSnore};
  CHECK_THROWS_AS(FrameFMeasure(ref, shorter), Error);

  // Swapping non-target classes consistently keeps P/R.
  FrameLabels ref2 = ref, hyp2 = hyp;
  for (auto* f : {&ref2, &hyp2})
    for (auto& l : f->labels)
      if (l == E::kBreath) l = E::kOther;
  auto r2 = FrameFMeasure(ref2, hyp2);
  CHECK(r2.f_measure == r.f_measure);
}

TEST_CASE("cohen's kappa") {
  std::vector<int> a{0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5};
  CHECK(CohensKappa(a, a).kappa == 1.0);
  std::vector<int> b;
  for (int x : a) b.push_back((x + 1) % 6);
  CHECK(CohensKappa(a, b).kappa == doctest::Approx(-0.2).epsilon(1e-12));

  std::mt19937 gen(5);
  std::uniform_int_distribution<int> lab(0, 5);
  std::vector<int> x(100000), y(100000);
  for (auto& v : x) v = lab(gen);
  for (auto& v : y) v = lab(gen);
  CHECK(std::abs(CohensKappa(x, y).kappa) < 0.05);

  std::vector<int> rx, ry;
  for (std::size_t i = 0; i < 1000; ++i) {
    rx.push_back(x[i]);
    ry.push_back(i % 3 ? x[i] : y[i]);
  }
  std::vector<int> px, py;
  for (int v : rx) px.push_back((v * 5 + 2) % 6);
  for (int v : ry) py.push_back((v * 5 + 2) % 6);
  CHECK(CohensKappa(rx, ry).kappa == doctest::Approx(CohensKappa(px, py).kappa).epsilon(1e-12));

  std::vector<int> c1{2, 2, 2}, c2{2, 2, 2}, c3{1, 1, 1};
  CHECK(CohensKappa(c1, c2).kappa == 1.0);
  CHECK(CohensKappa(c1, c3).kappa == 0.0);
  CHECK_THROWS_AS(CohensKappa(c1, std::vector<int>{1}), Error);
}

TEST_CASE("report formats carry every field") {
  std::vector<E> ref{E::kSnore, E::kBreath};
  std::vector<E> hyp{E::kSnore};
  auto e = EventErrorRate(ref, hyp);
  FrameLabels f;
  f.labels = {E::kSnore, E::kBreath};
  auto fr = FrameFMeasure(f, f);
  auto text = FormatReport(e, fr);
  for (const char* k : {"precision", "recall", "f_measure", "substitutions", "deletions", "insertions", "event_error_rate"})
    CHECK(text.find(k) != std::string::npos);
  auto json = ReportJson(e, fr);
  CHECK(json.find("\"deletions\": 1") != std::string::npos);
}
