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
#include <filesystem>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "oracles/signals.hpp"
#include "sdb/error.hpp"
#include "sdb/frontend.hpp"

using namespace sdb;

TEST_CASE("frame_signal counts frames and rejects short clips") {
  CHECK(FrameSignal(AudioClip(std::vector<double>(16000))).size() == 98);
  CHECK(FrameSignal(AudioClip(std::vector<double>(400))).size() == 1);
  CHECK_THROWS_AS(FrameSignal(AudioClip(std::vector<double>(384))), Error);
  auto frames = FrameSignal(AudioClip(testsig::Noise(2000, 0.5, 3)));
  CHECK(frames[2].size() == 400);
}

TEST_CASE("gammatone bank pins endpoints and spaces channels evenly in ERB-rate") {
  const auto spec = DesignGammatoneBank();
  REQUIRE(spec.center_freqs.size() == 64);
  CHECK(spec.center_freqs.front() == doctest::Approx(80.0).epsilon(1e-6));
  CHECK(spec.center_freqs.back() == doctest::Approx(7500.0).epsilon(1e-6));
  CHECK(oracle::GlasbergMooreErbRate(80) == doctest::Approx(2.786388489).epsilon(1e-9));
  CHECK(oracle::GlasbergMooreErbRate(7500) == doctest::Approx(32.711940655).epsilon(1e-9));
  CHECK(ErbRate(80) == doctest::Approx(oracle::GlasbergMooreErbRate(80)).epsilon(1e-12));
  CHECK(ErbRate(7500) == doctest::Approx(oracle::GlasbergMooreErbRate(7500)).epsilon(1e-12));
  const double step = (oracle::GlasbergMooreErbRate(7500) - oracle::GlasbergMooreErbRate(80)) / 63;
  CHECK(step == doctest::Approx(0.475008765).epsilon(1e-8));
  for (int i = 0; i + 1 < 64; ++i) {
    const double d = ErbRate(spec.center_freqs[i + 1]) - ErbRate(spec.center_freqs[i]);
    CHECK(std::abs(d - step) < 1e-9);
    CHECK(spec.center_freqs[i + 1] > spec.center_freqs[i]);
  }
  const auto two = DesignGammatoneBank(2);
  CHECK(two.center_freqs[0] == doctest::Approx(80.0));
  CHECK(two.center_freqs[1] == doctest::Approx(7500.0));
  CHECK_THROWS_AS(DesignGammatoneBank(64, 500, 100), Error);
}

TEST_CASE("rate map of silence is zero and a tone peaks at the nearest channel") {
  const auto spec = DesignGammatoneBank();
  const auto zero = RateMap(AudioClip(std::vector<double>(8000)), spec);
  CHECK(zero.cols() == 64);
  for (double v : zero.data()) CHECK(v == 0.0);

  const auto rm = RateMap(AudioClip(testsig::Sine(1000.0, 16000)), spec);
  std::size_t nearest = 0;
  for (std::size_t c = 0; c < 64; ++c)
    if (std::abs(spec.center_freqs[c] - 1000) < std::abs(spec.center_freqs[nearest] - 1000)) nearest = c;
  for (std::size_t t = 5; t < rm.rows(); ++t) {
    auto row = rm.row(t);
    CHECK(static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin()) == nearest);
  }
}

TEST_CASE("filter gain oracle: unit gain at centre, nearest channel wins for a tone") {
  const auto spec = DesignGammatoneBank();
  for (double cf : spec.center_freqs) CHECK(GammatoneGain(cf, cf) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(GammatoneGain(1000, 2000) < 0.1);
}

TEST_CASE("rate map is monotone in input level") {
  const auto spec = DesignGammatoneBank();
  auto x = testsig::Noise(8000, 0.5, 11);
  auto half = x;
  for (double& v : half) v *= 0.5;
  const auto a = RateMap(AudioClip(x), spec);
  const auto b = RateMap(AudioClip(half), spec);
  for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(b.data()[i] <= a.data()[i] + 1e-15);
}

TEST_CASE("acf matches direct summation") {
  std::vector<double> frame(400, 0.0);
  frame[0] = 1.0;
  frame[1] = 2.0;
  auto acf = FrameAcf(frame);
  CHECK(acf.size() == 320);
  CHECK(acf[0] == doctest::Approx(0.4));
  for (std::size_t i = 1; i < acf.size(); ++i) CHECK(acf[i] == 0.0);

  auto zero = FrameAcf(std::vector<double>(400, 0.0));
  for (double v : zero) CHECK(v == 0.0);

  for (unsigned seed = 0; seed < 10; ++seed) {
    auto y = testsig::Noise(400, 1.0, seed);
    auto got = FrameAcf(y);
    auto want = oracle::Acf(y, 320);
    for (int k = 0; k < 320; ++k)
      CHECK(std::abs(got[k] - want[k]) <= 1e-9 * std::max(1.0, std::abs(want[k])));
  }
}

TEST_CASE("acf of a 100 Hz sawtooth peaks near lag 160") {
  auto y = testsig::Sawtooth(100.0, 400);
  auto acf = FrameAcf(y);
  int best = 100;
  for (int lag = 100; lag <= 220; ++lag)
    if (acf[lag - 1] > acf[best - 1]) best = lag;
  CHECK(std::abs(best - 160) <= 2);
  CHECK(acf[best - 1] > acf[best - 2]);
  CHECK(acf[best - 1] > acf[best]);
}

TEST_CASE("normalised acf stays in [-1, 1]") {
  auto y = testsig::Noise(4000, 1.0, 5);
  auto f = AcfFrames(AudioClip(y));
  for (double v : f.data()) CHECK(std::abs(v) <= 1.0);
}

TEST_CASE("mfcc shape and gain invariance") {
  const auto z = Mfcc(AudioClip(std::vector<double>(4000)));
  CHECK(z.cols() == 12);
  for (std::size_t t = 1; t < z.rows(); ++t)
    for (std::size_t d = 0; d < 12; ++d) CHECK(z(t, d) == z(0, d));

  auto x = testsig::Noise(4000, 0.2, 9);
  auto x2 = x;
  for (double& v : x2) v *= 2.0;
  const auto a = Mfcc(AudioClip(x));
  const auto b = Mfcc(AudioClip(x2));
  for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(b.data()[i] == doctest::Approx(a.data()[i]).epsilon(1e-9));
}

TEST_CASE("all front-ends agree on the frame count") {
  AudioClip clip(testsig::Noise(12345, 0.3, 2));
  const auto n = NumFrames(clip.size());
  CHECK(RateMap(clip, DesignGammatoneBank()).rows() == n);
  CHECK(AcfFrames(clip).rows() == n);
  CHECK(Mfcc(clip).rows() == n);
}

TEST_CASE("deltas: constant input gives zero dynamics and the widths triple") {
  FeatureMatrix c(20, 16, FeatureKind::kBottleneck);
  for (double& v : c.data()) v = 0.3;
  const auto d = AddDeltas(c);
  CHECK(d.cols() == 48);
  for (std::size_t t = 0; t < 20; ++t)
    for (std::size_t k = 16; k < 48; ++k) CHECK(d(t, k) == 0.0);
  FeatureMatrix m(5, 12, FeatureKind::kMfcc);
  CHECK(AddDeltas(m).cols() == 36);
}

TEST_CASE("deltas follow the regression formula with edge replication") {
  FeatureMatrix f(6, 1, FeatureKind::kMfcc);
  for (std::size_t t = 0; t < 6; ++t) f(t, 0) = static_cast<double>(t * t);
  const auto d = AddDeltas(f);
  auto c = [&](int t) { return f(static_cast<std::size_t>(std::clamp(t, 0, 5)), 0); };
  for (int t = 0; t < 6; ++t) {
    const double want = ((c(t + 1) - c(t - 1)) + 2 * (c(t + 2) - c(t - 2))) / 10.0;
    CHECK(d(t, 1) == doctest::Approx(want));
  }
}

TEST_CASE("deltas on interior frames commute with column concatenation") {
  FeatureMatrix a(12, 2, FeatureKind::kRateMap), b(12, 3, FeatureKind::kAcf);
  auto na = testsig::Noise(24, 1.0, 1), nb = testsig::Noise(36, 1.0, 2);
  std::copy(na.begin(), na.end(), a.data().begin());
  std::copy(nb.begin(), nb.end(), b.data().begin());
  const auto joint = AddDeltas(ConcatColumns(a, b, FeatureKind::kCombined));
  const auto da = AddDeltas(a), db = AddDeltas(b);
  for (std::size_t t = 4; t < 8; ++t) {
    CHECK(joint(t, 5) == doctest::Approx(da(t, 2)));
    CHECK(joint(t, 7) == doctest::Approx(db(t, 3)));
  }
}

TEST_CASE("min-max normalisation endpoints, degenerate dims and clipping") {
  FeatureMatrix f(3, 2, FeatureKind::kRateMap);
  f(0, 0) = 1; f(1, 0) = 2; f(2, 0) = 3;
  f(0, 1) = 7; f(1, 1) = 7; f(2, 1) = 7;
  std::vector<FeatureMatrix> train{f};
  const auto stats = FitNorm(train);
  const auto n = ApplyNorm(f, stats);
  CHECK(n(0, 0) == doctest::Approx(0.05));
  CHECK(n(2, 0) == doctest::Approx(0.95));
  for (std::size_t t = 0; t < 3; ++t) CHECK(n(t, 1) == 0.5);
  FeatureMatrix big(1, 2, FeatureKind::kRateMap);
  big(0, 0) = 6.0;
  big(0, 1) = 100.0;
  const auto nb = ApplyNorm(big, stats);
  CHECK(nb(0, 0) == 1.0);
  CHECK(nb(0, 1) == 0.5);
}

TEST_CASE("feature container round-trip") {
  FeatureMatrix f(4, 3, FeatureKind::kBottleneck);
  for (std::size_t i = 0; i < 12; ++i) f.data()[i] = 0.25 * i;
  const auto path = std::filesystem::temp_directory_path() / "sdb_feat_rt.bin";
  SaveFeatures(f, path);
  const auto g = LoadFeatures(path);
  CHECK(g == f);
  std::filesystem::remove(path);
}
