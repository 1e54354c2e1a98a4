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
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "sdb/error.hpp"
#include "sdb/frontend.hpp"

namespace sdb {

namespace {

constexpr int kFftSize = 512;
constexpr int kMelBands = 26;
constexpr double kLogFloor = 1e-10;

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

struct MelBank {
  // weights[band][bin] over bins 0..kFftSize/2
  std::vector<std::vector<double>> weights;
  std::vector<double> window;
  std::vector<std::vector<double>> dct;  // rows k = 1..kNumCeps
};

MelBank BuildMelBank() {
  MelBank bank;
  const int n_bins = kFftSize / 2 + 1;
  const double top = HzToMel(kSampleRate / 2.0);
  std::vector<double> edges(kMelBands + 2);
  for (int i = 0; i < kMelBands + 2; ++i) edges[static_cast<std::size_t>(i)] = MelToHz(top * i / (kMelBands + 1));
  bank.weights.assign(kMelBands, std::vector<double>(n_bins, 0.0));
  for (int m = 0; m < kMelBands; ++m) {
    const double lo = edges[static_cast<std::size_t>(m)];
    const double mid = edges[static_cast<std::size_t>(m) + 1];
    const double hi = edges[static_cast<std::size_t>(m) + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * kSampleRate / kFftSize;
      double w = 0.0;
      if (f > lo && f <= mid)
        w = (f - lo) / (mid - lo);
      else if (f > mid && f < hi)
        w = (hi - f) / (hi - mid);
      bank.weights[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] = w;
    }
  }
  bank.window.resize(kFrameLength);
  for (int i = 0; i < kFrameLength; ++i)
    bank.window[static_cast<std::size_t>(i)] =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (kFrameLength - 1));
  const double norm = std::sqrt(2.0 / kMelBands);
  bank.dct.assign(kNumCeps, std::vector<double>(kMelBands));
  for (int k = 1; k <= kNumCeps; ++k)
    for (int m = 0; m < kMelBands; ++m)
      bank.dct[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(m)] =
          norm * std::cos(std::numbers::pi * k * (m + 0.5) / kMelBands);
  return bank;
}

const MelBank& Bank() {
  static const MelBank bank = BuildMelBank();
  return bank;
}

}  // namespace

FeatureMatrix Mfcc(const AudioClip& clip) {
  const std::size_t n_frames = NumFrames(clip.size());
  if (n_frames == 0) Fail(ErrorCode::kInvalidArgument, "clip is shorter than one 25 ms frame");
  const MelBank& bank = Bank();
  FeatureMatrix out(n_frames, kNumCeps, FeatureKind::kMfcc);
  Eigen::FFT<double> fft;
  std::vector<double> buf(kFftSize, 0.0);
  std::vector<std::complex<double>> spec;
  std::vector<double> power(kFftSize / 2 + 1);
  std::vector<double> log_mel(kMelBands);
  const auto s = clip.samples();
  for (std::size_t t = 0; t < n_frames; ++t) {
    const auto frame = s.subspan(t * kFrameStep, kFrameLength);
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int i = 0; i < kFrameLength; ++i)
      buf[static_cast<std::size_t>(i)] = frame[static_cast<std::size_t>(i)] * bank.window[static_cast<std::size_t>(i)];
    fft.fwd(spec, buf);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(spec[k]);
    for (int m = 0; m < kMelBands; ++m) {
      const auto& w = bank.weights[static_cast<std::size_t>(m)];
      double e = 0.0;
      for (std::size_t k = 0; k < power.size(); ++k) e += w[k] * power[k];
      log_mel[static_cast<std::size_t>(m)] = std::log(std::max(e, kLogFloor));
    }
    auto row = out.row(t);
    for (int k = 0; k < kNumCeps; ++k) {
      const auto& basis = bank.dct[static_cast<std::size_t>(k)];
      double c = 0.0;
      for (int m = 0; m < kMelBands; ++m) c += basis[static_cast<std::size_t>(m)] * log_mel[static_cast<std::size_t>(m)];
      row[static_cast<std::size_t>(k)] = c;
    }
  }
  return out;
}

}  // namespace sdb
