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

#ifndef SDB_FRONTEND_HPP_
#define SDB_FRONTEND_HPP_

#include <span>
#include <string>
#include <vector>

#include "sdb/corpus.hpp"
#include "sdb/features.hpp"

namespace sdb {

inline constexpr int kFrameLength = 400;  // 25 ms at 16 kHz
inline constexpr int kFrameStep = 160;    // 10 ms
inline constexpr int kAcfLags = 320;      // lag 320 <-> 50 Hz
inline constexpr int kNumCeps = 12;

// Number of full frames; 0 when the clip is shorter than one window.
std::size_t NumFrames(std::size_t n_samples, int win = kFrameLength, int step = kFrameStep);

// Splits a clip into overlapping frames, dropping the trailing partial frame.
std::vector<std::vector<double>> FrameSignal(const AudioClip& clip, double win_s = 0.025,
                                             double step_s = 0.010);

// Glasberg & Moore ERB-rate and its inverse.
double ErbRate(double hz);
double InverseErbRate(double erb);
// Equivalent rectangular bandwidth in Hz.
double Erb(double hz);

struct FilterbankSpec {
  int n_channels = 64;
  double fmin = 80.0;
  double fmax = 7500.0;
  int sample_rate = kSampleRate;
  std::vector<double> center_freqs;
};

FilterbankSpec DesignGammatoneBank(int n = 64, double fmin = 80.0, double fmax = 7500.0,
                                   int sample_rate = kSampleRate);

// Magnitude response at `hz` of the channel centred at `cf`, as realised by
// RateMap's filter (unit gain at cf).
double GammatoneGain(double cf, double hz, int sample_rate = kSampleRate);

// Auditory rate map: gammatone filtering, half-wave rectification, 8 ms
// leaky integration, sampling at each frame centre and log(1 + x).
FeatureMatrix RateMap(const AudioClip& clip, const FilterbankSpec& spec);

// Lags 1..320 of the short-term autocorrelation of each 25 ms frame, divided
// by A(0) + 1e-10.
FeatureMatrix AcfFrames(const AudioClip& clip);
// Same for one frame; `frame` may be any length.
std::vector<double> FrameAcf(std::span<const double> frame, int max_lag = kAcfLags);

// 12 cepstra C1..C12 per frame (Hamming, 512-point power spectrum, 26 mel
// bands over 0-8000 Hz, log floored at 1e-10, DCT-II).
FeatureMatrix Mfcc(const AudioClip& clip);

// Appends regression deltas and accelerations: [static, delta, delta-delta].
FeatureMatrix AddDeltas(const FeatureMatrix& f, int window = 2);

// Per-dimension min-max scaling onto [0.05, 0.95]; unseen values clip to [0, 1].
struct NormStats {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t dims() const { return min.size(); }
  friend bool operator==(const NormStats&, const NormStats&) = default;
};

NormStats FitNorm(std::span<const FeatureMatrix> training);
FeatureMatrix ApplyNorm(const FeatureMatrix& f, const NormStats& stats);

// Subtracts each dimension's mean over the recording.
FeatureMatrix SubtractRecordingMean(const FeatureMatrix& f);

// Per-dimension mean / inverse standard deviation for classifier inputs.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> inv_std;

  std::size_t dims() const { return mean.size(); }
  friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

Standardizer FitStandardizer(std::span<const FeatureMatrix> training);
FeatureMatrix ApplyStandardizer(const FeatureMatrix& f, const Standardizer& s);

}  // namespace sdb

#endif  // SDB_FRONTEND_HPP_
