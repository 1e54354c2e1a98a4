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

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "sdb/frontend.hpp"

namespace sdb {

namespace {

// Envelopes are compressed in 16-bit sample units.
constexpr double kPcmScale = 32768.0;

constexpr double kBandwidthFactor = 1.019;
constexpr double kEnvelopeTau = 0.008;

double PoleRadius(double cf, int sample_rate) {
  return std::exp(-2.0 * std::numbers::pi * kBandwidthFactor * Erb(cf) / sample_rate);
}

}  // namespace

double ErbRate(double hz) { return 21.4 * std::log10(4.37 * hz / 1000.0 + 1.0); }

double InverseErbRate(double erb) { return (std::pow(10.0, erb / 21.4) - 1.0) * 1000.0 / 4.37; }

double Erb(double hz) { return 24.7 * (4.37 * hz / 1000.0 + 1.0); }

FilterbankSpec DesignGammatoneBank(int n, double fmin, double fmax, int sample_rate) {
  if (n < 2) Fail(ErrorCode::kInvalidArgument, "filterbank needs at least 2 channels");
  if (!(fmin > 0.0) || !(fmax > fmin))
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("invalid filterbank range fmin={} fmax={}", fmin, fmax));
  FilterbankSpec spec{n, fmin, fmax, sample_rate, {}};
  const double lo = ErbRate(fmin);
  const double step = (ErbRate(fmax) - lo) / (n - 1);
  spec.center_freqs.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) spec.center_freqs[static_cast<std::size_t>(i)] = InverseErbRate(lo + i * step);
  spec.center_freqs.front() = fmin;
  spec.center_freqs.back() = fmax;
  return spec;
}

double GammatoneGain(double cf, double hz, int sample_rate) {
  const double a = PoleRadius(cf, sample_rate);
  const double nu = 2.0 * std::numbers::pi * (hz - cf) / sample_rate;
  const std::complex<double> denom = 1.0 - a * std::polar(1.0, -nu);
  return std::pow((1.0 - a) / std::abs(denom), 4);
}

// Each channel is a cascade of four complex one-pole low-pass sections applied
// to the signal shifted down by the centre frequency; shifting back and taking
// twice the real part gives a real band-pass output with unit gain at cf.
FeatureMatrix RateMap(const AudioClip& clip, const FilterbankSpec& spec) {
  const std::size_t n_frames = NumFrames(clip.size());
  if (n_frames == 0)
    Fail(ErrorCode::kInvalidArgument, "clip is shorter than one 25 ms frame");
  if (spec.center_freqs.size() != static_cast<std::size_t>(spec.n_channels))
    Fail(ErrorCode::kInvalidArgument, "filterbank spec is inconsistent");
  const int fs = spec.sample_rate;
  const auto x = clip.samples();
  FeatureMatrix out(n_frames, spec.center_freqs.size(), FeatureKind::kRateMap);
  const double smooth = std::exp(-1.0 / (kEnvelopeTau * fs));

  for (std::size_t ch = 0; ch < spec.center_freqs.size(); ++ch) {
    const double cf = spec.center_freqs[ch];
    const double a = PoleRadius(cf, fs);
    const double g = 1.0 - a;
    const double w = 2.0 * std::numbers::pi * cf / fs;
    const double rot_re = std::cos(w);
    const double rot_im = std::sin(w);
    double ph_re = 1.0, ph_im = 0.0;  // exp(i w n)
    double z_re[4] = {0, 0, 0, 0};
    double z_im[4] = {0, 0, 0, 0};
    double env = 0.0;
    std::size_t next_frame = 0;
    std::size_t next_sample = kFrameLength / 2;
    for (std::size_t n = 0; n < x.size() && next_frame < n_frames; ++n) {
      // shift down: x * exp(-i w n)
      double in_re = x[n] * ph_re;
      double in_im = -x[n] * ph_im;
      for (int k = 0; k < 4; ++k) {
        z_re[k] = g * in_re + a * z_re[k];
        z_im[k] = g * in_im + a * z_im[k];
        in_re = z_re[k];
        in_im = z_im[k];
      }
      const double y = 2.0 * (in_re * ph_re - in_im * ph_im);
      env = smooth * env + (1.0 - smooth) * std::max(y, 0.0);
      if (n == next_sample) {
        out(next_frame, ch) = std::log1p(kPcmScale * env);
        ++next_frame;
        next_sample += kFrameStep;
      }
      const double re = ph_re * rot_re - ph_im * rot_im;
      ph_im = ph_re * rot_im + ph_im * rot_re;
      ph_re = re;
      if ((n & 1023u) == 1023u) {
        const double mag = std::hypot(ph_re, ph_im);
        ph_re /= mag;
        ph_im /= mag;
      }
    }
  }
  return out;
}

}  // namespace sdb
