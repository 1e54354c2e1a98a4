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

#include "sdb/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "sdb/error.hpp"

namespace sdb {
namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t Mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // 53-bit uniform in [0, 1); avoids implementation-defined distributions.
  double Uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Uniform(const Range& r) { return Uniform(r.lo, r.hi); }
  double Gaussian() {
    double u1 = Uniform();
    while (u1 <= 0.0) u1 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * Uniform());
  }
  std::size_t Index(std::size_t n) { return static_cast<std::size_t>(Uniform() * n); }

 private:
  std::mt19937_64 gen_;
};

void CheckRange(const Range& r, const char* name, double min_lo) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi || r.lo < min_lo) {
    Fail(ErrorCode::kConfig, fmt::format("synth: invalid range {} [{}, {}]", name, r.lo, r.hi));
  }
}

double Rms(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return x.empty() ? 0.0 : std::sqrt(s / x.size());
}

void ScaleToRms(std::vector<double>& x, double target) {
  double r = Rms(x);
  if (r <= 0.0) return;
  for (double& v : x) v *= target / r;
}

// Raised-sine burst envelope with `ramp` seconds of fade at both ends.
double Envelope(std::size_t n, std::size_t len, double ramp_samples) {
  double t = static_cast<double>(n);
  double fade = std::min({1.0, (t + 0.5) / ramp_samples, (len - t - 0.5) / ramp_samples});
  return std::sin(0.5 * kPi * std::max(0.0, fade));
}

// Two-pole resonator at `hz` with the given bandwidth.
std::vector<double> Resonate(std::span<const double> x, double hz, double bw) {
  double r = std::exp(-kPi * bw / kSampleRate);
  double c1 = 2.0 * r * std::cos(2.0 * kPi * hz / kSampleRate);
  double c2 = -r * r;
  std::vector<double> y(x.size());
  double y1 = 0.0, y2 = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    double v = x[n] + c1 * y1 + c2 * y2;
    y[n] = v;
    y2 = y1;
    y1 = v;
  }
  return y;
}

// Band-pass biquad with 0 dB peak gain.
std::vector<double> BandPass(std::span<const double> x, double hz, double q) {
  double w = 2.0 * kPi * hz / kSampleRate;
  double alpha = std::sin(w) / (2.0 * q);
  double a0 = 1.0 + alpha;
  double b0 = alpha / a0, b2 = -alpha / a0;
  double a1 = -2.0 * std::cos(w) / a0, a2 = (1.0 - alpha) / a0;
  std::vector<double> y(x.size());
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    double v = b0 * x[n] + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x[n];
    y2 = y1;
    y1 = v;
    y[n] = v;
  }
  return y;
}

std::vector<double> SnoreBurst(std::size_t len, const SynthConfig& cfg, const SpeakerParams& sp,
                               Rng& rng) {
  double f0 = std::clamp(sp.f0 * rng.Uniform(0.92, 1.08), cfg.f0.lo, cfg.f0.hi);
  double drift = rng.Uniform(-0.05, 0.05);  // relative pitch glide over the burst
  std::vector<double> saw(len);
  double phase = rng.Uniform();
  for (std::size_t n = 0; n < len; ++n) {
    double f = f0 * (1.0 + drift * static_cast<double>(n) / len);
    saw[n] = 2.0 * phase - 1.0;
    phase += f / kSampleRate;
    phase -= std::floor(phase);
  }
  std::vector<double> formant = Resonate(saw, sp.formant * rng.Uniform(0.9, 1.1), 120.0);
  ScaleToRms(formant, 1.0);
  std::vector<double> out(len);
  for (std::size_t n = 0; n < len; ++n) {
    out[n] = (0.6 * saw[n] + 0.4 * formant[n]) * Envelope(n, len, 0.15 * len);
  }
  return out;
}

constexpr double kBreathGain = 0.6;

std::vector<double> BreathBurst(std::size_t len, const SpeakerParams& sp, Rng& rng) {
  std::vector<double> noise(len);
  for (double& v : noise) v = rng.Gaussian();
  std::vector<double> out = BandPass(noise, sp.breath_band * rng.Uniform(0.85, 1.15), 1.2);
  for (std::size_t n = 0; n < len; ++n) out[n] *= Envelope(n, len, 0.3 * len);
  return out;
}

std::vector<double> OtherBurst(std::size_t len, Rng& rng) {
  std::vector<double> out(len);
  const double ramp = 0.02 * kSampleRate;
  if (rng.Uniform() < 0.5) {
    double f = rng.Uniform(400.0, 3000.0);
    for (std::size_t n = 0; n < len; ++n) {
      double t = static_cast<double>(n) / kSampleRate;
      out[n] = (std::sin(2 * kPi * f * t) + 0.4 * std::sin(4 * kPi * f * t)) * Envelope(n, len, ramp);
    }
  } else {
    double f1 = rng.Uniform(300.0, 4000.0), f2 = rng.Uniform(300.0, 4000.0);
    double dur = static_cast<double>(len) / kSampleRate;
    for (std::size_t n = 0; n < len; ++n) {
      double t = static_cast<double>(n) / kSampleRate;
      double ph = 2 * kPi * (f1 * t + 0.5 * (f2 - f1) * t * t / dur);
      out[n] = std::sin(ph) * Envelope(n, len, ramp);
    }
  }
  return out;
}

}  // namespace

void SynthConfig::Validate() const {
  if (speakers < 1) Fail(ErrorCode::kConfig, "synth: speakers must be >= 1");
  if (test_speakers < 0 || test_speakers > speakers) {
    Fail(ErrorCode::kConfig, "synth: test_speakers must lie in [0, speakers]");
  }
  if (clips_per_speaker < 1) Fail(ErrorCode::kConfig, "synth: clips_per_speaker must be >= 1");
  if (dev_clips_per_speaker < 0 || dev_clips_per_speaker > clips_per_speaker) {
    Fail(ErrorCode::kConfig, "synth: dev_clips_per_speaker must lie in [0, clips_per_speaker]");
  }
  if (!(clip_seconds >= 0.025) || !std::isfinite(clip_seconds)) {
    Fail(ErrorCode::kConfig, "synth: clip_seconds must be >= 0.025");
  }
  if (snore_events < 0 || breath_events < 0 || other_events < 0) {
    Fail(ErrorCode::kConfig, "synth: event counts must be >= 0");
  }
  CheckRange(snore_duration, "snore_duration", 0.03);
  CheckRange(breath_duration, "breath_duration", 0.03);
  CheckRange(other_duration, "other_duration", 0.03);
  CheckRange(gap_duration, "gap_duration", 0.0);
  CheckRange(snr_db, "snr_db", -20.0);
  CheckRange(f0, "f0", 20.0);
  if (f0.hi >= kSampleRate / 4.0) Fail(ErrorCode::kConfig, "synth: f0 too high");
  if (!(adjacent_probability >= 0.0 && adjacent_probability <= 1.0)) {
    Fail(ErrorCode::kConfig, "synth: adjacent_probability must lie in [0, 1]");
  }
}

SpeakerParams DrawSpeaker(const SynthConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  SpeakerParams sp;
  double lo = cfg.f0.lo * 1.1, hi = cfg.f0.hi / 1.1;
  sp.f0 = lo < hi ? rng.Uniform(lo, hi) : 0.5 * (cfg.f0.lo + cfg.f0.hi);
  sp.formant = rng.Uniform(350.0, 900.0);
  sp.breath_band = rng.Uniform(1200.0, 3500.0);
  sp.gain = rng.Uniform(0.6, 1.4);
  return sp;
}

SynthClip SynthesizeClip(const SynthConfig& cfg, const SpeakerParams& speaker, std::uint64_t seed) {
  cfg.Validate();
  Rng rng(seed);
  const std::size_t total = static_cast<std::size_t>(std::llround(cfg.clip_seconds * kSampleRate));

  std::vector<EventClass> order;
  order.insert(order.end(), cfg.snore_events, EventClass::kSnore);
  order.insert(order.end(), cfg.breath_events, EventClass::kBreath);
  order.insert(order.end(), cfg.other_events, EventClass::kOther);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.Index(i)]);

  const double level = 0.1 * speaker.gain;
  const double snr = rng.Uniform(cfg.snr_db);
  // SNR is taken against breathing, the quietest event class.
  const double noise_rms = level * kBreathGain * std::pow(10.0, -snr / 20.0);

  std::vector<double> audio(total);
  for (double& v : audio) v = noise_rms * rng.Gaussian();

  LabelTrack track;
  track.scheme = LabelScheme::kMerged;
  auto add_segment = [&](std::size_t a, std::size_t b, EventClass c) {
    if (b <= a) return;
    double s = static_cast<double>(a) / kSampleRate, e = static_cast<double>(b) / kSampleRate;
    if (!track.segments.empty() && track.segments.back().label == AsRawLabel(c)) {
      track.segments.back().end = e;
    } else {
      track.segments.push_back({s, e, AsRawLabel(c)});
    }
  };

  std::size_t cursor = static_cast<std::size_t>(rng.Uniform(cfg.gap_duration) * kSampleRate);
  cursor = std::min(cursor, total);
  add_segment(0, cursor, EventClass::kSilence);
  EventClass prev = EventClass::kSilence;
  for (EventClass c : order) {
    const Range& dr = c == EventClass::kSnore    ? cfg.snore_duration
                      : c == EventClass::kBreath ? cfg.breath_duration
                                                 : cfg.other_duration;
    std::size_t len = static_cast<std::size_t>(rng.Uniform(dr) * kSampleRate);
    // Back-to-back events only between different classes.
    bool adjacent = prev != EventClass::kSilence && prev != c &&
                    rng.Uniform() < cfg.adjacent_probability;
    std::size_t start = cursor;
    if (!adjacent && prev != EventClass::kSilence) {
      start += static_cast<std::size_t>(rng.Uniform(cfg.gap_duration) * kSampleRate);
    }
    if (start + len + kSampleRate / 5 > total) break;
    add_segment(cursor, start, EventClass::kSilence);

    std::vector<double> burst = c == EventClass::kSnore    ? SnoreBurst(len, cfg, speaker, rng)
                                : c == EventClass::kBreath ? BreathBurst(len, speaker, rng)
                                                           : OtherBurst(len, rng);
    double gain = c == EventClass::kBreath ? kBreathGain : 1.0;
    ScaleToRms(burst, level * gain * rng.Uniform(0.7, 1.3));
    for (std::size_t n = 0; n < len; ++n) audio[start + n] += burst[n];
    add_segment(start, start + len, c);
    cursor = start + len;
    prev = c;
  }
  add_segment(cursor, total, EventClass::kSilence);
  for (double& v : audio) v = std::clamp(v, -1.0, 32767.0 / 32768.0);
  return {AudioClip(std::move(audio)), std::move(track)};
}

CorpusManifest SynthCorpus(const SynthConfig& cfg, std::uint64_t seed,
                           const std::filesystem::path& out_dir) {
  cfg.Validate();
  CorpusManifest manifest;
  manifest.base_dir = out_dir;
  const int n_train = cfg.speakers - cfg.test_speakers;
  Rng split_rng(Mix(seed, 0xde5));
  std::filesystem::create_directories(out_dir / "audio");
  std::filesystem::create_directories(out_dir / "labels");
  for (int s = 0; s < cfg.speakers; ++s) {
    SpeakerParams sp = DrawSpeaker(cfg, Mix(seed, 1000 + s));
    std::string speaker = fmt::format("spk{:02d}", s);
    std::vector<Split> splits(cfg.clips_per_speaker, s < n_train ? Split::kTrain : Split::kTest);
    if (s < n_train) {
      std::vector<int> idx(cfg.clips_per_speaker);
      for (int i = 0; i < cfg.clips_per_speaker; ++i) idx[i] = i;
      for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[split_rng.Index(i)]);
      for (int i = 0; i < cfg.dev_clips_per_speaker; ++i) splits[idx[i]] = Split::kDev;
    }
    // Each speaker's clips draw their SNR from disjoint slices of the range,
    // in shuffled order.
    std::vector<int> stratum(cfg.clips_per_speaker);
    for (int i = 0; i < cfg.clips_per_speaker; ++i) stratum[i] = i;
    Rng snr_rng(Mix(seed, 2000 + s));
    for (std::size_t i = stratum.size(); i > 1; --i) std::swap(stratum[i - 1], stratum[snr_rng.Index(i)]);
    for (int c = 0; c < cfg.clips_per_speaker; ++c) {
      SynthConfig clip_cfg = cfg;
      const double width = (cfg.snr_db.hi - cfg.snr_db.lo) / cfg.clips_per_speaker;
      clip_cfg.snr_db = {cfg.snr_db.lo + width * stratum[c], cfg.snr_db.lo + width * (stratum[c] + 1)};
      SynthClip clip = SynthesizeClip(clip_cfg, sp, Mix(seed, 100000 + 1000 * s + c));
      std::string id = fmt::format("{}_clip{:02d}", speaker, c);
      ManifestEntry e{"audio/" + id + ".wav", "labels/" + id + ".tsv", splits[c], speaker};
      SaveAudio(clip.audio, out_dir / e.audio_path);
      WriteLabels(clip.labels, out_dir / e.label_path);
      manifest.entries.push_back(std::move(e));
    }
  }
  WriteManifest(manifest, out_dir / "manifest.tsv");
  return manifest;
}

}  // namespace sdb
