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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "sdb/corpus.hpp"
#include "sdb/error.hpp"
#include "sdb/frontend.hpp"
#include "sdb/screen.hpp"
#include "sdb/synth.hpp"

using namespace sdb;
namespace fs = std::filesystem;

namespace {

fs::path TempDir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("sdb_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void WriteWav(const fs::path& p, int channels, int rate, const std::vector<std::int16_t>& data) {
  auto u32 = [](std::string& s, std::uint32_t v) { s.append(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [](std::string& s, std::uint16_t v) { s.append(reinterpret_cast<const char*>(&v), 2); };
  std::string out = "RIFF";
  u32(out, 36 + 2 * data.size());
  out += "WAVEfmt ";
  u32(out, 16);
  u16(out, 1);
  u16(out, channels);
  u32(out, rate);
  u32(out, rate * 2 * channels);
  u16(out, 2 * channels);
  u16(out, 16);
  out += "data";
  u32(out, 2 * data.size());
  for (auto v : data) u16(out, static_cast<std::uint16_t>(v));
  std::ofstream(p, std::ios::binary) << out;
}

LabelTrack Parse(const std::string& text, LabelScheme s = LabelScheme::kMerged) {
  std::istringstream in(text);
  return ParseLabels(in, s);
}

}  // namespace

TEST_CASE("load_audio scaling and format errors") {
  auto dir = TempDir("audio");
  WriteWav(dir / "zero.wav", 1, 16000, std::vector<std::int16_t>(16000, 0));
  auto clip = LoadAudio(dir / "zero.wav");
  CHECK(clip.size() == 16000);
  for (double v : clip.samples()) CHECK(v == 0.0);

  WriteWav(dir / "half.wav", 1, 16000, {16384, -32768});
  auto h = LoadAudio(dir / "half.wav");
  CHECK(h.samples()[0] == 0.5);
  CHECK(h.samples()[1] == -1.0);

  WriteWav(dir / "stereo.wav", 2, 16000, {0, 0});
  try {
    LoadAudio(dir / "stereo.wav");
    FAIL("expected a format error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFormat);
    CHECK(std::string(e.what()).find("channels=2") != std::string::npos);
  }
  WriteWav(dir / "rate.wav", 1, 8000, {0});
  CHECK_THROWS_AS(LoadAudio(dir / "rate.wav"), Error);
  CHECK_THROWS_AS(LoadAudio(dir / "missing.wav"), Error);

  AudioClip a(std::vector<double>{0.0, 0.25, -0.5, 0.999});
  SaveAudio(a, dir / "rt.wav");
  auto b = LoadAudio(dir / "rt.wav");
  for (std::size_t i = 0; i < 4; ++i) CHECK(b.samples()[i] == doctest::Approx(a.samples()[i]).epsilon(1e-4));
  fs::remove_all(dir);
}

TEST_CASE("audio clip invariants") {
  CHECK_THROWS_AS(AudioClip(std::vector<double>{0.0}, 8000), Error);
  CHECK_THROWS_AS(AudioClip(std::vector<double>{std::nan("")}), Error);
}

TEST_CASE("parse_labels") {
  auto t = Parse("0.0\t1.5\tsnore\n");
  REQUIRE(t.segments.size() == 1);
  CHECK(t.segments[0].start == 0.0);
  CHECK(t.segments[0].end == 1.5);
  CHECK(t.segments[0].label == RawLabel::kSnore);

  auto sorted = Parse("2\t3\tbreath\n0\t1\tsnore\n");
  CHECK(sorted.segments[0].label == RawLabel::kSnore);
  CHECK(sorted.segments[1].label == RawLabel::kBreath);

  CHECK_THROWS_AS(Parse("0\t1\tcough\n"), Error);
  CHECK_THROWS_AS(Parse("0\t1\twheezing\n"), Error);
  CHECK_NOTHROW(Parse("0\t1\twheezing\n", LabelScheme::kRaw));
  CHECK_THROWS_AS(Parse("0\t2\tsnore\n1\t3\tbreath\n"), Error);
  CHECK_THROWS_AS(Parse("1\t1\tsnore\n"), Error);
}

TEST_CASE("label round-trip is the identity") {
  auto t = Parse("0.125\t1.5\twheezing\n1.5\t2.25\tnoisy_in_breath\n3\t4.001\tother\n", LabelScheme::kRaw);
  std::istringstream in(FormatLabels(t));
  CHECK(ParseLabels(in, LabelScheme::kRaw) == t);
}

TEST_CASE("merge_classes") {
  auto m = MergeClasses(Parse("0\t1\twheezing\n", LabelScheme::kRaw));
  REQUIRE(m.segments.size() == 1);
  CHECK(m.segments[0].label == RawLabel::kSnore);
  CHECK(m.scheme == LabelScheme::kMerged);

  auto c = MergeClasses(Parse("0\t1\tsnore\n1\t2\tnoisy_in_breath\n", LabelScheme::kRaw));
  REQUIRE(c.segments.size() == 1);
  CHECK(c.segments[0].end == 2.0);

  auto b = MergeClasses(Parse("0\t1\tbreath\n", LabelScheme::kRaw));
  CHECK(b.segments[0].label == RawLabel::kBreath);
  CHECK_THROWS_AS(MergeClasses(b), Error);

  auto raw = Parse("0\t0.3\tsnore\n0.3\t0.7\twheezing\n1\t1.2\tbreath\n1.2\t2.5\tnoisy_in_breath\n", LabelScheme::kRaw);
  auto merged = MergeClasses(raw);
  double a = 0, z = 0;
  for (auto& s : raw.segments) a += s.end - s.start;
  for (auto& s : merged.segments) z += s.end - s.start;
  CHECK(a == doctest::Approx(z).epsilon(1e-12));
}

TEST_CASE("labels_to_frames frame-centre rule") {
  auto all = LabelsToFrames(Parse("0\t2\tsnore\n"), 10);
  CHECK(all.size() == 10);
  for (auto l : all.labels) CHECK(l == EventClass::kSnore);
  auto empty = LabelsToFrames(LabelTrack{{}, LabelScheme::kMerged}, 5);
  for (auto l : empty.labels) CHECK(l == EventClass::kSilence);
  auto f = LabelsToFrames(Parse("0\t0.05\tsnore\n0.05\t0.2\tbreath\n"), 10);
  CHECK(f.labels[3] == EventClass::kSnore);
  CHECK(f.labels[4] == EventClass::kBreath);
  CHECK_THROWS_AS(LabelsToFrames(Parse("0\t1\tsnore\n"), 0), Error);
}

TEST_CASE("frames_to_events and round-trip") {
  FrameLabels f;
  using E = EventClass;
  f.labels = {E::kSnore, E::kSnore, E::kBreath, E::kBreath, E::kBreath};
  auto ev = FramesToEvents(f);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == Event{E::kSnore, 0, 2});
  CHECK(ev[1] == Event{E::kBreath, 2, 5});
  CHECK(FramesToEvents(FrameLabels{}).empty());

  EventSequence e{{E::kSilence, 0, 3}, {E::kSnore, 3, 9}, {E::kOther, 9, 10}, {E::kBreath, 10, 20}};
  auto frames = EventsToFrames(e, 20);
  CHECK(FramesToEvents(frames) == e);
  auto track = EventsToTrack(e, 0.010, 0.025, 0.215);
  CHECK(FramesToEvents(LabelsToFrames(track, 20)) == e);
}

TEST_CASE("manifest round-trip") {
  auto dir = TempDir("manifest");
  CorpusManifest m;
  m.entries.push_back({"audio/a.wav", "labels/a.tsv", Split::kTrain, "s1"});
  m.entries.push_back({"audio/b.wav", "labels/b.tsv", Split::kTest, "s2"});
  WriteManifest(m, dir / "manifest.tsv");
  auto r = ReadManifest(dir / "manifest.tsv");
  CHECK(r.entries == m.entries);
  CHECK(r.Select({Split::kTest}).size() == 1);
  CHECK(RecordingId(r.entries[0]) == "a");
  fs::remove_all(dir);
}

TEST_CASE("synth_corpus is deterministic") {
  SynthConfig cfg;
  cfg.speakers = 2;
  cfg.test_speakers = 1;
  cfg.clips_per_speaker = 1;
  cfg.dev_clips_per_speaker = 0;
  cfg.clip_seconds = 6;
  cfg.snore_events = 2;
  cfg.breath_events = 1;
  cfg.other_events = 1;
  auto a = TempDir("synth_a"), b = TempDir("synth_b");
  auto ma = SynthCorpus(cfg, 7, a);
  SynthCorpus(cfg, 7, b);
  for (const auto& e : ma.entries) {
    for (const auto& rel : {e.audio_path, e.label_path}) {
      std::ifstream fa(a / rel, std::ios::binary), fb(b / rel, std::ios::binary);
      std::stringstream sa, sb;
      sa << fa.rdbuf();
      sb << fb.rdbuf();
      CHECK(sa.str() == sb.str());
      CHECK(!sa.str().empty());
    }
  }
  // Speaker-disjoint split.
  CHECK(ma.entries[0].split == Split::kTrain);
  CHECK(ma.entries[1].split == Split::kTest);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("synth with no events yields silence-only clips") {
  SynthConfig cfg;
  cfg.clip_seconds = 3;
  cfg.snore_events = cfg.breath_events = cfg.other_events = 0;
  auto clip = SynthesizeClip(cfg, DrawSpeaker(cfg, 1), 2);
  REQUIRE(clip.labels.segments.size() == 1);
  CHECK(clip.labels.segments[0].label == RawLabel::kSilence);
  CHECK(clip.labels.segments[0].end == doctest::Approx(3.0));
}

TEST_CASE("synth rejects invalid ranges") {
  SynthConfig cfg;
  cfg.snore_duration = {2.0, 1.0};
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg = SynthConfig{};
  cfg.test_speakers = 9;
  CHECK_THROWS_AS(cfg.Validate(), Error);
}

TEST_CASE("synthetic snores are periodic in the 50-250 Hz range") {
  SynthConfig cfg;
  cfg.clip_seconds = 20;
  cfg.snore_events = 6;
  cfg.breath_events = 2;
  cfg.other_events = 1;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto clip = SynthesizeClip(cfg, DrawSpeaker(cfg, seed), seed * 17);
    for (const auto& s : clip.labels.segments) {
      if (s.label != RawLabel::kSnore) continue;
      const auto a = static_cast<std::size_t>(s.start * 16000), b = static_cast<std::size_t>(s.end * 16000);
      auto span = clip.audio.samples().subspan(a, b - a);
      auto acf = oracle::Acf(span, 267);
      double peak = 0.0;
      for (int lag = 64; lag <= 267; ++lag) peak = std::max(peak, acf[lag - 1]);
      CHECK(peak > 0.5);
    }
  }
}

TEST_CASE("screener: vacuous threshold, short clips and snore-rich segments") {
  SynthConfig cfg;
  cfg.clip_seconds = 125;
  cfg.snore_events = 30;
  cfg.breath_events = 10;
  cfg.other_events = 3;
  auto clip = SynthesizeClip(cfg, DrawSpeaker(cfg, 3), 4);
  auto mfcc = Mfcc(clip.audio);
  auto labels = LabelsToFrames(clip.labels, static_cast<int>(mfcc.rows()));
  std::vector<FeatureMatrix> feats{mfcc};
  std::vector<FrameLabels> labs{labels};
  GmmFitOptions opts;
  opts.components = 4;
  opts.max_iterations = 10;
  auto screener = TrainScreener(feats, labs, opts);

  auto all = ScreenSegments(clip.audio, screener, 0.0);
  REQUIRE(all.size() == 1);
  CHECK(all[0].first == 0.0);
  CHECK(all[0].second == 120.0);

  std::size_t snore = 0, n120 = 0;
  for (std::size_t t = 0; t < labels.size() && t * 0.01 + 0.0125 < 120.0; ++t, ++n120)
    snore += labels.labels[t] == EventClass::kSnore;
  const double frac = static_cast<double>(snore) / n120;
  CHECK(frac > 0.2);
  CHECK(ScreenSegments(clip.audio, screener, 0.2).size() == 1);

  AudioClip short_clip(std::vector<double>(16000 * 10));
  CHECK(ScreenSegments(short_clip, screener, 0.0).empty());
}

TEST_CASE("screener biased to non-snore returns nothing on silence") {
  Screener s;
  s.snore.weights = Eigen::VectorXd::Ones(1);
  s.snore.means = Eigen::MatrixXd::Constant(1, 12, 50.0);
  s.snore.variances = Eigen::MatrixXd::Ones(1, 12);
  s.non_snore.weights = Eigen::VectorXd::Ones(1);
  s.non_snore.means = Eigen::MatrixXd::Zero(1, 12);
  s.non_snore.variances = Eigen::MatrixXd::Constant(1, 12, 100.0);
  s.snore.Prepare();
  s.non_snore.Prepare();
  AudioClip silence(std::vector<double>(16000 * 121));
  CHECK(ScreenSegments(silence, s).empty());
}
