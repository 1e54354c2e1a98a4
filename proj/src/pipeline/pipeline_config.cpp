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

#include <fmt/format.h>

#include "sdb/config.hpp"
#include "sdb/error.hpp"
#include "sdb/pipeline.hpp"
#include "util/binary_io.hpp"

namespace sdb {

namespace {

Range GetRange(const ConfigFile& f, const std::string& key, Range fallback) {
  const auto v = f.Numbers(key, {fallback.lo, fallback.hi});
  if (v.size() != 2) Fail(ErrorCode::kConfig, fmt::format("'{}' must be a [low, high] pair", key));
  return {v[0], v[1]};
}

Optimizer ParseOptimizer(const std::string& s) {
  if (s == "sgd") return Optimizer::kSgd;
  if (s == "adam") return Optimizer::kAdam;
  Fail(ErrorCode::kConfig, fmt::format("unknown optimizer '{}' (sgd or adam)", s));
}

void ReadTrain(const ConfigFile& f, const std::string& section, TrainConfig& t) {
  t.learning_rate = f.Number(section + ".learning_rate", t.learning_rate);
  t.epochs = static_cast<int>(f.Integer(section + ".epochs", t.epochs));
  t.batch_size = static_cast<int>(f.Integer(section + ".batch_size", t.batch_size));
  t.optimizer = ParseOptimizer(f.String(section + ".optimizer", t.optimizer == Optimizer::kAdam ? "adam" : "sgd"));
  t.momentum = f.Number(section + ".momentum", t.momentum);
  t.weight_decay = f.Number(section + ".weight_decay", t.weight_decay);
}

std::filesystem::path Under(const std::filesystem::path& base, const std::filesystem::path& p) {
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

bool IsFeatureSet(const std::string& name) {
  return name == "mfcc" || name == "rm" || name == "acf" || name == "rm+acf";
}

Split ParseSplit(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  Fail(ErrorCode::kConfig, fmt::format("unknown split '{}' (train, dev or test)", name));
}

SystemKind ParseSystem(const std::string& name) {
  if (name == "tandem") return SystemKind::kTandem;
  if (name == "hybrid") return SystemKind::kHybrid;
  Fail(ErrorCode::kConfig, fmt::format("unknown system '{}' (tandem or hybrid)", name));
}

std::filesystem::path PipelineConfig::ManifestPath() const {
  return manifest.empty() ? corpus_dir / "manifest.tsv" : manifest;
}

void PipelineConfig::Validate() const {
  if (!IsFeatureSet(features))
    Fail(ErrorCode::kConfig, fmt::format("unknown feature set '{}' (mfcc, rm, acf or rm+acf)", features));
  synth.Validate();
  try {
    autoencoder.Validate();
    classifier.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kConfig, e.what());
  }
  if (ae_max_frames == 0) Fail(ErrorCode::kConfig, "autoencoder.max_frames must be positive");
  if (hmm.gmm_components < 1 || hmm.max_iterations < 0 || !(hmm.tolerance >= 0.0) || !(hmm.variance_floor > 0.0))
    Fail(ErrorCode::kConfig, "invalid [hmm] settings");
  if (!(lm_alpha > 0.0)) Fail(ErrorCode::kConfig, "lm.alpha must be positive");
  if (!std::isfinite(decode.lm_scale) || decode.lm_scale < 0.0) Fail(ErrorCode::kConfig, "decode.lm_scale must be finite and >= 0");
  if (!std::isfinite(decode.insertion_penalty)) Fail(ErrorCode::kConfig, "decode.insertion_penalty must be finite");
  if (tune.lm_scales.empty() || tune.insertion_penalties.empty()) Fail(ErrorCode::kConfig, "tuning grid is empty");
  if (screener.components < 1 || screener.max_iterations < 0) Fail(ErrorCode::kConfig, "invalid [screener] settings");
  if (!(screen_threshold >= 0.0 && screen_threshold <= 1.0)) Fail(ErrorCode::kConfig, "screener.threshold must lie in [0, 1]");
  if (!(screen_segment_seconds > 0.0)) Fail(ErrorCode::kConfig, "screener.segment_seconds must be positive");
  if (lm_scale_override && (!std::isfinite(*lm_scale_override) || *lm_scale_override < 0.0))
    Fail(ErrorCode::kConfig, "--lm-scale must be finite and >= 0");
  if (insertion_penalty_override && !std::isfinite(*insertion_penalty_override))
    Fail(ErrorCode::kConfig, "--insertion-penalty must be finite");
}

PipelineConfig DefaultPipelineConfig() {
  PipelineConfig c;
  c.classifier.objective = Objective::kCrossEntropy;
  c.autoencoder.objective = Objective::kMse;
  c.tune.lm_scales = {0.0, 1.0, 2.0, 5.0, 10.0, 20.0};
  c.tune.insertion_penalties = {-100.0, -50.0, -20.0, -10.0, -5.0, 0.0, 5.0};
  return c;
}

PipelineConfig ParsePipelineConfig(const std::string& text, const std::filesystem::path& base_dir,
                                   const std::string& origin) {
  const ConfigFile f = ConfigFile::Parse(text, origin);
  PipelineConfig c = DefaultPipelineConfig();
  c.corpus_dir = Under(base_dir, f.String("paths.corpus", c.corpus_dir.string()));
  const std::string manifest = f.String("paths.manifest", "");
  if (!manifest.empty()) c.manifest = Under(base_dir, manifest);
  c.work_dir = Under(base_dir, f.String("paths.work", c.work_dir.string()));

  const long seed = f.Integer("seed", static_cast<long>(c.seed));
  if (seed < 0) Fail(ErrorCode::kConfig, "seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.features = f.String("features", c.features);
  c.system = ParseSystem(f.String("system", std::string(ToString(c.system))));
  c.split = ParseSplit(f.String("split", std::string(ToString(c.split))));

  c.rm_recording_mean_norm = f.Bool("frontend.rm_recording_mean_norm", c.rm_recording_mean_norm);

  auto& s = c.synth;
  s.speakers = static_cast<int>(f.Integer("synth.speakers", s.speakers));
  s.test_speakers = static_cast<int>(f.Integer("synth.test_speakers", s.test_speakers));
  s.clips_per_speaker = static_cast<int>(f.Integer("synth.clips_per_speaker", s.clips_per_speaker));
  s.dev_clips_per_speaker = static_cast<int>(f.Integer("synth.dev_clips_per_speaker", s.dev_clips_per_speaker));
  s.clip_seconds = f.Number("synth.clip_seconds", s.clip_seconds);
  s.snore_events = static_cast<int>(f.Integer("synth.snore_events", s.snore_events));
  s.breath_events = static_cast<int>(f.Integer("synth.breath_events", s.breath_events));
  s.other_events = static_cast<int>(f.Integer("synth.other_events", s.other_events));
  s.snore_duration = GetRange(f, "synth.snore_duration", s.snore_duration);
  s.breath_duration = GetRange(f, "synth.breath_duration", s.breath_duration);
  s.other_duration = GetRange(f, "synth.other_duration", s.other_duration);
  s.gap_duration = GetRange(f, "synth.gap_duration", s.gap_duration);
  s.adjacent_probability = f.Number("synth.adjacent_probability", s.adjacent_probability);
  s.snr_db = GetRange(f, "synth.snr_db", s.snr_db);
  s.f0 = GetRange(f, "synth.f0", s.f0);

  ReadTrain(f, "autoencoder", c.autoencoder);
  const long max_frames = f.Integer("autoencoder.max_frames", static_cast<long>(c.ae_max_frames));
  if (max_frames <= 0) Fail(ErrorCode::kConfig, "autoencoder.max_frames must be positive");
  c.ae_max_frames = static_cast<std::size_t>(max_frames);
  ReadTrain(f, "classifier", c.classifier);

  c.hmm.gmm_components = static_cast<int>(f.Integer("hmm.gmm_components", c.hmm.gmm_components));
  c.hmm.max_iterations = static_cast<int>(f.Integer("hmm.max_iterations", c.hmm.max_iterations));
  c.hmm.tolerance = f.Number("hmm.tolerance", c.hmm.tolerance);
  c.hmm.variance_floor = f.Number("hmm.variance_floor", c.hmm.variance_floor);

  c.lm_alpha = f.Number("lm.alpha", c.lm_alpha);

  c.decode.lm_scale = f.Number("decode.lm_scale", c.decode.lm_scale);
  c.decode.insertion_penalty = f.Number("decode.insertion_penalty", c.decode.insertion_penalty);
  c.decode.use_lm = f.Bool("decode.use_lm", c.decode.use_lm);
  c.use_tuned = f.Bool("decode.use_tuned", c.use_tuned);

  c.tune.lm_scales = f.Numbers("tune.lm_scales", c.tune.lm_scales);
  c.tune.insertion_penalties = f.Numbers("tune.insertion_penalties", c.tune.insertion_penalties);

  c.screener.components = static_cast<int>(f.Integer("screener.components", c.screener.components));
  c.screener.max_iterations = static_cast<int>(f.Integer("screener.max_iterations", c.screener.max_iterations));
  c.screen_threshold = f.Number("screener.threshold", c.screen_threshold);
  c.screen_segment_seconds = f.Number("screener.segment_seconds", c.screen_segment_seconds);

  f.RejectUnused();
  c.Validate();
  return c;
}

PipelineConfig LoadPipelineConfig(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path))
    Fail(ErrorCode::kConfig, fmt::format("config file '{}' does not exist", path.string()));
  return ParsePipelineConfig(io::ReadFile(path), path.parent_path(), path.string());
}

}  // namespace sdb
