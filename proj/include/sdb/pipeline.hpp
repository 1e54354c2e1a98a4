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

#ifndef SDB_PIPELINE_HPP_
#define SDB_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sdb/corpus.hpp"
#include "sdb/decoder.hpp"
#include "sdb/gmm.hpp"
#include "sdb/hmm.hpp"
#include "sdb/metrics.hpp"
#include "sdb/neural.hpp"
#include "sdb/synth.hpp"
#include "sdb/tune.hpp"

namespace sdb {

// Everything a pipeline run needs. Relative paths resolve against the
// directory of the config file.
struct PipelineConfig {
  std::filesystem::path corpus_dir = "corpus";
  std::filesystem::path manifest;  // empty: corpus_dir/manifest.tsv
  std::filesystem::path work_dir = "work";
  std::uint64_t seed = 1;
  std::string features = "rm+acf";  // mfcc | rm | acf | rm+acf
  bool rm_recording_mean_norm = true;  // subtract each recording's mean log rate map
  SystemKind system = SystemKind::kTandem;
  Split split = Split::kTest;

  SynthConfig synth;
  TrainConfig autoencoder;
  std::size_t ae_max_frames = 20000;  // training frames per autoencoder, evenly strided
  TrainConfig classifier;
  HmmTrainOptions hmm;
  double lm_alpha = 1.0;
  DecodeConfig decode;
  bool use_tuned = true;  // decode with the values written by `tune` when present
  TuneGrid tune;
  GmmFitOptions screener;
  double screen_threshold = 0.20;
  double screen_segment_seconds = 120.0;

  // Command-line overrides; they win over the file and the tuned values.
  std::optional<double> lm_scale_override;
  std::optional<double> insertion_penalty_override;
  bool no_lm = false;

  std::filesystem::path ManifestPath() const;
  // Throws kConfig.
  void Validate() const;
};

PipelineConfig DefaultPipelineConfig();
// Throws kConfig on syntax errors, unknown keys and invalid values.
PipelineConfig LoadPipelineConfig(const std::filesystem::path& path);
PipelineConfig ParsePipelineConfig(const std::string& text, const std::filesystem::path& base_dir,
                                   const std::string& origin = "config");

bool IsFeatureSet(const std::string& name);
Split ParseSplit(const std::string& name);
SystemKind ParseSystem(const std::string& name);

struct EvaluationSummary {
  EventErrorReport events;
  FrameEvalReport frames;
  std::string text;  // key = value report
  std::string json;
};

struct ScreenHit {
  std::string recording;
  double start = 0.0;
  double end = 0.0;
};

struct GradcheckEntry {
  std::string topology;
  std::string objective;
  std::size_t parameters = 0;
  std::size_t checked = 0;
  double max_relative_error = 0.0;
};

// Stage runner. Every stage reads its inputs from disk and writes its outputs
// under the work directory, so stages can run in separate processes.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg);
  const PipelineConfig& config() const { return cfg_; }
  PipelineConfig& mutable_config() { return cfg_; }

  std::filesystem::path Synth();
  void Extract();
  void TrainAutoencoders();
  void TrainTandem();
  void TrainHybrid();
  void TrainLm();
  void TrainScreener();
  TuneResult Tune();
  // Writes one event TSV per recording of the configured split.
  std::vector<std::filesystem::path> Decode();
  EvaluationSummary Evaluate();
  std::vector<ScreenHit> Screen();
  std::vector<GradcheckEntry> GradCheck(std::uint64_t seed) const;

  // Artifact locations.
  std::filesystem::path FeaturePath(FeatureKind raw, const std::string& recording) const;
  std::filesystem::path AutoencoderPath(FeatureKind raw) const;
  std::filesystem::path NormPath(FeatureKind raw) const;
  std::filesystem::path BundlePath() const;
  std::filesystem::path TunePath() const;
  std::filesystem::path LmPath() const;
  std::filesystem::path ScreenerPath() const;
  std::filesystem::path DecodeDir() const;
  std::filesystem::path ReportPath(const std::string& extension) const;
  std::filesystem::path LogPath(const std::string& stage) const;

  // Decoder settings after applying tuned values and overrides.
  DecodeConfig EffectiveDecodeConfig() const;

 private:
  CorpusManifest Manifest() const;
  std::vector<ManifestEntry> Entries(std::initializer_list<Split> splits) const;
  FrameLabels Reference(const ManifestEntry& e, std::size_t n_frames) const;
  FeatureMatrix LoadRaw(FeatureKind raw, const ManifestEntry& e) const;
  // Features fed to the acoustic model, before standardisation.
  FeatureMatrix ModelInput(const ManifestEntry& e) const;
  std::string SystemTag() const;

  PipelineConfig cfg_;
};

}  // namespace sdb

#endif  // SDB_PIPELINE_HPP_
