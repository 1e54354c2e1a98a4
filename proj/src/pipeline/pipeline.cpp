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

#include "sdb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "sdb/bundle.hpp"
#include "sdb/config.hpp"
#include "sdb/error.hpp"
#include "sdb/frontend.hpp"
#include "sdb/lm.hpp"
#include "sdb/screen.hpp"
#include "util/binary_io.hpp"
#include "util/log.hpp"

namespace sdb {

namespace fs = std::filesystem;

namespace {

// Stable per-stage seed derived from the run seed.
std::uint64_t StageSeed(std::uint64_t seed, std::string_view stage) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : stage) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (h | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return (z ^ (z >> 31)) & 0x7fffffffffffffffULL;
}

std::string_view RawName(FeatureKind k) {
  switch (k) {
    case FeatureKind::kRateMap:
      return "rm";
    case FeatureKind::kAcf:
      return "acf";
    case FeatureKind::kMfcc:
      return "mfcc";
    default:
      break;
  }
  Fail(ErrorCode::kInvalidArgument, "not a raw feature kind");
}

std::vector<FeatureKind> RawKinds(const std::string& features) {
  if (features == "mfcc") return {FeatureKind::kMfcc};
  if (features == "rm") return {FeatureKind::kRateMap};
  if (features == "acf") return {FeatureKind::kAcf};
  if (features == "rm+acf") return {FeatureKind::kRateMap, FeatureKind::kAcf};
  Fail(ErrorCode::kConfig, fmt::format("unknown feature set '{}'", features));
}

void Require(const fs::path& p, std::string_view what) {
  if (!fs::exists(p))
    Fail(ErrorCode::kPrerequisite, fmt::format("missing {} '{}'", what, p.string()));
}

// Line-oriented metrics log, rewritten by each training run.
class MetricsLog {
 public:
  explicit MetricsLog(const fs::path& path) : path_(path) {}
  void Line(const std::string& s) { text_ += s + "\n"; }
  ~MetricsLog() {
    try {
      io::WriteFile(path_, text_);
    } catch (...) {
    }
  }

 private:
  fs::path path_;
  std::string text_;
};

std::string Num(double v) { return fmt::format("{:.9g}", v); }

}  // namespace

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) { cfg_.Validate(); }

// ---- paths ----

fs::path Pipeline::FeaturePath(FeatureKind raw, const std::string& recording) const {
  return cfg_.work_dir / "features" / std::string(RawName(raw)) / (recording + ".feat");
}
fs::path Pipeline::AutoencoderPath(FeatureKind raw) const {
  return cfg_.work_dir / "models" / fmt::format("ae_{}.model", RawName(raw));
}
fs::path Pipeline::NormPath(FeatureKind raw) const {
  return cfg_.work_dir / "models" / fmt::format("norm_{}.bin", RawName(raw));
}
std::string Pipeline::SystemTag() const { return fmt::format("{}_{}", ToString(cfg_.system), cfg_.features); }
fs::path Pipeline::BundlePath() const { return cfg_.work_dir / "models" / (SystemTag() + ".bundle"); }
fs::path Pipeline::TunePath() const { return cfg_.work_dir / "models" / (SystemTag() + ".tune"); }
fs::path Pipeline::LmPath() const { return cfg_.work_dir / "models" / "lm.bin"; }
fs::path Pipeline::ScreenerPath() const { return cfg_.work_dir / "models" / "screener.bin"; }
fs::path Pipeline::DecodeDir() const {
  return cfg_.work_dir / "decode" / SystemTag() / std::string(ToString(cfg_.split));
}
fs::path Pipeline::ReportPath(const std::string& extension) const {
  return cfg_.work_dir / "reports" / fmt::format("{}_{}.{}", SystemTag(), ToString(cfg_.split), extension);
}
fs::path Pipeline::LogPath(const std::string& stage) const { return cfg_.work_dir / "logs" / (stage + ".log"); }

// ---- corpus access ----

CorpusManifest Pipeline::Manifest() const {
  Require(cfg_.ManifestPath(), "corpus manifest");
  return ReadManifest(cfg_.ManifestPath());
}

std::vector<ManifestEntry> Pipeline::Entries(std::initializer_list<Split> splits) const {
  return Manifest().Select(splits);
}

FrameLabels Pipeline::Reference(const ManifestEntry& e, std::size_t n_frames) const {
  const CorpusManifest m = Manifest();
  const LabelTrack raw = ParseLabels(m.Resolve(e.label_path), LabelScheme::kRaw);
  return LabelsToFrames(MergeClasses(raw), static_cast<int>(n_frames));
}

FeatureMatrix Pipeline::LoadRaw(FeatureKind raw, const ManifestEntry& e) const {
  const fs::path p = FeaturePath(raw, RecordingId(e));
  Require(p, fmt::format("{} features (run `sdb extract`)", RawName(raw)));
  FeatureMatrix f = LoadFeatures(p);
  if (raw == FeatureKind::kRateMap && cfg_.rm_recording_mean_norm) f = SubtractRecordingMean(f);
  return f;
}

FeatureMatrix Pipeline::ModelInput(const ManifestEntry& e) const {
  std::vector<FeatureMatrix> parts;
  for (FeatureKind raw : RawKinds(cfg_.features)) {
    FeatureMatrix f = LoadRaw(raw, e);
    if (raw == FeatureKind::kMfcc) {
      parts.push_back(AddDeltas(f));
      continue;
    }
    const fs::path ae_path = AutoencoderPath(raw);
    Require(ae_path, fmt::format("{} autoencoder (run `sdb train ae`)", RawName(raw)));
    Require(NormPath(raw), fmt::format("{} normaliser (run `sdb train ae`)", RawName(raw)));
    // Small cache: stages call this once per recording.
    static thread_local std::map<std::string, std::pair<BottleneckExtractor, NormStats>> cache;
    const std::string key = ae_path.string() + "|" + std::to_string(fs::last_write_time(ae_path).time_since_epoch().count());
    auto it = cache.find(key);
    if (it == cache.end()) {
      if (cache.size() > 8) cache.clear();
      it = cache.emplace(key, std::make_pair(BottleneckExtractor::FromAutoencoder(LoadModel(ae_path)),
                                             LoadNormStats(NormPath(raw)))).first;
    }
    const auto& [extractor, norm] = it->second;
    parts.push_back(AddDeltas(EncodeBottleneck(extractor, ApplyNorm(f, norm))));
  }
  if (parts.size() == 1) return parts[0];
  return ConcatColumns(parts[0], parts[1], FeatureKind::kCombined);
}

// ---- stages ----

fs::path Pipeline::Synth() {
  const fs::path dir = cfg_.corpus_dir;
  log::Info("synthesising corpus into {}", dir.string());
  CorpusManifest m = SynthCorpus(cfg_.synth, cfg_.seed, dir);
  return dir / "manifest.tsv";
}

void Pipeline::Extract() {
  const CorpusManifest m = Manifest();
  if (m.entries.empty()) Fail(ErrorCode::kInvalidArgument, "manifest has no recordings");
  const FilterbankSpec bank = DesignGammatoneBank();
  for (const auto& e : m.entries) {
    const AudioClip clip = LoadAudio(m.Resolve(e.audio_path));
    for (FeatureKind raw : RawKinds(cfg_.features)) {
      FeatureMatrix f = raw == FeatureKind::kRateMap ? RateMap(clip, bank)
                        : raw == FeatureKind::kAcf   ? AcfFrames(clip)
                                                     : Mfcc(clip);
      SaveFeatures(f, FeaturePath(raw, RecordingId(e)));
    }
    log::Info("extracted {}", RecordingId(e));
  }
}

void Pipeline::TrainAutoencoders() {
  if (cfg_.features == "mfcc")
    Fail(ErrorCode::kConfig, "feature set 'mfcc' has no autoencoder; use rm, acf or rm+acf");
  const auto entries = Entries({Split::kTrain, Split::kDev});
  if (entries.empty()) Fail(ErrorCode::kInvalidArgument, "no training recordings in the manifest");
  for (FeatureKind raw : RawKinds(cfg_.features)) {
    std::vector<FeatureMatrix> feats;
    for (const auto& e : entries) feats.push_back(LoadRaw(raw, e));
    const NormStats norm = FitNorm(feats);
    std::size_t total = 0;
    for (auto& f : feats) {
      f = ApplyNorm(f, norm);
      total += f.rows();
    }
    FeatureMatrix data = StackRows(feats);
    feats.clear();
    const std::size_t stride = (total + cfg_.ae_max_frames - 1) / cfg_.ae_max_frames;
    if (stride > 1) data = Subsample(data, stride);

    const std::string stage = fmt::format("ae_{}", RawName(raw));
    const auto dims = raw == FeatureKind::kRateMap ? RateMapAutoencoderDims() : AcfAutoencoderDims();
    MlpModel model = InitAutoencoder(dims, StageSeed(cfg_.seed, stage + "_init"));
    TrainConfig tc = cfg_.autoencoder;
    tc.objective = Objective::kMse;
    tc.shuffle_seed = StageSeed(cfg_.seed, stage + "_shuffle");
    MetricsLog mlog(LogPath(stage));
    mlog.Line(fmt::format("# stage={} frames={} stride={} params={}", stage, data.rows(), stride, model.ParameterCount()));
    TrainAutoencoder(model, data, tc, [&](int epoch, double loss, double) {
      mlog.Line(fmt::format("epoch={} loss={}", epoch, Num(loss)));
      log::Info("{} epoch {} loss {:.6g}", stage, epoch, loss);
    });
    SaveNormStats(norm, NormPath(raw));
    SaveModel(model, AutoencoderPath(raw));
  }
}

namespace {

struct LabelledSet {
  std::vector<FeatureMatrix> features;
  std::vector<FrameLabels> labels;
};

std::vector<std::vector<EventClass>> EventStrings(const std::vector<FrameLabels>& labels) {
  std::vector<std::vector<EventClass>> out;
  for (const auto& l : labels) out.push_back(EventLabels(FramesToEvents(l)));
  return out;
}

}  // namespace

void Pipeline::TrainTandem() {
  const auto entries = Entries({Split::kTrain, Split::kDev});
  if (entries.empty()) Fail(ErrorCode::kInvalidArgument, "no training recordings in the manifest");
  LabelledSet set;
  for (const auto& e : entries) {
    set.features.push_back(ModelInput(e));
    set.labels.push_back(Reference(e, set.features.back().rows()));
  }
  ModelBundle b;
  b.system = SystemKind::kTandem;
  b.features = cfg_.features;
  b.standardizer = FitStandardizer(set.features);
  for (auto& f : set.features) f = ApplyStandardizer(f, b.standardizer);

  std::array<std::vector<Segment>, kNumClasses> per_class;
  for (std::size_t i = 0; i < set.features.size(); ++i)
    for (const auto& ev : FramesToEvents(set.labels[i]))
      per_class[Index(ev.label)].push_back({&set.features[i], static_cast<std::size_t>(ev.start_frame),
                                            static_cast<std::size_t>(ev.end_frame), 1.0});
  for (std::size_t c = 0; c < kNumClasses; ++c)
    if (per_class[c].empty())
      Fail(ErrorCode::kInvalidArgument, fmt::format("no training events of class '{}'", ToString(ClassAt(c))));
  HmmTrainOptions opts = cfg_.hmm;
  opts.seed = StageSeed(cfg_.seed, "tandem");
  const auto results = sdb::TrainTandem(per_class, opts);
  const std::string stage = fmt::format("tandem_{}", cfg_.features);
  MetricsLog mlog(LogPath(stage));
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    b.hmms[c] = results[c].model;
    for (std::size_t it = 0; it < results[c].log_likelihood.size(); ++it)
      mlog.Line(fmt::format("class={} iteration={} log_likelihood={}", ToString(ClassAt(c)), it + 1,
                            Num(results[c].log_likelihood[it])));
  }
  const auto seqs = EventStrings(set.labels);
  b.lm = TrainBigram(seqs, cfg_.lm_alpha);
  b.priors = EstimatePriors(set.labels);
  for (FeatureKind raw : RawKinds(cfg_.features))
    if (raw != FeatureKind::kMfcc) b.norm_refs.push_back(NormPath(raw).filename().string());
  SaveBundle(b, cfg_.work_dir / "models" / fmt::format("tandem_{}.bundle", cfg_.features));
}

void Pipeline::TrainHybrid() {
  const auto entries = Entries({Split::kTrain, Split::kDev});
  if (entries.empty()) Fail(ErrorCode::kInvalidArgument, "no training recordings in the manifest");
  LabelledSet set;
  for (const auto& e : entries) {
    set.features.push_back(ModelInput(e));
    set.labels.push_back(Reference(e, set.features.back().rows()));
  }
  ModelBundle b;
  b.system = SystemKind::kHybrid;
  b.features = cfg_.features;
  b.standardizer = FitStandardizer(set.features);
  std::vector<EventClass> labels;
  for (std::size_t i = 0; i < set.features.size(); ++i) {
    set.features[i] = ApplyStandardizer(set.features[i], b.standardizer);
    labels.insert(labels.end(), set.labels[i].labels.begin(), set.labels[i].labels.end());
  }
  const FeatureMatrix all = StackRows(set.features);
  b.classifier = InitClassifier(all.cols(), StageSeed(cfg_.seed, "hybrid_init"));
  TrainConfig tc = cfg_.classifier;
  tc.objective = Objective::kCrossEntropy;
  tc.shuffle_seed = StageSeed(cfg_.seed, "hybrid_shuffle");
  {
    MetricsLog mlog(LogPath(fmt::format("hybrid_{}", cfg_.features)));
    TrainClassifier(b.classifier, all, labels, tc, [&](int epoch, double loss, double acc) {
      mlog.Line(fmt::format("epoch={} loss={} accuracy={}", epoch, Num(loss), Num(acc)));
      log::Info("hybrid epoch {} loss {:.6g} accuracy {:.4f}", epoch, loss, acc);
    });
  }
  b.lm = TrainBigram(EventStrings(set.labels), cfg_.lm_alpha);
  b.priors = EstimatePriors(set.labels);
  for (FeatureKind raw : RawKinds(cfg_.features))
    if (raw != FeatureKind::kMfcc) b.norm_refs.push_back(NormPath(raw).filename().string());
  SaveBundle(b, cfg_.work_dir / "models" / fmt::format("hybrid_{}.bundle", cfg_.features));
}

void Pipeline::TrainLm() {
  const CorpusManifest m = Manifest();
  std::vector<LabelTrack> tracks;
  for (const auto& e : m.Select({Split::kTrain, Split::kDev}))
    tracks.push_back(MergeClasses(ParseLabels(m.Resolve(e.label_path), LabelScheme::kRaw)));
  if (tracks.empty()) Fail(ErrorCode::kInvalidArgument, "no training recordings in the manifest");
  SaveBigram(TrainBigram(tracks, cfg_.lm_alpha), LmPath());
}

void Pipeline::TrainScreener() {
  const CorpusManifest m = Manifest();
  std::vector<FeatureMatrix> feats;
  std::vector<FrameLabels> labels;
  for (const auto& e : m.Select({Split::kTrain, Split::kDev})) {
    feats.push_back(Mfcc(LoadAudio(m.Resolve(e.audio_path))));
    labels.push_back(Reference(e, feats.back().rows()));
  }
  if (feats.empty()) Fail(ErrorCode::kInvalidArgument, "no training recordings in the manifest");
  GmmFitOptions opts = cfg_.screener;
  opts.seed = StageSeed(cfg_.seed, "screener");
  SaveScreener(sdb::TrainScreener(feats, labels, opts), ScreenerPath());
}

namespace {

Eigen::MatrixXd Emissions(const ModelBundle& b, const FeatureMatrix& input) {
  const FeatureMatrix x = ApplyStandardizer(input, b.standardizer);
  if (b.system == SystemKind::kTandem) return TandemEmissions(b.hmms, x);
  return HybridEmissions(Posteriors(b.classifier, x), b.priors);
}

ModelBundle LoadChecked(const fs::path& path, const std::string& features) {
  Require(path, "model bundle (run `sdb train tandem` or `sdb train hybrid`)");
  ModelBundle b = LoadBundle(path);
  if (b.features != features)
    Fail(ErrorCode::kConfig,
         fmt::format("bundle '{}' was trained on '{}' features, not '{}'", path.string(), b.features, features));
  return b;
}

}  // namespace

TuneResult Pipeline::Tune() {
  const ModelBundle b = LoadChecked(BundlePath(), cfg_.features);
  const auto entries = Entries({Split::kDev});
  if (entries.empty()) Fail(ErrorCode::kInvalidArgument, "the dev split is empty; nothing to tune on");
  std::vector<DevRecording> dev;
  for (const auto& e : entries) {
    FeatureMatrix x = ModelInput(e);
    DevRecording d;
    d.reference = Reference(e, x.rows());
    d.emissions = Emissions(b, x);
    dev.push_back(std::move(d));
  }
  DecodeConfig base;
  base.mode = cfg_.system;
  base.use_lm = true;
  const TuneResult r = TuneDecode(dev, b.Graph(), cfg_.tune, base);
  io::WriteFile(TunePath(), fmt::format("lm_scale = {}\ninsertion_penalty = {}\n", Num(r.best.lm_scale),
                                        Num(r.best.insertion_penalty)));
  std::string table = "lm_scale\tinsertion_penalty\tevent_error_rate\tf_measure\n";
  for (const auto& p : r.evaluated)
    table += fmt::format("{}\t{}\t{}\t{}\n", Num(p.lm_scale), Num(p.insertion_penalty), Num(p.events.eer),
                         Num(p.frames.f_measure));
  io::WriteFile(cfg_.work_dir / "reports" / (SystemTag() + "_tune.tsv"), table);
  return r;
}

DecodeConfig Pipeline::EffectiveDecodeConfig() const {
  DecodeConfig d = cfg_.decode;
  d.mode = cfg_.system;
  if (cfg_.use_tuned && fs::exists(TunePath())) {
    const ConfigFile t = ConfigFile::Parse(io::ReadFile(TunePath()), TunePath().string());
    d.lm_scale = t.Number("lm_scale", d.lm_scale);
    d.insertion_penalty = t.Number("insertion_penalty", d.insertion_penalty);
  }
  if (cfg_.no_lm) {
    d.use_lm = false;
    d.lm_scale = 0.0;
    d.insertion_penalty = 0.0;
  }
  if (cfg_.lm_scale_override) d.lm_scale = *cfg_.lm_scale_override;
  if (cfg_.insertion_penalty_override) d.insertion_penalty = *cfg_.insertion_penalty_override;
  return d;
}

std::vector<fs::path> Pipeline::Decode() {
  const ModelBundle b = LoadChecked(BundlePath(), cfg_.features);
  const CorpusManifest m = Manifest();
  const auto entries = m.Select({cfg_.split});
  if (entries.empty())
    Fail(ErrorCode::kInvalidArgument, fmt::format("split '{}' has no recordings", ToString(cfg_.split)));
  const DecodeConfig dc = EffectiveDecodeConfig();
  const DecodeGraph graph = b.Graph();
  const fs::path dir = DecodeDir();
  fs::create_directories(dir);
  std::vector<fs::path> written;
  for (const auto& e : entries) {
    const FeatureMatrix x = ModelInput(e);
    const DecodeResult r = Viterbi(Emissions(b, x), graph, dc);
    const AudioClip clip = LoadAudio(m.Resolve(e.audio_path));
    const LabelTrack track = EventsToTrack(ToEvents(r), 0.010, 0.025, clip.duration());
    const fs::path out = dir / (RecordingId(e) + ".tsv");
    WriteLabels(track, out);
    written.push_back(out);
  }
  io::WriteFile(dir / "settings.txt",
                fmt::format("system = {}\nfeatures = {}\nuse_lm = {}\nlm_scale = {}\ninsertion_penalty = {}\n",
                            ToString(cfg_.system), cfg_.features, dc.use_lm, Num(dc.lm_scale),
                            Num(dc.insertion_penalty)));
  return written;
}

EvaluationSummary Pipeline::Evaluate() {
  const CorpusManifest m = Manifest();
  const auto entries = m.Select({cfg_.split});
  if (entries.empty())
    Fail(ErrorCode::kInvalidArgument, fmt::format("split '{}' has no recordings", ToString(cfg_.split)));
  std::vector<EventErrorReport> ev;
  std::vector<FrameEvalReport> fr;
  for (const auto& e : entries) {
    const fs::path hyp_path = DecodeDir() / (RecordingId(e) + ".tsv");
    Require(hyp_path, "decode output (run `sdb decode`)");
    const AudioClip clip = LoadAudio(m.Resolve(e.audio_path));
    const auto n = NumFrames(clip.size());
    const FrameLabels ref = Reference(e, n);
    const FrameLabels hyp = LabelsToFrames(ParseLabels(hyp_path, LabelScheme::kMerged), static_cast<int>(n));
    ev.push_back(EventErrorRate(FramesToEvents(ref), FramesToEvents(hyp)));
    fr.push_back(FrameFMeasure(ref, hyp));
  }
  EvaluationSummary s;
  s.events = Accumulate(std::span<const EventErrorReport>(ev));
  s.frames = Accumulate(std::span<const FrameEvalReport>(fr));
  s.text = fmt::format("system = {}\nfeatures = {}\nsplit = {}\nrecordings = {}\n", ToString(cfg_.system),
                       cfg_.features, ToString(cfg_.split), entries.size()) +
           FormatReport(s.events, s.frames);
  nlohmann::ordered_json j;
  j["system"] = std::string(ToString(cfg_.system));
  j["features"] = cfg_.features;
  j["split"] = std::string(ToString(cfg_.split));
  j["recordings"] = entries.size();
  const nlohmann::ordered_json metrics = nlohmann::ordered_json::parse(ReportJson(s.events, s.frames));
  for (const auto& [k, v] : metrics.items()) j[k] = v;
  s.json = j.dump(2) + "\n";
  io::WriteFile(ReportPath("txt"), s.text);
  io::WriteFile(ReportPath("json"), s.json);
  return s;
}

std::vector<ScreenHit> Pipeline::Screen() {
  Require(ScreenerPath(), "screener model (run `sdb train screener`)");
  const Screener screener = LoadScreener(ScreenerPath());
  const CorpusManifest m = Manifest();
  const auto entries = m.Select({cfg_.split});
  if (entries.empty())
    Fail(ErrorCode::kInvalidArgument, fmt::format("split '{}' has no recordings", ToString(cfg_.split)));
  std::vector<ScreenHit> hits;
  std::string text;
  for (const auto& e : entries) {
    for (const auto& [a, b] : ScreenSegments(LoadAudio(m.Resolve(e.audio_path)), screener, cfg_.screen_threshold,
                                             cfg_.screen_segment_seconds)) {
      hits.push_back({RecordingId(e), a, b});
      text += fmt::format("{}\t{:.3f}\t{:.3f}\n", RecordingId(e), a, b);
    }
  }
  io::WriteFile(cfg_.work_dir / "screen" / fmt::format("{}.tsv", ToString(cfg_.split)), text);
  return hits;
}

std::vector<GradcheckEntry> Pipeline::GradCheck(std::uint64_t seed) const {
  struct Case {
    std::vector<int> dims;
    Objective objective;
    std::size_t max_params;
  };
  const std::vector<Case> cases = {
      {{64, 32, 16, 16, 32, 64}, Objective::kMse, 0},
      {RateMapAutoencoderDims(), Objective::kMse, 0},
      {{320, 128, 64, 32, 16, 16, 32, 64, 128, 320}, Objective::kMse, 400},
      {AcfAutoencoderDims(), Objective::kMse, 400},
      {{48, 96, 96, 96, 4}, Objective::kCrossEntropy, 0},
      {{96, 192, 192, 192, 4}, Objective::kCrossEntropy, 400},
  };
  std::vector<GradcheckEntry> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& c : cases) {
    MlpModel m = c.objective == Objective::kMse ? InitAutoencoder(c.dims, seed)
                                                : InitClassifier(static_cast<std::size_t>(c.dims[0]), seed);
    const Eigen::Index batch = 4;
    Eigen::MatrixXd x(c.dims.front(), batch);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
    Eigen::MatrixXd t = x;
    if (c.objective == Objective::kCrossEntropy) {
      std::vector<EventClass> y;
      for (Eigen::Index i = 0; i < batch; ++i) y.push_back(ClassAt(static_cast<std::size_t>(i) % kNumClasses));
      t = OneHot(y);
    }
    const auto r = GradientCheck(m, x, t, c.objective, c.max_params);
    std::string topo;
    for (int d : c.dims) topo += (topo.empty() ? "" : "-") + std::to_string(d);
    out.push_back({topo, c.objective == Objective::kMse ? "mse" : "cross_entropy", m.ParameterCount(), r.checked,
                   r.max_relative_error});
  }
  return out;
}

}  // namespace sdb
