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

#include "sdb/sdb.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "sdb/corpus.hpp"
#include "sdb/error.hpp"
#include "sdb/frontend.hpp"
#include "sdb/metrics.hpp"
#include "sdb/pipeline.hpp"

struct sdb_pipeline {
  sdb::Pipeline pipeline;
};

struct sdb_clip {
  sdb::AudioClip clip;
};

struct sdb_features {
  sdb::FeatureMatrix matrix;
};

namespace {

thread_local std::string g_last_error;

sdb_status SetError(sdb_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
sdb_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SDB_OK;
  } catch (const sdb::Error& e) {
    return SetError(static_cast<sdb_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return SetError(SDB_ERR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return SetError(SDB_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return SetError(SDB_ERR_INTERNAL, e.what());
  } catch (...) {
    return SetError(SDB_ERR_INTERNAL, "unknown failure");
  }
}

void NotNull(const void* p, const char* what) {
  if (p == nullptr) sdb::Fail(sdb::ErrorCode::kInvalidArgument, fmt::format("{} must not be NULL", what));
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::vector<sdb::EventClass> Classes(const int* codes, size_t n) {
  std::vector<sdb::EventClass> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (codes[i] < 0 || codes[i] >= static_cast<int>(sdb::kNumClasses))
      sdb::Fail(sdb::ErrorCode::kInvalidArgument, fmt::format("class code {} at index {} is out of range", codes[i], i));
    out.push_back(sdb::ClassAt(static_cast<std::size_t>(codes[i])));
  }
  return out;
}

template <typename F>
sdb_status Configure(sdb_pipeline* p, F&& change) {
  return Guard([&] {
    NotNull(p, "pipeline");
    sdb::PipelineConfig cfg = p->pipeline.config();
    change(cfg);
    cfg.Validate();
    p->pipeline.mutable_config() = std::move(cfg);
  });
}

}  // namespace

extern "C" {

const char* sdb_last_error(void) { return g_last_error.c_str(); }

const char* sdb_version(void) { return "1.0.0"; }

const char* sdb_status_name(sdb_status status) {
  switch (status) {
    case SDB_OK:
      return "ok";
    case SDB_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case SDB_ERR_IO:
      return "io";
    case SDB_ERR_FORMAT:
      return "format";
    case SDB_ERR_CONFIG:
      return "config";
    case SDB_ERR_PREREQUISITE:
      return "prerequisite";
    case SDB_ERR_NUMERIC:
      return "numeric";
    case SDB_ERR_VERSION:
      return "version";
    case SDB_ERR_CORRUPT:
      return "corrupt";
    case SDB_ERR_INTERNAL:
      break;
  }
  return "internal";
}

void sdb_string_free(char* s) { std::free(s); }

sdb_status sdb_pipeline_open(const char* config_path, sdb_pipeline** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = nullptr;
    sdb::PipelineConfig cfg =
        config_path == nullptr ? sdb::DefaultPipelineConfig() : sdb::LoadPipelineConfig(config_path);
    *out = new sdb_pipeline{sdb::Pipeline(std::move(cfg))};
  });
}

void sdb_pipeline_free(sdb_pipeline* p) { delete p; }

sdb_status sdb_pipeline_set_seed(sdb_pipeline* p, uint64_t seed) {
  return Configure(p, [&](sdb::PipelineConfig& c) { c.seed = seed; });
}

sdb_status sdb_pipeline_set_features(sdb_pipeline* p, const char* features) {
  return Configure(p, [&](sdb::PipelineConfig& c) {
    NotNull(features, "features");
    if (!sdb::IsFeatureSet(features))
      sdb::Fail(sdb::ErrorCode::kConfig, fmt::format("unknown feature set '{}' (mfcc, rm, acf, rm+acf)", features));
    c.features = features;
  });
}

sdb_status sdb_pipeline_set_system(sdb_pipeline* p, const char* system) {
  return Configure(p, [&](sdb::PipelineConfig& c) {
    NotNull(system, "system");
    c.system = sdb::ParseSystem(system);
  });
}

sdb_status sdb_pipeline_set_split(sdb_pipeline* p, const char* split) {
  return Configure(p, [&](sdb::PipelineConfig& c) {
    NotNull(split, "split");
    c.split = sdb::ParseSplit(split);
  });
}

sdb_status sdb_pipeline_set_lm_scale(sdb_pipeline* p, double lm_scale) {
  return Configure(p, [&](sdb::PipelineConfig& c) { c.lm_scale_override = lm_scale; });
}

sdb_status sdb_pipeline_set_insertion_penalty(sdb_pipeline* p, double penalty) {
  return Configure(p, [&](sdb::PipelineConfig& c) { c.insertion_penalty_override = penalty; });
}

sdb_status sdb_pipeline_set_no_lm(sdb_pipeline* p, int no_lm) {
  return Configure(p, [&](sdb::PipelineConfig& c) { c.no_lm = no_lm != 0; });
}

sdb_status sdb_pipeline_synth(sdb_pipeline* p, char** manifest_path) {
  return Guard([&] {
    NotNull(p, "pipeline");
    const auto path = p->pipeline.Synth();
    if (manifest_path != nullptr) *manifest_path = Dup(path.string());
  });
}

sdb_status sdb_pipeline_extract(sdb_pipeline* p) {
  return Guard([&] {
    NotNull(p, "pipeline");
    p->pipeline.Extract();
  });
}

sdb_status sdb_pipeline_train(sdb_pipeline* p, const char* stage) {
  return Guard([&] {
    NotNull(p, "pipeline");
    NotNull(stage, "stage");
    const std::string s = stage;
    if (s == "ae")
      p->pipeline.TrainAutoencoders();
    else if (s == "tandem")
      p->pipeline.TrainTandem();
    else if (s == "hybrid")
      p->pipeline.TrainHybrid();
    else if (s == "lm")
      p->pipeline.TrainLm();
    else if (s == "screener")
      p->pipeline.TrainScreener();
    else
      sdb::Fail(sdb::ErrorCode::kConfig,
                fmt::format("unknown training stage '{}' (ae, tandem, hybrid, lm, screener)", s));
  });
}

sdb_status sdb_pipeline_tune(sdb_pipeline* p, char** summary) {
  return Guard([&] {
    NotNull(p, "pipeline");
    const sdb::TuneResult r = p->pipeline.Tune();
    if (summary != nullptr)
      *summary = Dup(fmt::format("lm_scale = {:.9g}\ninsertion_penalty = {:.9g}\nevent_error_rate = {:.6f}\n"
                                 "f_measure = {:.6f}\ngrid_points = {}\n",
                                 r.best.lm_scale, r.best.insertion_penalty, r.best.events.eer,
                                 r.best.frames.f_measure, r.evaluated.size()));
  });
}

sdb_status sdb_pipeline_decode(sdb_pipeline* p, size_t* recordings) {
  return Guard([&] {
    NotNull(p, "pipeline");
    const auto written = p->pipeline.Decode();
    if (recordings != nullptr) *recordings = written.size();
  });
}

sdb_status sdb_pipeline_evaluate(sdb_pipeline* p, char** text, char** json) {
  return Guard([&] {
    NotNull(p, "pipeline");
    const sdb::EvaluationSummary s = p->pipeline.Evaluate();
    char* t = text != nullptr ? Dup(s.text) : nullptr;
    try {
      if (json != nullptr) *json = Dup(s.json);
    } catch (...) {
      std::free(t);
      throw;
    }
    if (text != nullptr) *text = t;
  });
}

sdb_status sdb_pipeline_screen(sdb_pipeline* p, char** hits) {
  return Guard([&] {
    NotNull(p, "pipeline");
    std::string out;
    for (const auto& h : p->pipeline.Screen())
      out += fmt::format("{}\t{:.3f}\t{:.3f}\n", h.recording, h.start, h.end);
    if (hits != nullptr) *hits = Dup(out);
  });
}

sdb_status sdb_gradcheck(uint64_t seed, double tolerance, char** report, int* passed) {
  return Guard([&] {
    const sdb::Pipeline pipeline(sdb::DefaultPipelineConfig());
    bool ok = true;
    std::string out;
    for (const auto& e : pipeline.GradCheck(seed)) {
      const bool pass = e.max_relative_error < tolerance;
      ok = ok && pass;
      out += fmt::format("topology={} objective={} parameters={} checked={} max_relative_error={:.3e} {}\n",
                         e.topology, e.objective, e.parameters, e.checked, e.max_relative_error,
                         pass ? "PASS" : "FAIL");
    }
    if (passed != nullptr) *passed = ok ? 1 : 0;
    if (report != nullptr) *report = Dup(out);
  });
}

sdb_status sdb_clip_load(const char* wav_path, sdb_clip** out) {
  return Guard([&] {
    NotNull(wav_path, "wav_path");
    NotNull(out, "out");
    *out = nullptr;
    *out = new sdb_clip{sdb::LoadAudio(wav_path)};
  });
}

sdb_status sdb_clip_from_samples(const double* samples, size_t n, sdb_clip** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = nullptr;
    if (n > 0) NotNull(samples, "samples");
    *out = new sdb_clip{sdb::AudioClip(std::vector<double>(samples, samples + n))};
  });
}

void sdb_clip_free(sdb_clip* clip) { delete clip; }

size_t sdb_clip_num_samples(const sdb_clip* clip) { return clip == nullptr ? 0 : clip->clip.size(); }

sdb_status sdb_features_compute(const sdb_clip* clip, const char* kind, sdb_features** out) {
  return Guard([&] {
    NotNull(clip, "clip");
    NotNull(kind, "kind");
    NotNull(out, "out");
    *out = nullptr;
    const std::string k = kind;
    sdb::FeatureMatrix m;
    if (k == "mfcc")
      m = sdb::Mfcc(clip->clip);
    else if (k == "rm")
      m = sdb::RateMap(clip->clip, sdb::DesignGammatoneBank());
    else if (k == "acf")
      m = sdb::AcfFrames(clip->clip);
    else
      sdb::Fail(sdb::ErrorCode::kInvalidArgument, fmt::format("unknown feature kind '{}' (mfcc, rm, acf)", k));
    *out = new sdb_features{std::move(m)};
  });
}

sdb_status sdb_features_add_deltas(const sdb_features* in, sdb_features** out) {
  return Guard([&] {
    NotNull(in, "in");
    NotNull(out, "out");
    *out = nullptr;
    *out = new sdb_features{sdb::AddDeltas(in->matrix)};
  });
}

void sdb_features_free(sdb_features* f) { delete f; }

size_t sdb_features_rows(const sdb_features* f) { return f == nullptr ? 0 : f->matrix.rows(); }

size_t sdb_features_cols(const sdb_features* f) { return f == nullptr ? 0 : f->matrix.cols(); }

const double* sdb_features_data(const sdb_features* f) { return f == nullptr ? nullptr : f->matrix.data().data(); }

sdb_status sdb_event_error_rate(const int* ref, size_t n_ref, const int* hyp, size_t n_hyp, sdb_event_report* out) {
  return Guard([&] {
    NotNull(out, "out");
    if (n_ref > 0) NotNull(ref, "ref");
    if (n_hyp > 0) NotNull(hyp, "hyp");
    const auto r = Classes(ref, n_ref);
    const auto h = Classes(hyp, n_hyp);
    const sdb::EventErrorReport e = sdb::EventErrorRate(std::span<const sdb::EventClass>(r),
                                                        std::span<const sdb::EventClass>(h));
    *out = {e.n, e.substitutions, e.deletions, e.insertions, e.eer};
  });
}

sdb_status sdb_frame_f_measure(const int* ref, const int* hyp, size_t n, sdb_frame_report* out) {
  return Guard([&] {
    NotNull(out, "out");
    if (n > 0) {
      NotNull(ref, "ref");
      NotNull(hyp, "hyp");
    }
    sdb::FrameLabels r, h;
    r.labels = Classes(ref, n);
    h.labels = Classes(hyp, n);
    const sdb::FrameEvalReport f = sdb::FrameFMeasure(r, h);
    *out = {f.precision, f.recall, f.f_measure};
  });
}

sdb_status sdb_cohens_kappa(const int* a, const int* b, size_t n, double* kappa) {
  return Guard([&] {
    NotNull(kappa, "kappa");
    if (n > 0) {
      NotNull(a, "a");
      NotNull(b, "b");
    }
    *kappa = sdb::CohensKappa(std::span<const int>(a, n), std::span<const int>(b, n)).kappa;
  });
}

}  // extern "C"
