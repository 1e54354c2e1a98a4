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

#ifndef SDB_SDB_H_
#define SDB_SDB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SDB_API __declspec(dllexport)
#else
#define SDB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sdb_status {
  SDB_OK = 0,
  SDB_ERR_INVALID_ARGUMENT = 1,
  SDB_ERR_IO = 2,
  SDB_ERR_FORMAT = 3,
  SDB_ERR_CONFIG = 4,
  SDB_ERR_PREREQUISITE = 5,
  SDB_ERR_NUMERIC = 6,
  SDB_ERR_VERSION = 7,
  SDB_ERR_CORRUPT = 8,
  SDB_ERR_INTERNAL = 100
} sdb_status;

/* Event classes in the merged scheme. */
enum { SDB_SNORE = 0, SDB_BREATH = 1, SDB_OTHER = 2, SDB_SILENCE = 3 };

/* Message of the last failed call on this thread; empty after success. */
SDB_API const char* sdb_last_error(void);
SDB_API const char* sdb_version(void);
SDB_API const char* sdb_status_name(sdb_status status);

/* Strings returned through char** outputs are owned by the caller. */
SDB_API void sdb_string_free(char* s);

/* ---- pipeline ---- */

typedef struct sdb_pipeline sdb_pipeline;

/* NULL config_path selects the built-in defaults. */
SDB_API sdb_status sdb_pipeline_open(const char* config_path, sdb_pipeline** out);
SDB_API void sdb_pipeline_free(sdb_pipeline* p);

SDB_API sdb_status sdb_pipeline_set_seed(sdb_pipeline* p, uint64_t seed);
/* "mfcc", "rm", "acf" or "rm+acf". */
SDB_API sdb_status sdb_pipeline_set_features(sdb_pipeline* p, const char* features);
/* "tandem" or "hybrid". */
SDB_API sdb_status sdb_pipeline_set_system(sdb_pipeline* p, const char* system);
/* "train", "dev" or "test". */
SDB_API sdb_status sdb_pipeline_set_split(sdb_pipeline* p, const char* split);
SDB_API sdb_status sdb_pipeline_set_lm_scale(sdb_pipeline* p, double lm_scale);
SDB_API sdb_status sdb_pipeline_set_insertion_penalty(sdb_pipeline* p, double penalty);
SDB_API sdb_status sdb_pipeline_set_no_lm(sdb_pipeline* p, int no_lm);

SDB_API sdb_status sdb_pipeline_synth(sdb_pipeline* p, char** manifest_path);
SDB_API sdb_status sdb_pipeline_extract(sdb_pipeline* p);
/* stage: "ae", "tandem", "hybrid", "lm" or "screener". */
SDB_API sdb_status sdb_pipeline_train(sdb_pipeline* p, const char* stage);
/* Writes the chosen setting and returns a `key = value` summary. */
SDB_API sdb_status sdb_pipeline_tune(sdb_pipeline* p, char** summary);
SDB_API sdb_status sdb_pipeline_decode(sdb_pipeline* p, size_t* recordings);
SDB_API sdb_status sdb_pipeline_evaluate(sdb_pipeline* p, char** text, char** json);
/* One `recording<TAB>start<TAB>end` line per flagged segment. */
SDB_API sdb_status sdb_pipeline_screen(sdb_pipeline* p, char** hits);

/* Runs the finite-difference check on the built-in topologies. *passed is 1
   when every maximum relative error is below tolerance. */
SDB_API sdb_status sdb_gradcheck(uint64_t seed, double tolerance, char** report, int* passed);

/* ---- audio and features ---- */

typedef struct sdb_clip sdb_clip;
typedef struct sdb_features sdb_features;

SDB_API sdb_status sdb_clip_load(const char* wav_path, sdb_clip** out);
SDB_API sdb_status sdb_clip_from_samples(const double* samples, size_t n, sdb_clip** out);
SDB_API void sdb_clip_free(sdb_clip* clip);
SDB_API size_t sdb_clip_num_samples(const sdb_clip* clip);

/* kind: "mfcc", "rm" or "acf". */
SDB_API sdb_status sdb_features_compute(const sdb_clip* clip, const char* kind, sdb_features** out);
SDB_API sdb_status sdb_features_add_deltas(const sdb_features* in, sdb_features** out);
SDB_API void sdb_features_free(sdb_features* f);
SDB_API size_t sdb_features_rows(const sdb_features* f);
SDB_API size_t sdb_features_cols(const sdb_features* f);
/* Row-major, rows * cols values, valid until sdb_features_free. */
SDB_API const double* sdb_features_data(const sdb_features* f);

/* ---- metrics ---- */

typedef struct sdb_event_report {
  int reference_events;
  int substitutions;
  int deletions;
  int insertions;
  double event_error_rate;
} sdb_event_report;

typedef struct sdb_frame_report {
  double precision;
  double recall;
  double f_measure;
} sdb_frame_report;

/* Label sequences use the SDB_* class codes. */
SDB_API sdb_status sdb_event_error_rate(const int* ref, size_t n_ref, const int* hyp, size_t n_hyp,
                                        sdb_event_report* out);
/* Snore-class precision, recall and F-measure over aligned frame labels. */
SDB_API sdb_status sdb_frame_f_measure(const int* ref, const int* hyp, size_t n, sdb_frame_report* out);
SDB_API sdb_status sdb_cohens_kappa(const int* a, const int* b, size_t n, double* kappa);

#ifdef __cplusplus
}
#endif

#endif  /* SDB_SDB_H_ */
