/*
 * Copyright 2026 The ddib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DDIB_DDIB_H_
#define DDIB_DDIB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(DDIB_BUILDING_LIBRARY)
#define DDIB_API __attribute__((visibility("default")))
#else
#define DDIB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every call that can fail returns one; the message of the
 * most recent failure on the calling thread is available from
 * ddib_last_error(). */
typedef enum ddib_status {
  DDIB_OK = 0,
  DDIB_ERR_INVALID_ARGUMENT = 1,
  DDIB_ERR_INVALID_BAND = 2,
  DDIB_ERR_TOO_SHORT = 3,
  DDIB_ERR_EMPTY_RECORDING = 4,
  DDIB_ERR_CALIBRATION = 5,
  DDIB_ERR_DEGENERATE_STATS = 6,
  DDIB_ERR_SCHEDULE = 7,
  DDIB_ERR_CONFIG = 8,
  DDIB_ERR_NUMERIC = 9,
  DDIB_ERR_SOLVER_DIVERGENCE = 10,
  DDIB_ERR_USAGE = 11,
  DDIB_ERR_IO = 12,
  DDIB_ERR_FORMAT = 13,
  DDIB_ERR_DEPENDENCY = 14,
  DDIB_ERR_VERIFICATION = 15,
  DDIB_ERR_INTERNAL = 99
} ddib_status;

typedef struct ddib_denoiser ddib_denoiser;
typedef struct ddib_trace_set ddib_trace_set;
typedef struct ddib_verify_report ddib_verify_report;

DDIB_API const char* ddib_version(void);
DDIB_API const char* ddib_status_name(ddib_status status);
DDIB_API const char* ddib_last_error(void);

/* 0 quiet, 1 info, 2 debug. */
DDIB_API void ddib_set_verbosity(int level);
/* Worker threads for the linear-algebra backend. The DDIB_NUM_THREADS
 * environment variable sets the initial value. */
DDIB_API ddib_status ddib_set_num_threads(int n);

/* Strings returned through char** out-parameters are owned by the caller. */
DDIB_API void ddib_string_free(char* s);

/* ---- pipeline stages ---- */

/* Config files are INI with [run] [synth] [preprocess] [edm] [model] [train]
 * [bridge] sections. NULL selects the desk preset. Overrides are
 * "section.key=value" strings. */

DDIB_API ddib_status ddib_synth(const char* config_path, const char* const* overrides, size_t n_overrides,
                                const char* out_dir);

typedef struct ddib_preprocess_options {
  const char* in_dir;
  const char* out_dir;
  const char* modality; /* "eeg" or "fmeg" */
  double nleo_multiplier;
  uint64_t seed;
  const char* config_path; /* optional; NULL for defaults */
} ddib_preprocess_options;

typedef struct ddib_preprocess_summary {
  size_t recordings;
  size_t train_segments;
  size_t test_segments;
  int has_detection;
  double precision;
  double recall;
  double f1;
} ddib_preprocess_summary;

DDIB_API ddib_status ddib_preprocess(const ddib_preprocess_options* opts, ddib_preprocess_summary* summary);

typedef struct ddib_train_options {
  const char* data_dir;
  const char* modality;
  uint64_t iterations;
  size_t batch;
  uint64_t seed;
  const char* out_path;
  const char* config_path; /* optional: model, edm and optimizer settings */
  const char* const* overrides;
  size_t n_overrides;
} ddib_train_options;

typedef struct ddib_train_summary {
  uint64_t iterations;
  double initial_loss; /* mean of the first 100 iterations */
  double final_loss;   /* mean of the last 100 iterations */
  double seconds;
} ddib_train_summary;

DDIB_API ddib_status ddib_train(const ddib_train_options* opts, ddib_train_summary* summary);

typedef struct ddib_translate_options {
  const char* src_checkpoint;
  const char* tgt_checkpoint;
  const char* data_dir;
  const char* preset; /* "paper-heun", "paper-ddib" or NULL to use solver/steps */
  const char* solver; /* "heun" or "euler" */
  size_t steps;
  int cycle;
  size_t max_segments; /* 0 keeps all */
  const char* out_dir;
} ddib_translate_options;

/* traces may be NULL. */
DDIB_API ddib_status ddib_translate(const ddib_translate_options* opts, ddib_trace_set** traces);

/* Writes table1.tsv, bands.tsv, fig_*.tsv, metrics.json and summary.txt.
 * summary may be NULL. */
DDIB_API ddib_status ddib_evaluate(const char* traces_dir, const char* out_dir, char** summary);

/* Runs the configured pipeline; manifest_json may be NULL. */
DDIB_API ddib_status ddib_run(const char* config_path, const char* const* overrides, size_t n_overrides,
                              char** manifest_json);

/* Canonical INI text of a config after presets and overrides. */
DDIB_API ddib_status ddib_config_dump(const char* config_path, const char* const* overrides, size_t n_overrides,
                                      char** ini);

/* ---- denoisers ---- */

DDIB_API ddib_status ddib_denoiser_load(const char* checkpoint, ddib_denoiser** out);
/* Isotropic Gaussian mixture with scalar means; std 0 gives a point mass.
 * dim 0 accepts any row length. */
DDIB_API ddib_status ddib_denoiser_mixture(size_t n_components, const double* weights, const double* means,
                                           const double* stds, size_t dim, ddib_denoiser** out);
DDIB_API void ddib_denoiser_free(ddib_denoiser* d);
DDIB_API size_t ddib_denoiser_dim(const ddib_denoiser* d);
/* Number of denoise calls made through this handle, including those made by
 * solvers. */
DDIB_API uint64_t ddib_denoiser_calls(const ddib_denoiser* d);
DDIB_API ddib_status ddib_denoiser_denoise(const ddib_denoiser* d, const double* x, size_t batch, size_t len,
                                           double sigma, double* out);

/* ---- in-memory translation ---- */

typedef enum ddib_trace_field {
  DDIB_TRACE_SOURCE = 0,
  DDIB_TRACE_LATENT = 1,
  DDIB_TRACE_TRANSLATED = 2,
  DDIB_TRACE_RECONSTRUCTED = 3,
  DDIB_TRACE_LATENT2 = 4
} ddib_trace_field;

typedef struct ddib_nfe {
  size_t forward;
  size_t reverse;
  size_t back_forward;
  size_t back_reverse;
  size_t total;
} ddib_nfe;

/* x holds batch rows of len samples. solver is "heun", "euler", or a preset
 * name, in which case steps is ignored. */
DDIB_API ddib_status ddib_translate_rows(const ddib_denoiser* src, const ddib_denoiser* tgt, const double* x,
                                         size_t batch, size_t len, const char* solver, size_t steps, int cycle,
                                         ddib_trace_set** out);

DDIB_API size_t ddib_trace_set_count(const ddib_trace_set* t);
DDIB_API size_t ddib_trace_set_length(const ddib_trace_set* t);
DDIB_API ddib_status ddib_trace_set_nfe(const ddib_trace_set* t, size_t index, ddib_nfe* nfe);
/* Copies one row of a field into out (length ddib_trace_set_length). */
DDIB_API ddib_status ddib_trace_set_row(const ddib_trace_set* t, size_t index, ddib_trace_field field, double* out);
DDIB_API void ddib_trace_set_free(ddib_trace_set* t);

/* ---- oracle verification ---- */

/* Returns DDIB_ERR_VERIFICATION when any property fails; the report is
 * filled either way. */
DDIB_API ddib_status ddib_verify_oracles(ddib_verify_report** out);
DDIB_API size_t ddib_verify_report_count(const ddib_verify_report* r);
DDIB_API const char* ddib_verify_report_name(const ddib_verify_report* r, size_t i);
DDIB_API int ddib_verify_report_passed(const ddib_verify_report* r, size_t i);
DDIB_API const char* ddib_verify_report_measured(const ddib_verify_report* r, size_t i);
DDIB_API void ddib_verify_report_free(ddib_verify_report* r);

#ifdef __cplusplus
}
#endif

#endif /* DDIB_DDIB_H_ */
