/*
 * Copyright 2026 The fpclab Authors
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

#ifndef FPCLAB_FPCLAB_H
#define FPCLAB_FPCLAB_H

/*
 * C interface to fpclab. Objects are opaque handles owned by the caller and
 * released with the matching *_free function. Every fallible call returns an
 * fpc_status; on failure a description is available from fpc_last_error(),
 * which is per-thread and valid until the next failing call on that thread.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FPCLAB_BUILDING)
#    define FPCLAB_API __declspec(dllexport)
#  else
#    define FPCLAB_API __declspec(dllimport)
#  endif
#else
#  define FPCLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpc_status {
  FPC_OK = 0,
  FPC_ERR_PARAMETER = 1,
  FPC_ERR_VALIDATION = 2,
  FPC_ERR_IO = 3,
  FPC_ERR_FORMAT = 4,
  FPC_ERR_CORRUPT = 5,
  FPC_ERR_PROVENANCE = 6,
  FPC_ERR_PRECONDITION = 7,
  FPC_ERR_CHECK_FAILED = 8,
  FPC_ERR_NULL_ARGUMENT = 9,
  FPC_ERR_INTERNAL = 10
} fpc_status;

typedef struct fpc_population fpc_population;
typedef struct fpc_config fpc_config;
typedef struct fpc_report fpc_report;

typedef struct fpc_truth {
  double mean_mu;
  double var_pop;
  double var_srs;     /* meaningful only when has_var_srs != 0 */
  int has_var_srs;
  uint64_t size_N;
} fpc_truth;

typedef struct fpc_variance_row {
  double f;
  uint64_t n;
  double empirical_var;
  double fpc_var;
  double ratio;       /* meaningful only when has_ratio != 0 */
  int has_ratio;
} fpc_variance_row;

typedef struct fpc_numerical_row {
  const char* precision; /* owned by the report */
  const char* strategy;  /* owned by the report */
  double f;
  double observed_var;
  double max_abs_dev;
  double expected_var;
} fpc_numerical_row;

/* Output selection for fpc_report_write. */
enum {
  FPC_WRITE_CSV = 1u << 0,
  FPC_WRITE_JSON = 1u << 1,
  FPC_WRITE_SVG = 1u << 2,
  FPC_WRITE_ALL = FPC_WRITE_CSV | FPC_WRITE_JSON | FPC_WRITE_SVG
};

/* Which phases fpc_run executes. */
typedef enum fpc_phases {
  FPC_PHASES_ALL = 0,
  FPC_PHASES_SWEEP = 1,
  FPC_PHASES_NUMERICAL = 2
} fpc_phases;

FPCLAB_API const char* fpc_version(void);
FPCLAB_API const char* fpc_last_error(void);
FPCLAB_API const char* fpc_status_name(fpc_status status);

/* ---- populations ---- */

/* spec_json uses the "population" object of the config schema. */
FPCLAB_API fpc_status fpc_population_generate(const char* spec_json, fpc_population** out);
FPCLAB_API fpc_status fpc_population_preset(const char* name, uint64_t size_N, uint64_t seed,
                                            fpc_population** out);
FPCLAB_API fpc_status fpc_population_load(const char* path, fpc_population** out);
FPCLAB_API fpc_status fpc_population_save(const fpc_population* population, const char* path);
FPCLAB_API void fpc_population_free(fpc_population* population);

FPCLAB_API fpc_status fpc_population_truth(const fpc_population* population, fpc_truth* out);
FPCLAB_API uint64_t fpc_population_size(const fpc_population* population);
/* Borrowed view of the values; valid for the lifetime of the handle. */
FPCLAB_API const double* fpc_population_values(const fpc_population* population);
FPCLAB_API uint32_t fpc_population_checksum(const fpc_population* population);
FPCLAB_API const char* fpc_population_kind(const fpc_population* population);

/* ---- numerics ---- */

FPCLAB_API fpc_status fpc_reduce_sum(const double* values, size_t count, const char* strategy,
                                     const char* precision, double* out);
FPCLAB_API fpc_status fpc_reduce_mean(const double* values, size_t count, const char* strategy,
                                      const char* precision, double* out);
FPCLAB_API fpc_status fpc_fpc_variance(double var_srs, uint64_t n, uint64_t N, double* out);

/* ---- experiments ---- */

FPCLAB_API fpc_status fpc_config_default(fpc_config** out);
FPCLAB_API fpc_status fpc_config_parse(const char* json, fpc_config** out);
FPCLAB_API fpc_status fpc_config_load(const char* path, fpc_config** out);
FPCLAB_API fpc_status fpc_config_set_seed(fpc_config* config, uint64_t base_seed);
FPCLAB_API fpc_status fpc_config_set_workers(fpc_config* config, unsigned workers);
FPCLAB_API fpc_status fpc_config_set_output_dir(fpc_config* config, const char* dir);
/* Replaces the population with a saved population file. */
FPCLAB_API fpc_status fpc_config_set_population_file(fpc_config* config, const char* path);
/* Returns the configured output directory; owned by the config. */
FPCLAB_API const char* fpc_config_output_dir(const fpc_config* config);
FPCLAB_API void fpc_config_free(fpc_config* config);

FPCLAB_API fpc_status fpc_run(const fpc_config* config, fpc_phases phases, fpc_report** out);
FPCLAB_API fpc_status fpc_report_load(const char* path, fpc_report** out);
FPCLAB_API fpc_status fpc_report_write(const fpc_report* report, const char* dir, unsigned what);
/* FPC_OK when every invariant holds, FPC_ERR_CHECK_FAILED otherwise; the
   failures are then listed, one per line, in fpc_last_error(). */
FPCLAB_API fpc_status fpc_report_check(const fpc_report* report);

FPCLAB_API size_t fpc_report_table2_size(const fpc_report* report);
FPCLAB_API fpc_status fpc_report_table2_row(const fpc_report* report, size_t i, fpc_variance_row* out);
FPCLAB_API size_t fpc_report_table3_size(const fpc_report* report);
FPCLAB_API fpc_status fpc_report_table3_row(const fpc_report* report, size_t i, fpc_numerical_row* out);
/* Regime label ("classical", ...) for table2 row i; owned by the report. */
FPCLAB_API const char* fpc_report_regime(const fpc_report* report, size_t i);
FPCLAB_API fpc_status fpc_report_numerical_floor(const fpc_report* report, double* out);
/* Per-replicate means of the randomization distribution behind table2 row i. */
FPCLAB_API fpc_status fpc_report_means(const fpc_report* report, size_t i, const double** means,
                                       size_t* count);
FPCLAB_API void fpc_report_free(fpc_report* report);

#ifdef __cplusplus
}
#endif

#endif /* FPCLAB_FPCLAB_H */
