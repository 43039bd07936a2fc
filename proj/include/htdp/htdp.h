//
// Copyright 2026 The htdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

/* C interface to the heavy-tailed private SCO library.
 *
 * All functions returning htdp_status set a thread-local error message on
 * failure, readable through htdp_last_error(). Strings returned through
 * char** out-parameters are owned by the caller and must be released with
 * htdp_string_free(). Handles are not thread-safe; distinct handles may be
 * used concurrently. */

#ifndef HTDP_HTDP_H_
#define HTDP_HTDP_H_

#include <stdint.h>

#if defined(_WIN32)
#define HTDP_API __declspec(dllexport)
#else
#define HTDP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  HTDP_OK = 0,
  HTDP_INVALID_ARGUMENT = 1,
  HTDP_FAILED_PRECONDITION = 2,
  HTDP_RESOURCE_EXHAUSTED = 3,
  HTDP_NOT_FOUND = 4,
  HTDP_UNAVAILABLE = 5,
  HTDP_INTERNAL = 6,
  /* A verification suite or sensitivity probe found a violation. */
  HTDP_CHECK_FAILED = 7
} htdp_status;

HTDP_API const char* htdp_version(void);
HTDP_API const char* htdp_last_error(void);
HTDP_API const char* htdp_status_name(htdp_status status);
HTDP_API void htdp_string_free(char* s);

typedef void (*htdp_log_fn)(const char* message, void* user);

/* ---- Configuration --------------------------------------------------- */

typedef struct htdp_config htdp_config;

/* New configuration holding the defaults. */
HTDP_API htdp_status htdp_config_new(htdp_config** out);
HTDP_API void htdp_config_free(htdp_config* config);
/* Merges a flat-key JSON file over the current settings. */
HTDP_API htdp_status htdp_config_merge_file(htdp_config* config,
                                            const char* path);
/* Overrides one key. value is parsed as JSON, or taken as a string. */
HTDP_API htdp_status htdp_config_set(htdp_config* config, const char* key,
                                     const char* value);
/* "key=value" form of htdp_config_set. */
HTDP_API htdp_status htdp_config_set_assignment(htdp_config* config,
                                                const char* assignment);
/* Validated settings as a flat JSON object. */
HTDP_API htdp_status htdp_config_to_json(const htdp_config* config,
                                         char** out_json);

/* ---- Harness ---------------------------------------------------------- */

/* Runs the configured sweep, writing the result CSV to output.path (stdout
 * is not used). rows_out may be null. */
HTDP_API htdp_status htdp_run_experiment(const htdp_config* config,
                                         htdp_log_fn log, void* user,
                                         int64_t* rows_out);

/* Runs the sensitivity probe described by probe.*; writes the per-pair CSV
 * to probe.output when set. Returns HTDP_CHECK_FAILED on any violation or
 * uncertified pair. summary_json may be null. */
HTDP_API htdp_status htdp_probe_sensitivity(const htdp_config* config,
                                            char** summary_json);

/* Generates the instance of the first grid cell and seed.base, writing the
 * dataset CSV to data_path (if non-null) and its description to spec_json
 * (if non-null). */
HTDP_API htdp_status htdp_gen_instance(const htdp_config* config,
                                       const char* data_path,
                                       char** spec_json);

/* Runs the invariant suites whose names start with one of the
 * comma-separated prefixes in only (null or empty: all). Returns
 * HTDP_CHECK_FAILED when any suite fails. report_json may be null. */
HTDP_API htdp_status htdp_verify(const htdp_config* config, const char* only,
                                 htdp_log_fn log, void* user,
                                 char** report_json);

/* ---- Datasets and solvers -------------------------------------------- */

typedef struct htdp_dataset htdp_dataset;

HTDP_API htdp_status htdp_dataset_new(int dim, htdp_dataset** out);
HTDP_API htdp_status htdp_dataset_load_csv(const char* path,
                                           htdp_dataset** out);
HTDP_API void htdp_dataset_free(htdp_dataset* data);
/* Appends the sample (a, b); a has the dataset's dimension. */
HTDP_API htdp_status htdp_dataset_add(htdp_dataset* data, const double* a,
                                      double b);
HTDP_API int htdp_dataset_size(const htdp_dataset* data);
HTDP_API int htdp_dataset_dim(const htdp_dataset* data);

/* Private regularized ERM. options_json keys (all optional):
 *   loss ("linear"|"hinge"|"absolute"), solver ("double_outputpert"|
 *   "direct_extension"|"em_pgm"), epsilon, lambda, radius, w0 (array),
 *   C, k, G_k, G_2, max_iterations, smoothness.
 * The report is a JSON object. */
HTDP_API htdp_status htdp_erm_solve(const htdp_dataset* data,
                                    const char* options_json, uint64_t seed,
                                    char** report_json);

/* Full private SCO pipeline on data. options_json keys (all optional):
 *   loss, solver, epsilon, delta, radius, lambda1, J, C, k, G_k, G_2,
 *   max_iterations, smoothness.
 * The result is a JSON object with output, certified and schedule. */
HTDP_API htdp_status htdp_sco_solve(const htdp_dataset* data,
                                    const char* options_json, uint64_t seed,
                                    char** result_json);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* HTDP_HTDP_H_ */
