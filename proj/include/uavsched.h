/* Copyright 2026 The uavsched Authors
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

/* uavsched C API: joint wake-up schedule / collector trajectory solver.
 *
 * Every function returns UAVS_OK or an error code; uavs_last_error() holds
 * a thread-local message for the most recent failure on the calling
 * thread. Objects are opaque handles owned by the caller and released
 * with their _free function. Scenario handles are immutable; the
 * uavs_scenario_with_* helpers return modified copies for sweeps.
 */

#ifndef UAVSCHED_H
#define UAVSCHED_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UAVS_API __declspec(dllexport)
#else
#define UAVS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uavs_status {
  UAVS_OK = 0,
  UAVS_ERR_ARGUMENT = 1,   /* API misuse (null handle, bad size, ...) */
  UAVS_ERR_IO = 2,         /* missing or unwritable file */
  UAVS_ERR_PARSE = 3,      /* malformed scenario or bundle */
  UAVS_ERR_VALIDATION = 4, /* input violates a model invariant */
  UAVS_ERR_INFEASIBLE = 5, /* demands cannot be met */
  UAVS_ERR_SOLVER = 6,     /* numerical failure */
} uavs_status;

typedef enum uavs_scheme {
  UAVS_SCHEME_OPTIMIZED = 0, /* joint schedule + trajectory descent */
  UAVS_SCHEME_STRAIGHT = 1,  /* constant-speed line, schedule optimized */
  UAVS_SCHEME_STATIC = 2,    /* hover at the sensor centroid */
} uavs_scheme;

typedef struct uavs_scenario uavs_scenario;
typedef struct uavs_solution uavs_solution;

typedef struct uavs_options {
  double kappa;      /* <= 0: scenario default */
  int max_outer;     /* <= 0: scenario default */
  int max_sca;       /* <= 0: scenario default */
  uint64_t seed;     /* 0: scenario default */
  int dump_lp;       /* nonzero: keep final LP text in the solution */
  int keep_iterates; /* nonzero: record inner trajectory iterates */
} uavs_options;

UAVS_API void uavs_options_init(uavs_options* opt);

UAVS_API const char* uavs_status_name(uavs_status status);
UAVS_API const char* uavs_last_error(void);
UAVS_API void uavs_string_free(char* text);

/* ---- scenarios ---------------------------------------------------- */

UAVS_API uavs_status uavs_scenario_load(const char* path, uavs_scenario** out);
UAVS_API uavs_status uavs_scenario_parse(const char* text, uavs_scenario** out);
UAVS_API uavs_status uavs_scenario_save(const uavs_scenario* s, const char* path);
UAVS_API void uavs_scenario_free(uavs_scenario* s);

UAVS_API int uavs_scenario_num_sensors(const uavs_scenario* s);
UAVS_API int uavs_scenario_num_slots(const uavs_scenario* s);
UAVS_API int uavs_scenario_blocks_per_slot(const uavs_scenario* s);
/* newline-separated advisory warnings collected at load; empty if none */
UAVS_API uavs_status uavs_scenario_warnings(const uavs_scenario* s, char** out);

UAVS_API uavs_status uavs_scenario_with_data_bits(const uavs_scenario* s,
                                                  double bits,
                                                  uavs_scenario** out);
UAVS_API uavs_status uavs_scenario_with_outage_eps(const uavs_scenario* s,
                                                   double eps,
                                                   uavs_scenario** out);
UAVS_API uavs_status uavs_scenario_with_horizon(const uavs_scenario* s,
                                                double horizon_s,
                                                uavs_scenario** out);

/* ---- solving ------------------------------------------------------ */

UAVS_API uavs_status uavs_solve(const uavs_scenario* s,
                                const uavs_options* opt, uavs_solution** out);
UAVS_API uavs_status uavs_solve_scheme(const uavs_scenario* s,
                                       const uavs_options* opt,
                                       uavs_scheme scheme,
                                       uavs_solution** out);
UAVS_API void uavs_solution_free(uavs_solution* sol);

UAVS_API double uavs_solution_theta(const uavs_solution* sol);
UAVS_API int uavs_solution_iterations(const uavs_solution* sol);
UAVS_API int uavs_solution_converged(const uavs_solution* sol);

/* trajectory as slot-major (x, y) pairs; len must be >= 2*M */
UAVS_API uavs_status uavs_solution_trajectory(const uavs_solution* sol,
                                              double* xy, size_t len);
/* wake fractions, sensor-major K*M; len must be >= K*M */
UAVS_API uavs_status uavs_solution_schedule(const uavs_solution* sol,
                                            double* fractions, size_t len);
/* fading-block allocation, sensor-major K*M */
UAVS_API uavs_status uavs_solution_blocks(const uavs_solution* sol,
                                          int32_t* blocks, size_t len);

/* JSON artifacts; caller frees with uavs_string_free */
UAVS_API uavs_status uavs_solution_summary_json(const uavs_scenario* s,
                                                const uavs_solution* sol,
                                                char** out);
UAVS_API uavs_status uavs_solution_trace_json(const uavs_solution* sol,
                                              char** out);

/* ---- artifacts ---------------------------------------------------- */

UAVS_API uavs_status uavs_solution_write_bundle(const uavs_scenario* s,
                                                const uavs_solution* sol,
                                                const char* dir);

/* Monte-Carlo check of a stored bundle: draws every allocated fading
 * block (repetitions times), compares against the stored designed rates,
 * writes the JSON report to *report. *passed becomes 1 only if every
 * sensor's outage sits in its binomial band and delivered bits clear the
 * demand threshold. */
UAVS_API uavs_status uavs_verify_bundle(const char* dir, uint64_t seed,
                                        int repetitions, char** report,
                                        int* passed);

/* ---- comparison sweeps -------------------------------------------- */

/* Runs optimized/straight/static over a sweep grid; sweep_var is "S",
 * "eps" or "T" (NULL or empty with grid_len 0 for a single point).
 * Returns the comparison table as CSV text. When artifact_dir is
 * non-NULL, per-point bundles are written under it. */
UAVS_API uavs_status uavs_compare(const uavs_scenario* s,
                                  const uavs_options* opt,
                                  const char* sweep_var, const double* grid,
                                  size_t grid_len, const char* artifact_dir,
                                  int max_workers, char** csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* UAVSCHED_H */
