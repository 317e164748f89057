/*
 * Copyright 2026 The mfchain Authors
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

/*
 * C interface of libmfc: steady-state transport of a dephased, boundary
 * driven free-fermion chain.
 *
 * Every object is an opaque handle created by a *_run / *_create function and
 * released by the matching *_destroy. Functions return mfc_status; on failure
 * mfc_last_error() holds a message for the calling thread. Strings returned
 * through `char** out` are heap allocated and must be released with
 * mfc_string_free().
 */

#ifndef MFC_MFC_H
#define MFC_MFC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MFC_API __declspec(dllexport)
#else
#define MFC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mfc_status {
  MFC_OK = 0,
  MFC_ERR_INVALID_ARGUMENT = 1,
  MFC_ERR_CONFIG = 2,
  MFC_ERR_SIZE_LIMIT = 3,
  MFC_ERR_DEGENERATE = 4,
  MFC_ERR_UNDEFINED_DIFFUSION = 5,
  MFC_ERR_SOLVER = 6,
  MFC_ERR_INTEGRATION = 7,
  MFC_ERR_HERMITICITY = 8,
  MFC_ERR_INSUFFICIENT_POINTS = 9,
  MFC_ERR_NONUNIFORM_CURRENT = 10,
  MFC_ERR_IO = 11,
  MFC_ERR_VALIDATION = 12,
  MFC_ERR_INTERNAL = 99
} mfc_status;

typedef enum mfc_engine { MFC_ENGINE_EXACT = 0, MFC_ENGINE_COVARIANCE = 1 } mfc_engine;

/* One Fick's-law diffusion estimate. */
typedef struct mfc_estimate {
  double gamma;
  double d_value;
  double j12;
  double n1;
  double n_last;
  int n_sites;
  mfc_engine engine;
  double residual;
  double uniformity_spread;
} mfc_estimate;

typedef struct mfc_fit_values {
  double slope;
  double slope_stderr;
  double intercept;
  double r_squared;
  size_t n_points;
  double prefactor_mean;
  double prefactor_rel_spread;
} mfc_fit_values;

typedef struct mfc_observable_estimate {
  const char* name; /* owned by the result handle */
  double mean;
  double std_error;
  double lindblad;
  double z_score;
} mfc_observable_estimate;

typedef struct mfc_config mfc_config;
typedef struct mfc_steady_result mfc_steady_result;
typedef struct mfc_sweep_result mfc_sweep_result;
typedef struct mfc_fit_result mfc_fit_result;
typedef struct mfc_validation_result mfc_validation_result;
typedef struct mfc_trajectory_result mfc_trajectory_result;

MFC_API const char* mfc_version(void);
MFC_API const char* mfc_last_error(void);
MFC_API const char* mfc_status_name(mfc_status status);
MFC_API void mfc_string_free(char* s);

/* Configuration. Keys and values follow the config-file format. */
MFC_API mfc_status mfc_config_create(mfc_config** out);
MFC_API void mfc_config_destroy(mfc_config* config);
MFC_API mfc_status mfc_config_load(mfc_config* config, const char* path);
MFC_API mfc_status mfc_config_parse(mfc_config* config, const char* text);
MFC_API mfc_status mfc_config_set(mfc_config* config, const char* key, const char* value);
MFC_API mfc_status mfc_config_validate(const mfc_config* config);
/* kind is "csv", "report" or "svg"; returns "" when unset. */
MFC_API const char* mfc_config_output_path(const mfc_config* config, const char* kind);

/* Single-gamma steady state (engine exact, covariance or both). */
MFC_API mfc_status mfc_steady_run(const mfc_config* config, mfc_steady_result** out);
MFC_API void mfc_steady_destroy(mfc_steady_result* result);
MFC_API size_t mfc_steady_count(const mfc_steady_result* result);
MFC_API mfc_status mfc_steady_estimate(const mfc_steady_result* result, size_t index, mfc_estimate* out);
/* Copies up to `len` values; returns the number available. */
MFC_API size_t mfc_steady_densities(const mfc_steady_result* result, size_t index, double* buf, size_t len);
MFC_API size_t mfc_steady_currents(const mfc_steady_result* result, size_t index, double* buf, size_t len);
MFC_API mfc_status mfc_steady_csv(const mfc_steady_result* result, char** out);
MFC_API mfc_status mfc_steady_summary(const mfc_steady_result* result, char** out);

/* Gamma sweep over the configured list. Per-point failures are kept. */
MFC_API mfc_status mfc_sweep_run(const mfc_config* config, mfc_sweep_result** out);
MFC_API mfc_status mfc_sweep_from_csv(const char* csv_text, mfc_sweep_result** out);
MFC_API void mfc_sweep_destroy(mfc_sweep_result* result);
MFC_API size_t mfc_sweep_size(const mfc_sweep_result* result);
/* *ok is set to 1 for a successful point, 0 for a recorded failure. */
MFC_API mfc_status mfc_sweep_point(const mfc_sweep_result* result, size_t index, mfc_estimate* out, int* ok);
MFC_API mfc_status mfc_sweep_csv(const mfc_sweep_result* result, char** out);

/* Log-log fit of the successful points (covariance rows when present). */
MFC_API mfc_status mfc_fit_run(const mfc_sweep_result* sweep, mfc_fit_result** out);
MFC_API void mfc_fit_destroy(mfc_fit_result* fit);
MFC_API mfc_status mfc_fit_values_get(const mfc_fit_result* fit, mfc_fit_values* out);
MFC_API mfc_status mfc_fit_report(const mfc_fit_result* fit, char** out);
MFC_API mfc_status mfc_fit_svg(const mfc_fit_result* fit, char** out);

MFC_API mfc_status mfc_validate_run(const mfc_config* config, mfc_validation_result** out);
MFC_API void mfc_validation_destroy(mfc_validation_result* result);
MFC_API int mfc_validation_passed(const mfc_validation_result* result);
MFC_API mfc_status mfc_validation_report(const mfc_validation_result* result, char** out);

MFC_API mfc_status mfc_trajectories_run(const mfc_config* config, mfc_trajectory_result** out);
MFC_API void mfc_trajectory_destroy(mfc_trajectory_result* result);
MFC_API size_t mfc_trajectory_count(const mfc_trajectory_result* result);
MFC_API mfc_status mfc_trajectory_observable(const mfc_trajectory_result* result, size_t index,
                                             mfc_observable_estimate* out);
MFC_API mfc_status mfc_trajectory_report(const mfc_trajectory_result* result, char** out);

/* Closed-form predictions (e = hbar = 1). */
MFC_API mfc_status mfc_modified_diffusion(double v_f, int dim, double gamma, double* out);
MFC_API mfc_status mfc_drude_conductivity(double v_f, double nu, int dim, double gamma, double* out);
/* out = {Re d12, Im d12, Re d21, Im d21} */
MFC_API mfc_status mfc_diffuson(double k_sq, double eps, double v_f, double nu, int dim, double gamma, double out[4]);

#ifdef __cplusplus
}
#endif

#endif /* MFC_MFC_H */
