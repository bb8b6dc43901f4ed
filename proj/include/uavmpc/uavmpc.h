/*
 Copyright 2026 The uavmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef UAVMPC_UAVMPC_H_
#define UAVMPC_UAVMPC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(UAVMPC_BUILDING_LIBRARY)
#define UAVMPC_API __declspec(dllexport)
#else
#define UAVMPC_API __declspec(dllimport)
#endif
#elif defined(UAVMPC_BUILDING_LIBRARY)
#define UAVMPC_API __attribute__((visibility("default")))
#else
#define UAVMPC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uavmpc_status {
  UAVMPC_OK = 0,
  UAVMPC_ERR_INVALID_ARGUMENT = 1,
  UAVMPC_ERR_PARSE = 2,
  UAVMPC_ERR_CONFIG = 3,
  UAVMPC_ERR_IO = 4,
  UAVMPC_ERR_INFEASIBLE = 5,
  UAVMPC_ERR_NUMERICAL = 6,
  UAVMPC_ERR_DOMAIN = 7,
  UAVMPC_ERR_INTERNAL = 8
} uavmpc_status;

/* Scenario configuration. */
typedef struct uavmpc_config uavmpc_config;

/* Output of a run, baseline, sweep or audit: CSV text and a JSON summary. */
typedef struct uavmpc_result uavmpc_result;

typedef struct uavmpc_sweep_spec {
  /* comm_power_max_w, num_antennas, blocklength, rate_min_nats or disturbance_m */
  const char* parameter;
  const double* grid;
  size_t grid_len;
  /* Mission schemes (mpc, offline-mpc, offline-joint), or beamformers
     (bf-proposed, bf-mrt, bf-zf, bf-equal) when fixed_trajectory is set. */
  const char* const* schemes;
  size_t scheme_count;
  const uint64_t* seeds;
  size_t seed_count;
  int fixed_trajectory;
  /* 0 uses the hardware concurrency. */
  int workers;
} uavmpc_sweep_spec;

UAVMPC_API const char* uavmpc_version(void);
/* Short lowercase name of a status, e.g. "config". */
UAVMPC_API const char* uavmpc_status_name(uavmpc_status status);
/* Message of the last failed call on this thread; empty after a success. */
UAVMPC_API const char* uavmpc_last_error(void);

UAVMPC_API uavmpc_status uavmpc_config_new(uavmpc_config** out);
UAVMPC_API uavmpc_status uavmpc_config_load_file(const char* path, uavmpc_config** out);
/* Assigns one `key = value` field; the whole config is re-validated. */
UAVMPC_API uavmpc_status uavmpc_config_set(uavmpc_config* cfg, const char* key,
                                           const char* value);
UAVMPC_API uavmpc_status uavmpc_config_set_seed(uavmpc_config* cfg, uint64_t seed);
UAVMPC_API uavmpc_status uavmpc_config_set_disturbance(uavmpc_config* cfg, double meters);
/* Full `key = value` document; valid until the next call on cfg. */
UAVMPC_API const char* uavmpc_config_text(uavmpc_config* cfg);
UAVMPC_API void uavmpc_config_free(uavmpc_config* cfg);

/* Mission under `scheme` (mpc, offline-mpc or offline-joint). CSV is the
   per-step trace. */
UAVMPC_API uavmpc_status uavmpc_run(const uavmpc_config* cfg, const char* scheme,
                                    uavmpc_result** out);
/* Offline schemes as uavmpc_run; beamformers are evaluated along the
   undisturbed closed-loop trajectory at the configured rate floor. */
UAVMPC_API uavmpc_status uavmpc_baseline(const uavmpc_config* cfg, const char* scheme,
                                         uavmpc_result** out);
UAVMPC_API uavmpc_status uavmpc_sweep(const uavmpc_config* cfg, const uavmpc_sweep_spec* spec,
                                      uavmpc_result** out);
/* Surrogate bound and dispersion concavity audits seeded by the config seed. */
UAVMPC_API uavmpc_status uavmpc_audit(const uavmpc_config* cfg, uavmpc_result** out);

/* Both accessors return "" for a null result. */
UAVMPC_API const char* uavmpc_result_csv(const uavmpc_result* result);
UAVMPC_API const char* uavmpc_result_json(const uavmpc_result* result);
UAVMPC_API void uavmpc_result_free(uavmpc_result* result);

#ifdef __cplusplus
}
#endif

#endif  // UAVMPC_UAVMPC_H_
