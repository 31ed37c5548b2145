// Copyright 2026 The afcmem Authors
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

#ifndef AFCMEM_AFCMEM_H
#define AFCMEM_AFCMEM_H

/*
 * C interface to the afcmem simulator.
 *
 * Handles are opaque and owned by the caller; release them with the matching
 * *_free function. Every fallible call returns an afcmem_status. On failure,
 * afcmem_last_error() describes the problem for the calling thread and
 * afcmem_last_error_field() names the offending configuration field, if any.
 * Strings returned through `const char **` stay valid until the owning handle
 * is freed or the next call on that handle.
 */

#include <stdint.h>

#if defined(_WIN32)
#define AFCMEM_API __declspec(dllexport)
#else
#define AFCMEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct afcmem_config afcmem_config;
typedef struct afcmem_report afcmem_report;

typedef enum afcmem_status {
  AFCMEM_OK = 0,
  AFCMEM_ERR_CONFIG = 1,   /* invalid or unreadable configuration */
  AFCMEM_ERR_RUNTIME = 2,  /* numerical or I/O failure during a run */
  AFCMEM_ERR_ARGUMENT = 3, /* null handle, unknown key, bad enum value */
} afcmem_status;

typedef enum afcmem_experiment {
  AFCMEM_ECHO = 0,
  AFCMEM_QPT = 1,
  AFCMEM_EFFICIENCY = 2,
  AFCMEM_ORACLE = 3,
  AFCMEM_NULL_PHASE = 4,
  AFCMEM_CALIBRATE = 5,
} afcmem_experiment;

AFCMEM_API const char *afcmem_version(void);
AFCMEM_API const char *afcmem_last_error(void);
AFCMEM_API const char *afcmem_last_error_field(void);

/* Worker count from AFC_MEMSIM_THREADS (1 when unset). */
AFCMEM_API int afcmem_thread_budget(void);

/* `source` is a file path or a preset name. */
AFCMEM_API afcmem_status afcmem_config_load(const char *source,
                                            afcmem_config **out);
AFCMEM_API afcmem_status afcmem_config_parse(const char *yaml_text,
                                             afcmem_config **out);
AFCMEM_API void afcmem_config_free(afcmem_config *config);

AFCMEM_API afcmem_status afcmem_config_set_seed(afcmem_config *config,
                                                uint64_t seed);
AFCMEM_API afcmem_status afcmem_config_set_trials(afcmem_config *config,
                                                  uint64_t trials_per_setting);
AFCMEM_API afcmem_status afcmem_config_seed(const afcmem_config *config,
                                            uint64_t *out);
AFCMEM_API afcmem_status afcmem_config_output_dir(const afcmem_config *config,
                                                  const char **out);
/* Canonical YAML text of the configuration. */
AFCMEM_API afcmem_status afcmem_config_text(afcmem_config *config,
                                            const char **out);
AFCMEM_API afcmem_status afcmem_config_hash(afcmem_config *config,
                                            const char **out);

/* threads <= 0 uses afcmem_thread_budget(). */
AFCMEM_API afcmem_status afcmem_run(const afcmem_config *config,
                                    afcmem_experiment experiment, int threads,
                                    afcmem_report **out);
AFCMEM_API void afcmem_report_free(afcmem_report *report);

AFCMEM_API afcmem_status afcmem_report_json(afcmem_report *report,
                                            const char **out);
/* Table `name` rendered as CSV. */
AFCMEM_API afcmem_status afcmem_report_csv(afcmem_report *report,
                                           const char *name, const char **out);
/* Numeric entry of the results object; `key` may be a dotted path. */
AFCMEM_API afcmem_status afcmem_report_scalar(const afcmem_report *report,
                                              const char *key, double *out);
/* format is "json" or "csv"; the directory is created if needed. */
AFCMEM_API afcmem_status afcmem_report_write(const afcmem_report *report,
                                             const char *dir,
                                             const char *format);

#ifdef __cplusplus
}
#endif

#endif /* AFCMEM_AFCMEM_H */
