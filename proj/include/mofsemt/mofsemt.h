/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the multi-objective multitask feature selection engine.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a mofs_status;
 * on failure a one-line message is available from mofs_last_error() on the
 * same thread until the next failing call.
 */
#ifndef MOFSEMT_H
#define MOFSEMT_H

#include <stddef.h>
#include <stdint.h>

#if defined(MOFS_BUILDING_LIBRARY)
#define MOFS_API __attribute__((visibility("default")))
#else
#define MOFS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mofs_status {
    MOFS_OK = 0,
    MOFS_ERR_INVALID_ARGUMENT = 1,
    MOFS_ERR_IO = 2,
    MOFS_ERR_PARSE = 3,   /* empty file, malformed row, unparseable cell */
    MOFS_ERR_DATASET = 4, /* well-formed but unusable data, e.g. one class */
    MOFS_ERR_INTERNAL = 5
} mofs_status;

typedef struct mofs_config mofs_config;
typedef struct mofs_dataset mofs_dataset;
typedef struct mofs_report mofs_report;

MOFS_API const char* mofs_version(void);
MOFS_API const char* mofs_last_error(void);
MOFS_API const char* mofs_status_name(mofs_status status);

/* Run configuration. Keys use the CLI flag names without leading dashes:
 * data, label-col, seed, iters, tasks, theta, rtp, stagnation, knn-k,
 * inner-folds, outer-folds, lambda, out, format, removal (on|off),
 * formulations, transfer, fitness, norm-dir, log-base, workers,
 * mutate-literal, per-task-trigger, pool-per-task. */
MOFS_API mofs_status mofs_config_create(mofs_config** out);
MOFS_API void mofs_config_destroy(mofs_config* config);
MOFS_API mofs_status mofs_config_set(mofs_config* config, const char* key, const char* value);
/* Writes the value as text; `size` includes the terminating NUL. */
MOFS_API mofs_status mofs_config_get(const mofs_config* config, const char* key, char* buffer, size_t size);
MOFS_API mofs_status mofs_config_validate(const mofs_config* config);

/* Datasets. label_col is "last", a zero-based column index, or a header name. */
MOFS_API mofs_status mofs_dataset_load_csv(const char* path, const char* label_col, mofs_dataset** out);
MOFS_API mofs_status mofs_dataset_synthetic(size_t n_samples, size_t n_features, size_t n_informative,
    size_t n_classes, double class_shift, uint64_t seed, mofs_dataset** out);
MOFS_API mofs_status mofs_dataset_shape(const mofs_dataset* data, size_t* n_samples, size_t* n_features,
    size_t* n_classes);
/* Planted feature indices of a synthetic dataset; *count receives the total. */
MOFS_API mofs_status mofs_dataset_informative(const mofs_dataset* data, size_t* indices, size_t capacity,
    size_t* count);
MOFS_API mofs_status mofs_dataset_write_csv(const mofs_dataset* data, const char* path);
MOFS_API void mofs_dataset_destroy(mofs_dataset* data);

/* Outer cross-validated run. `data` may be NULL, in which case the
 * configured data path is loaded. */
MOFS_API mofs_status mofs_run(const mofs_config* config, const mofs_dataset* data, mofs_report** out);

MOFS_API mofs_status mofs_report_summary(const mofs_report* report, double* mean_acc, double* best_acc,
    double* mean_features);
MOFS_API size_t mofs_report_fold_count(const mofs_report* report);
/* format: "json" or "csv" */
MOFS_API mofs_status mofs_report_write(const mofs_report* report, const char* path, const char* format);
/* Caller releases *out with mofs_string_free. */
MOFS_API mofs_status mofs_report_to_json(const mofs_report* report, char** out);
MOFS_API mofs_status mofs_report_from_json(const char* text, mofs_report** out);
MOFS_API void mofs_report_destroy(mofs_report* report);
MOFS_API void mofs_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif
