/* C interface to the temporal-slicing forecasting toolkit.
 *
 * Every object is an opaque handle created and destroyed here. Functions
 * return TSSNET_OK or an error status; tssnet_last_error() carries the
 * matching human-readable message for the calling thread. Out-parameters
 * marked nullable may be NULL when the caller does not want the value.
 */
#ifndef TSSNET_H
#define TSSNET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tssnet_status {
  TSSNET_OK = 0,
  TSSNET_ERR_INVALID_ARGUMENT,
  TSSNET_ERR_INVALID_SHAPE,
  TSSNET_ERR_SHAPE_MISMATCH,
  TSSNET_ERR_OUT_OF_BOUNDS,
  TSSNET_ERR_INVALID_CONFIG,
  TSSNET_ERR_KERNEL_TOO_LARGE,
  TSSNET_ERR_STALE_CACHE,
  TSSNET_ERR_IO,
  TSSNET_ERR_PARSE,
  TSSNET_ERR_EMPTY_INPUT,
  TSSNET_ERR_TOO_SHORT,
  TSSNET_ERR_DEGENERATE_SAMPLE,
  TSSNET_ERR_ALL_DEGENERATE,
  TSSNET_ERR_NON_FINITE_LOSS,
  TSSNET_ERR_VERSION_MISMATCH,
  TSSNET_ERR_CORRUPT_CHECKPOINT,
  TSSNET_ERR_ALL_TRIALS_FAILED,
  TSSNET_ERR_INTERNAL
} tssnet_status;

/* Message for the last failing call on this thread; empty after success. */
const char* tssnet_last_error(void);
const char* tssnet_status_name(tssnet_status status);

/* ---- run configuration ---------------------------------------------- */

typedef struct tssnet_config tssnet_config;

/* Fresh configuration holding the default for every known key; NULL only
 * on allocation failure. */
tssnet_config* tssnet_config_new(void);
void tssnet_config_free(tssnet_config* config);

/* `key = value` lines, '#' comments allowed. Unknown keys are errors. */
tssnet_status tssnet_config_load_file(tssnet_config* config, const char* path);
tssnet_status tssnet_config_set(tssnet_config* config, const char* key,
                                const char* value);
/* Copies the NUL-terminated value into buffer (of buffer_size bytes). */
tssnet_status tssnet_config_get(const tssnet_config* config, const char* key,
                                char* buffer, size_t buffer_size);

/* ---- series ----------------------------------------------------------- */

typedef struct tssnet_series tssnet_series;

/* Loads data.csv when set, otherwise generates the configured synthetic
 * series. */
tssnet_status tssnet_series_open(const tssnet_config* config,
                                 tssnet_series** out_series);
/* Row-major feature x time values. */
tssnet_status tssnet_series_from_values(size_t features, size_t length,
                                        const double* values,
                                        tssnet_series** out_series);
tssnet_status tssnet_series_save_csv(const tssnet_series* series,
                                     const char* path);
tssnet_status tssnet_series_dims(const tssnet_series* series,
                                 size_t* out_features, size_t* out_length);
/* buffer_len must be features * length; row-major feature x time. */
tssnet_status tssnet_series_copy_values(const tssnet_series* series,
                                        double* buffer, size_t buffer_len);
/* out_values must hold max_lag + 1 doubles; out_values[0] is 1. */
tssnet_status tssnet_series_acf(const tssnet_series* series, size_t feature,
                                size_t max_lag, double* out_values);
void tssnet_series_free(tssnet_series* series);

/* ---- models ----------------------------------------------------------- */

typedef struct tssnet_model tssnet_model;

/* Builds the model the `model` key names, initialized for a series with
 * the given feature count. */
tssnet_status tssnet_model_build(const tssnet_config* config, size_t features,
                                 tssnet_model** out_model);
tssnet_status tssnet_model_load(const char* checkpoint_path,
                                tssnet_model** out_model);
tssnet_status tssnet_model_save(tssnet_model* model,
                                const char* checkpoint_path);
tssnet_status tssnet_model_kind(const tssnet_model* model, char* buffer,
                                size_t buffer_size);
tssnet_status tssnet_model_dims(const tssnet_model* model,
                                size_t* out_features, size_t* out_input_length,
                                size_t* out_horizon);
/* Scaled-space forecast: input is row-major features x input_length
 * (input_len doubles must equal that product), output receives features x
 * horizon. */
tssnet_status tssnet_model_predict(const tssnet_model* model,
                                   const double* input, size_t input_len,
                                   double* output, size_t output_len);
void tssnet_model_free(tssnet_model* model);

/* ---- end-to-end drivers ------------------------------------------------
 * Each writes its artifacts into out_dir (which must exist) and reports
 * headline numbers through the nullable out-parameters. File names:
 * series.csv; acf.csv; checkpoint.json + history.csv; report.csv;
 * prediction.csv; featuremap_k<i>.csv/.pgm; trials.csv +
 * best_checkpoint.json; sweep.csv; gradcheck.txt.
 */

tssnet_status tssnet_run_synth(const tssnet_config* config,
                               const char* out_dir);
tssnet_status tssnet_run_acf(const tssnet_config* config, const char* out_dir);
tssnet_status tssnet_run_train(const tssnet_config* config,
                               const char* out_dir,
                               double* out_best_valid_corr,
                               size_t* out_epochs_run);
/* checkpoint_path NULL or empty builds the model fresh from the config;
 * split is "train", "valid" or "test" (NULL or empty means test). */
tssnet_status tssnet_run_evaluate(const tssnet_config* config,
                                  const char* checkpoint_path,
                                  const char* split, const char* out_dir,
                                  double* out_rmse, double* out_corr);
tssnet_status tssnet_run_predict(const tssnet_config* config,
                                 const char* checkpoint_path,
                                 const char* out_dir);
tssnet_status tssnet_run_featuremap(const tssnet_config* config,
                                    const char* checkpoint_path,
                                    const char* out_dir, size_t* out_kernels);
tssnet_status tssnet_run_search(const tssnet_config* config,
                                const char* out_dir, size_t* out_best_trial,
                                double* out_best_corr);
tssnet_status tssnet_run_sweep(const tssnet_config* config,
                               const char* out_dir, size_t* out_rows);
tssnet_status tssnet_run_gradcheck(const tssnet_config* config,
                                   const char* out_dir,
                                   double* out_max_rel_err);

#ifdef __cplusplus
}
#endif

#endif /* TSSNET_H */
