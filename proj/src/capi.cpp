#include "tssnet/tssnet.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>

#include "tssnet/errors.hpp"
#include "tssnet/pipeline.hpp"
#include "tssnet/training.hpp"

struct tssnet_config {
  tssnet::RunConfig config;
};

struct tssnet_series {
  tssnet::SeriesMatrix series;
};

struct tssnet_model {
  std::unique_ptr<tssnet::Model> model;
  std::optional<tssnet::ScalerRecord> scaler;
};

namespace {

thread_local std::string g_last_error;

tssnet_status status_from(tssnet::ErrorCode code) {
  using tssnet::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return TSSNET_ERR_INVALID_ARGUMENT;
    case ErrorCode::invalid_shape: return TSSNET_ERR_INVALID_SHAPE;
    case ErrorCode::shape_mismatch: return TSSNET_ERR_SHAPE_MISMATCH;
    case ErrorCode::out_of_bounds: return TSSNET_ERR_OUT_OF_BOUNDS;
    case ErrorCode::invalid_config: return TSSNET_ERR_INVALID_CONFIG;
    case ErrorCode::kernel_too_large: return TSSNET_ERR_KERNEL_TOO_LARGE;
    case ErrorCode::stale_cache: return TSSNET_ERR_STALE_CACHE;
    case ErrorCode::io: return TSSNET_ERR_IO;
    case ErrorCode::parse: return TSSNET_ERR_PARSE;
    case ErrorCode::empty_input: return TSSNET_ERR_EMPTY_INPUT;
    case ErrorCode::too_short: return TSSNET_ERR_TOO_SHORT;
    case ErrorCode::degenerate_sample: return TSSNET_ERR_DEGENERATE_SAMPLE;
    case ErrorCode::all_degenerate: return TSSNET_ERR_ALL_DEGENERATE;
    case ErrorCode::non_finite_loss: return TSSNET_ERR_NON_FINITE_LOSS;
    case ErrorCode::version_mismatch: return TSSNET_ERR_VERSION_MISMATCH;
    case ErrorCode::corrupt_checkpoint: return TSSNET_ERR_CORRUPT_CHECKPOINT;
    case ErrorCode::all_trials_failed: return TSSNET_ERR_ALL_TRIALS_FAILED;
  }
  return TSSNET_ERR_INTERNAL;
}

template <typename Fn>
tssnet_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TSSNET_OK;
  } catch (const tssnet::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TSSNET_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return TSSNET_ERR_INTERNAL;
  }
}

tssnet_status fail_argument(const char* message) {
  g_last_error = message;
  return TSSNET_ERR_INVALID_ARGUMENT;
}

void copy_text(const std::string& text, char* buffer, size_t buffer_size) {
  if (buffer == nullptr || buffer_size == 0) {
    throw tssnet::InvalidArgument("output buffer is null or empty");
  }
  if (text.size() + 1 > buffer_size) {
    throw tssnet::InvalidArgument(
        "output buffer too small; need " + std::to_string(text.size() + 1) +
        " bytes, got " + std::to_string(buffer_size));
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
}

std::string text_or_empty(const char* text) {
  return text == nullptr ? std::string() : std::string(text);
}

}  // namespace

extern "C" {

const char* tssnet_last_error(void) { return g_last_error.c_str(); }

const char* tssnet_status_name(tssnet_status status) {
  switch (status) {
    case TSSNET_OK: return "ok";
    case TSSNET_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case TSSNET_ERR_INVALID_SHAPE: return "invalid-shape";
    case TSSNET_ERR_SHAPE_MISMATCH: return "shape-mismatch";
    case TSSNET_ERR_OUT_OF_BOUNDS: return "out-of-bounds";
    case TSSNET_ERR_INVALID_CONFIG: return "invalid-config";
    case TSSNET_ERR_KERNEL_TOO_LARGE: return "kernel-too-large";
    case TSSNET_ERR_STALE_CACHE: return "stale-cache";
    case TSSNET_ERR_IO: return "io";
    case TSSNET_ERR_PARSE: return "parse";
    case TSSNET_ERR_EMPTY_INPUT: return "empty-input";
    case TSSNET_ERR_TOO_SHORT: return "too-short";
    case TSSNET_ERR_DEGENERATE_SAMPLE: return "degenerate-sample";
    case TSSNET_ERR_ALL_DEGENERATE: return "all-degenerate";
    case TSSNET_ERR_NON_FINITE_LOSS: return "non-finite-loss";
    case TSSNET_ERR_VERSION_MISMATCH: return "version-mismatch";
    case TSSNET_ERR_CORRUPT_CHECKPOINT: return "corrupt-checkpoint";
    case TSSNET_ERR_ALL_TRIALS_FAILED: return "all-trials-failed";
    case TSSNET_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

tssnet_config* tssnet_config_new(void) {
  return new (std::nothrow) tssnet_config{};
}

void tssnet_config_free(tssnet_config* config) { delete config; }

tssnet_status tssnet_config_load_file(tssnet_config* config,
                                      const char* path) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (path == nullptr) return fail_argument("path is null");
  return guarded([&] { config->config.load_file(path); });
}

tssnet_status tssnet_config_set(tssnet_config* config, const char* key,
                                const char* value) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (key == nullptr || value == nullptr) {
    return fail_argument("key or value is null");
  }
  return guarded([&] { config->config.set(key, value); });
}

tssnet_status tssnet_config_get(const tssnet_config* config, const char* key,
                                char* buffer, size_t buffer_size) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (key == nullptr) return fail_argument("key is null");
  return guarded(
      [&] { copy_text(config->config.get(key), buffer, buffer_size); });
}

tssnet_status tssnet_series_open(const tssnet_config* config,
                                 tssnet_series** out_series) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_series == nullptr) return fail_argument("out_series is null");
  return guarded([&] {
    auto handle = std::make_unique<tssnet_series>();
    handle->series = tssnet::open_series(config->config);
    *out_series = handle.release();
  });
}

tssnet_status tssnet_series_from_values(size_t features, size_t length,
                                        const double* values,
                                        tssnet_series** out_series) {
  if (values == nullptr) return fail_argument("values is null");
  if (out_series == nullptr) return fail_argument("out_series is null");
  return guarded([&] {
    auto handle = std::make_unique<tssnet_series>();
    handle->series = tssnet::make_series(tssnet::Tensor(
        {features, length},
        std::vector<double>(values, values + features * length)));
    *out_series = handle.release();
  });
}

tssnet_status tssnet_series_save_csv(const tssnet_series* series,
                                     const char* path) {
  if (series == nullptr) return fail_argument("series handle is null");
  if (path == nullptr) return fail_argument("path is null");
  return guarded([&] { tssnet::save_csv(series->series, path); });
}

tssnet_status tssnet_series_dims(const tssnet_series* series,
                                 size_t* out_features, size_t* out_length) {
  if (series == nullptr) return fail_argument("series handle is null");
  if (out_features != nullptr) *out_features = series->series.feature_count();
  if (out_length != nullptr) *out_length = series->series.length();
  g_last_error.clear();
  return TSSNET_OK;
}

tssnet_status tssnet_series_copy_values(const tssnet_series* series,
                                        double* buffer, size_t buffer_len) {
  if (series == nullptr) return fail_argument("series handle is null");
  if (buffer == nullptr) return fail_argument("buffer is null");
  return guarded([&] {
    const tssnet::Tensor& values = series->series.values;
    if (buffer_len != values.size()) {
      throw tssnet::ShapeMismatch("buffer holds " +
                                  std::to_string(buffer_len) +
                                  " doubles, the series has " +
                                  std::to_string(values.size()));
    }
    std::memcpy(buffer, values.data(), values.size() * sizeof(double));
  });
}

tssnet_status tssnet_series_acf(const tssnet_series* series, size_t feature,
                                size_t max_lag, double* out_values) {
  if (series == nullptr) return fail_argument("series handle is null");
  if (out_values == nullptr) return fail_argument("out_values is null");
  return guarded([&] {
    const std::vector<double> values =
        tssnet::autocorrelation(series->series, feature, max_lag);
    std::memcpy(out_values, values.data(), values.size() * sizeof(double));
  });
}

void tssnet_series_free(tssnet_series* series) { delete series; }

tssnet_status tssnet_model_build(const tssnet_config* config, size_t features,
                                 tssnet_model** out_model) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_model == nullptr) return fail_argument("out_model is null");
  return guarded([&] {
    auto handle = std::make_unique<tssnet_model>();
    handle->model = tssnet::build_model(config->config, features);
    *out_model = handle.release();
  });
}

tssnet_status tssnet_model_load(const char* checkpoint_path,
                                tssnet_model** out_model) {
  if (checkpoint_path == nullptr) return fail_argument("checkpoint_path is null");
  if (out_model == nullptr) return fail_argument("out_model is null");
  return guarded([&] {
    tssnet::LoadedModel loaded = tssnet::load_checkpoint(checkpoint_path);
    auto handle = std::make_unique<tssnet_model>();
    handle->model = std::move(loaded.model);
    handle->scaler = std::move(loaded.scaler);
    *out_model = handle.release();
  });
}

tssnet_status tssnet_model_save(tssnet_model* model,
                                const char* checkpoint_path) {
  if (model == nullptr) return fail_argument("model handle is null");
  if (checkpoint_path == nullptr) return fail_argument("checkpoint_path is null");
  return guarded(
      [&] { tssnet::save_checkpoint(*model->model, model->scaler, checkpoint_path); });
}

tssnet_status tssnet_model_kind(const tssnet_model* model, char* buffer,
                                size_t buffer_size) {
  if (model == nullptr) return fail_argument("model handle is null");
  return guarded([&] { copy_text(model->model->kind(), buffer, buffer_size); });
}

tssnet_status tssnet_model_dims(const tssnet_model* model,
                                size_t* out_features, size_t* out_input_length,
                                size_t* out_horizon) {
  if (model == nullptr) return fail_argument("model handle is null");
  const tssnet::ModelDims dims = model->model->dims();
  if (out_features != nullptr) *out_features = dims.features;
  if (out_input_length != nullptr) *out_input_length = dims.input_length;
  if (out_horizon != nullptr) *out_horizon = dims.horizon;
  g_last_error.clear();
  return TSSNET_OK;
}

tssnet_status tssnet_model_predict(const tssnet_model* model,
                                   const double* input, size_t input_len,
                                   double* output, size_t output_len) {
  if (model == nullptr) return fail_argument("model handle is null");
  if (input == nullptr || output == nullptr) {
    return fail_argument("input or output buffer is null");
  }
  return guarded([&] {
    const tssnet::ModelDims dims = model->model->dims();
    if (input_len != dims.features * dims.input_length) {
      throw tssnet::ShapeMismatch(
          "input holds " + std::to_string(input_len) + " doubles, expected " +
          std::to_string(dims.features * dims.input_length));
    }
    if (output_len != dims.features * dims.horizon) {
      throw tssnet::ShapeMismatch(
          "output holds " + std::to_string(output_len) + " doubles, expected " +
          std::to_string(dims.features * dims.horizon));
    }
    const tssnet::Tensor prediction = model->model->predict(
        tssnet::Tensor({dims.features, dims.input_length},
                       std::vector<double>(input, input + input_len)));
    std::memcpy(output, prediction.data(), output_len * sizeof(double));
  });
}

void tssnet_model_free(tssnet_model* model) { delete model; }

tssnet_status tssnet_run_synth(const tssnet_config* config,
                               const char* out_dir) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_dir == nullptr) return fail_argument("out_dir is null");
  return guarded([&] { tssnet::run_synth(config->config, out_dir); });
}

tssnet_status tssnet_run_acf(const tssnet_config* config,
                             const char* out_dir) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_dir == nullptr) return fail_argument("out_dir is null");
  return guarded([&] { tssnet::run_acf(config->config, out_dir); });
}

tssnet_status tssnet_run_train(const tssnet_config* config,
                               const char* out_dir,
                               double* out_best_valid_corr,
                               size_t* out_epochs_run) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_dir == nullptr) return fail_argument("out_dir is null");
  return guarded([&] {
    const tssnet::TrainResult result =
        tssnet::run_train(config->config, out_dir);
    if (out_best_valid_corr != nullptr) {
      *out_best_valid_corr = result.best_valid_corr;
    }
    if (out_epochs_run != nullptr) *out_epochs_run = result.epochs_run;
  });
}

tssnet_status tssnet_run_evaluate(const tssnet_config* config,
                                  const char* checkpoint_path,
                                  const char* split, const char* out_dir,
                                  double* out_rmse, double* out_corr) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_dir == nullptr) return fail_argument("out_dir is null");
  return guarded([&] {
    const tssnet::EvalReport report = tssnet::run_evaluate(
        config->config, text_or_empty(checkpoint_path), text_or_empty(split),
        out_dir);
    if (out_rmse != nullptr) *out_rmse = report.rmse_value;
    if (out_corr != nullptr) *out_corr = report.corr_value;
  });
}

tssnet_status tssnet_run_predict(const tssnet_config* config,
                                 const char* checkpoint_path,
                                 const char* out_dir) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_dir == nullptr) return fail_argument("out_dir is null");
  return guarded([&] {
    tssnet::run_predict(config->config, text_or_empty(checkpoint_path),
                        out_dir);
  });
}

tssnet_status tssnet_run_featuremap(const tssnet_config* config,
                                    const char* checkpoint_path,
                                    const char* out_dir, size_t* out_kernels) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_dir == nullptr) return fail_argument("out_dir is null");
  return guarded([&] {
    const std::size_t kernels = tssnet::run_featuremap(
        config->config, text_or_empty(checkpoint_path), out_dir);
    if (out_kernels != nullptr) *out_kernels = kernels;
  });
}

tssnet_status tssnet_run_search(const tssnet_config* config,
                                const char* out_dir, size_t* out_best_trial,
                                double* out_best_corr) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_dir == nullptr) return fail_argument("out_dir is null");
  return guarded([&] {
    const tssnet::SearchResult result =
        tssnet::run_search(config->config, out_dir);
    if (out_best_trial != nullptr) *out_best_trial = result.best_trial;
    if (out_best_corr != nullptr) {
      *out_best_corr = result.trials[result.best_trial].valid_corr;
    }
  });
}

tssnet_status tssnet_run_sweep(const tssnet_config* config,
                               const char* out_dir, size_t* out_rows) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_dir == nullptr) return fail_argument("out_dir is null");
  return guarded([&] {
    const std::vector<tssnet::EvalReport> reports =
        tssnet::run_sweep(config->config, out_dir);
    if (out_rows != nullptr) *out_rows = reports.size();
  });
}

tssnet_status tssnet_run_gradcheck(const tssnet_config* config,
                                   const char* out_dir,
                                   double* out_max_rel_err) {
  if (config == nullptr) return fail_argument("config handle is null");
  if (out_dir == nullptr) return fail_argument("out_dir is null");
  return guarded([&] {
    const tssnet::GradCheckReport report =
        tssnet::run_gradcheck(config->config, out_dir);
    if (out_max_rel_err != nullptr) *out_max_rel_err = report.max_rel_err;
  });
}

}  // extern "C"
