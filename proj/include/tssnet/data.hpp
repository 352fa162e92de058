#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tssnet/tensor.hpp"

namespace tssnet {

enum class ScaleMethod { none, max_abs, min_max, z_score };

// Per-feature affine map fitted on a leading range of the series:
// scaled = (v - offset) / scale. Features whose statistics would make
// scale zero (constant or all-zero rows) keep scale 1 so the map stays
// invertible.
struct ScalerRecord {
  ScaleMethod method = ScaleMethod::none;
  std::vector<double> scale;
  std::vector<double> offset;

  std::size_t feature_count() const { return scale.size(); }
};

// Multivariate series, features by rows, time by columns.
struct SeriesMatrix {
  Tensor values;  // m x T
  std::vector<std::string> feature_names;
  std::optional<ScalerRecord> scaling;  // set once scale_series has run

  std::size_t feature_count() const { return values.dim(0); }
  std::size_t length() const { return values.dim(1); }
  double at(std::size_t feature, std::size_t t) const {
    return values(feature, t);
  }
};

SeriesMatrix make_series(Tensor values,
                         std::vector<std::string> feature_names = {});

struct CsvOptions {
  bool has_header = true;
  char delimiter = ',';
  std::vector<std::size_t> columns;  // 0-based selection; empty keeps all
};

// Reads rows-as-time CSV and transposes into the feature x time layout.
// Lines starting with '#' are ignored, so exported files load back.
// Ragged rows or non-numeric cells raise ParseError with the 1-based
// data row and column; an empty file raises EmptyInput.
SeriesMatrix load_csv(const std::string& path, const CsvOptions& options = {});

// Writes time-as-rows CSV with a header row. header_comment lines, when
// given, are prefixed with "# " so the file stays loadable.
void save_csv(const SeriesMatrix& series, const std::string& path,
              const std::string& header_comment = "");

// Fits on columns [0, fit_length) only, so statistics never leak from
// later (validation/test) columns.
ScalerRecord fit_scaler(const SeriesMatrix& series, ScaleMethod method,
                        std::size_t fit_length);
SeriesMatrix scale_series(const SeriesMatrix& series, ScaleMethod method,
                          std::size_t fit_length);
SeriesMatrix inverse_scale(const SeriesMatrix& series,
                           const ScalerRecord& record);

// Column-block forms for prediction inputs/outputs (m x n, feature order).
Tensor apply_scaler(const Tensor& block, const ScalerRecord& record);
Tensor invert_scaler(const Tensor& block, const ScalerRecord& record);

struct SplitRatios {
  double train = 0.6;
  double valid = 0.2;
  double test = 0.2;
};

struct SplitSeries {
  SeriesMatrix train;
  SeriesMatrix valid;
  SeriesMatrix test;
};

// Chronological split: train gets floor(ratio * T) columns, valid too,
// test the remainder. Ratios must be positive and sum to 1; every part
// must end up non-empty.
SplitSeries split_chronological(const SeriesMatrix& series,
                                const SplitRatios& ratios);

// Supervised windows: input m x input_length, target the next horizon
// columns. Window j starts at column j * stride.
struct WindowedDataset {
  std::vector<Tensor> inputs;
  std::vector<Tensor> targets;
  std::vector<std::size_t> origins;

  std::size_t size() const { return inputs.size(); }
};

WindowedDataset make_windows(const SeriesMatrix& series,
                             std::size_t input_length, std::size_t horizon,
                             std::size_t stride = 1);

enum class SynthFunction {
  sine,                  // sin(x + a*eps)
  sine_plus_linear,      // sin(x + a*eps) + x
  x_times_sine,          // x * sin(x + a*eps)
  sine_plus_half_linear  // sin(x + a*eps) + x/2
};

// Univariate generator sampled at x_t = t * dx with phase noise
// eps ~ N(0, 1) drawn per step from the seeded engine; noise scales the
// phase jitter and must lie in [0, 1].
struct SynthSpec {
  SynthFunction function = SynthFunction::sine;
  std::size_t length = 2000;
  double dx = 0.1;
  double noise = 0.0;
  std::uint64_t seed = 1;
};

SeriesMatrix synth_generate(const SynthSpec& spec);

// Autocorrelation r(0..max_lag) of one feature row, normalized by the
// full-series variance so r(0) == 1. Constant rows are degenerate.
std::vector<double> autocorrelation(const SeriesMatrix& series,
                                    std::size_t feature, std::size_t max_lag);

// Name round-trips used by config parsing and file headers.
ScaleMethod parse_scale_method(const std::string& name);
const char* scale_method_name(ScaleMethod method);
SynthFunction parse_synth_function(const std::string& name);
const char* synth_function_name(SynthFunction function);

}  // namespace tssnet
