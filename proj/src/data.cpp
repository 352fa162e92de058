#include "tssnet/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "format.hpp"
#include "tssnet/errors.hpp"

namespace tssnet {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, delimiter)) cells.push_back(cell);
  if (!line.empty() && line.back() == delimiter) cells.emplace_back();
  return cells;
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string cell = trimmed(raw);
  if (cell.empty()) {
    throw ParseError("empty cell at data row " + std::to_string(row) +
                         ", column " + std::to_string(col),
                     row, col);
  }
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + cell.size()) {
    throw ParseError("cell '" + cell + "' at data row " + std::to_string(row) +
                         ", column " + std::to_string(col) +
                         " is not a number",
                     row, col);
  }
  return v;
}

void check_feature_count(const ScalerRecord& record, std::size_t features,
                         const char* what) {
  if (record.feature_count() != features ||
      record.offset.size() != record.scale.size()) {
    throw ShapeMismatch(std::string(what) + ": scaler covers " +
                        std::to_string(record.feature_count()) +
                        " features, series has " + std::to_string(features));
  }
}

}  // namespace

SeriesMatrix make_series(Tensor values, std::vector<std::string> feature_names) {
  if (values.rank() != 2) {
    throw ShapeMismatch("series values must be a feature x time matrix");
  }
  SeriesMatrix series;
  if (feature_names.empty()) {
    for (std::size_t f = 0; f < values.dim(0); ++f) {
      feature_names.push_back("f" + std::to_string(f));
    }
  } else if (feature_names.size() != values.dim(0)) {
    throw ShapeMismatch("series has " + std::to_string(values.dim(0)) +
                        " features but " + std::to_string(feature_names.size()) +
                        " names");
  }
  series.values = std::move(values);
  series.feature_names = std::move(feature_names);
  return series;
}

SeriesMatrix load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t data_row = 0;
  bool header_pending = options.has_header;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trimmed(line);
    if (t.empty() || t[0] == '#') continue;

    std::vector<std::string> cells = split_line(line, options.delimiter);
    if (header_pending) {
      header_pending = false;
      for (const std::string& c : cells) header.push_back(trimmed(c));
      width = cells.size();
      continue;
    }

    ++data_row;
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw ParseError("data row " + std::to_string(data_row) + " has " +
                           std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(width),
                       data_row, cells.size());
    }
    std::vector<double> parsed(width);
    for (std::size_t c = 0; c < width; ++c) {
      parsed[c] = parse_cell(cells[c], data_row, c + 1);
    }
    rows.push_back(std::move(parsed));
  }

  if (rows.empty()) {
    throw EmptyInput("'" + path + "' contains no data rows");
  }

  std::vector<std::size_t> keep = options.columns;
  if (keep.empty()) {
    for (std::size_t c = 0; c < width; ++c) keep.push_back(c);
  } else {
    for (std::size_t c : keep) {
      if (c >= width) {
        throw InvalidConfig("column " + std::to_string(c) +
                            " requested but file has " + std::to_string(width) +
                            " columns");
      }
    }
  }

  const std::size_t m = keep.size(), t_len = rows.size();
  Tensor values({m, t_len});
  for (std::size_t f = 0; f < m; ++f) {
    for (std::size_t t = 0; t < t_len; ++t) {
      values(f, t) = rows[t][keep[f]];
    }
  }

  std::vector<std::string> names;
  for (std::size_t f = 0; f < m; ++f) {
    if (keep[f] < header.size() && !header[keep[f]].empty()) {
      names.push_back(header[keep[f]]);
    } else {
      names.push_back("f" + std::to_string(keep[f]));
    }
  }
  return make_series(std::move(values), std::move(names));
}

void save_csv(const SeriesMatrix& series, const std::string& path,
              const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");

  if (!header_comment.empty()) {
    std::istringstream lines(header_comment);
    std::string l;
    while (std::getline(lines, l)) out << "# " << l << "\n";
  }
  const std::size_t m = series.feature_count(), t_len = series.length();
  for (std::size_t f = 0; f < m; ++f) {
    out << (f ? "," : "") << series.feature_names[f];
  }
  out << "\n";
  for (std::size_t t = 0; t < t_len; ++t) {
    for (std::size_t f = 0; f < m; ++f) {
      out << (f ? "," : "") << detail::format_double(series.values(f, t));
    }
    out << "\n";
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

ScalerRecord fit_scaler(const SeriesMatrix& series, ScaleMethod method,
                        std::size_t fit_length) {
  if (fit_length == 0 || fit_length > series.length()) {
    throw InvalidConfig("scaler fit length " + std::to_string(fit_length) +
                        " must lie in [1, " + std::to_string(series.length()) +
                        "]");
  }
  const std::size_t m = series.feature_count();
  ScalerRecord record;
  record.method = method;
  record.scale.assign(m, 1.0);
  record.offset.assign(m, 0.0);
  const double n = static_cast<double>(fit_length);

  for (std::size_t f = 0; f < m; ++f) {
    switch (method) {
      case ScaleMethod::none:
        break;
      case ScaleMethod::max_abs: {
        double peak = 0.0;
        for (std::size_t t = 0; t < fit_length; ++t) {
          peak = std::max(peak, std::fabs(series.values(f, t)));
        }
        record.scale[f] = peak > 0.0 ? peak : 1.0;
        break;
      }
      case ScaleMethod::min_max: {
        double lo = series.values(f, 0), hi = lo;
        for (std::size_t t = 1; t < fit_length; ++t) {
          lo = std::min(lo, series.values(f, t));
          hi = std::max(hi, series.values(f, t));
        }
        record.offset[f] = lo;
        record.scale[f] = hi > lo ? hi - lo : 1.0;
        break;
      }
      case ScaleMethod::z_score: {
        double mean = 0.0;
        for (std::size_t t = 0; t < fit_length; ++t) mean += series.values(f, t);
        mean /= n;
        double var = 0.0;
        for (std::size_t t = 0; t < fit_length; ++t) {
          const double d = series.values(f, t) - mean;
          var += d * d;
        }
        const double sd = std::sqrt(var / n);
        record.offset[f] = mean;
        record.scale[f] = sd > 0.0 ? sd : 1.0;
        break;
      }
    }
  }
  return record;
}

SeriesMatrix scale_series(const SeriesMatrix& series, ScaleMethod method,
                          std::size_t fit_length) {
  const ScalerRecord record = fit_scaler(series, method, fit_length);
  SeriesMatrix out = series;
  out.values = apply_scaler(series.values, record);
  out.scaling = record;
  return out;
}

SeriesMatrix inverse_scale(const SeriesMatrix& series,
                           const ScalerRecord& record) {
  SeriesMatrix out = series;
  out.values = invert_scaler(series.values, record);
  out.scaling.reset();
  return out;
}

Tensor apply_scaler(const Tensor& block, const ScalerRecord& record) {
  if (block.rank() != 2) {
    throw ShapeMismatch("apply_scaler expects a feature x time block");
  }
  check_feature_count(record, block.dim(0), "apply_scaler");
  Tensor out = block;
  for (std::size_t f = 0; f < block.dim(0); ++f) {
    for (std::size_t t = 0; t < block.dim(1); ++t) {
      out(f, t) = (block(f, t) - record.offset[f]) / record.scale[f];
    }
  }
  return out;
}

Tensor invert_scaler(const Tensor& block, const ScalerRecord& record) {
  if (block.rank() != 2) {
    throw ShapeMismatch("invert_scaler expects a feature x time block");
  }
  check_feature_count(record, block.dim(0), "invert_scaler");
  Tensor out = block;
  for (std::size_t f = 0; f < block.dim(0); ++f) {
    for (std::size_t t = 0; t < block.dim(1); ++t) {
      out(f, t) = block(f, t) * record.scale[f] + record.offset[f];
    }
  }
  return out;
}

SplitSeries split_chronological(const SeriesMatrix& series,
                                const SplitRatios& ratios) {
  if (!(ratios.train > 0.0) || !(ratios.valid > 0.0) || !(ratios.test > 0.0)) {
    throw InvalidConfig("split ratios must all be positive");
  }
  if (std::fabs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    throw InvalidConfig("split ratios must sum to 1");
  }
  const std::size_t t_len = series.length();
  const auto n_train =
      static_cast<std::size_t>(std::floor(ratios.train * static_cast<double>(t_len)));
  const auto n_valid =
      static_cast<std::size_t>(std::floor(ratios.valid * static_cast<double>(t_len)));
  if (n_train == 0 || n_valid == 0 || n_train + n_valid >= t_len) {
    throw TooShort("series of length " + std::to_string(t_len) +
                   " cannot be split into three non-empty parts");
  }
  const std::size_t n_test = t_len - n_train - n_valid;

  auto take = [&](std::size_t begin, std::size_t count) {
    Tensor part({series.feature_count(), count});
    for (std::size_t f = 0; f < series.feature_count(); ++f) {
      for (std::size_t t = 0; t < count; ++t) {
        part(f, t) = series.values(f, begin + t);
      }
    }
    SeriesMatrix out = make_series(std::move(part), series.feature_names);
    out.scaling = series.scaling;
    return out;
  };

  SplitSeries out;
  out.train = take(0, n_train);
  out.valid = take(n_train, n_valid);
  out.test = take(n_train + n_valid, n_test);
  return out;
}

WindowedDataset make_windows(const SeriesMatrix& series,
                             std::size_t input_length, std::size_t horizon,
                             std::size_t stride) {
  if (input_length == 0 || horizon == 0 || stride == 0) {
    throw InvalidConfig("window input length, horizon and stride must be positive");
  }
  const std::size_t t_len = series.length();
  if (t_len < input_length + horizon) {
    throw TooShort("series of length " + std::to_string(t_len) +
                   " is shorter than one window of " +
                   std::to_string(input_length) + " + " +
                   std::to_string(horizon));
  }
  const std::size_t count = (t_len - input_length - horizon) / stride + 1;
  const std::size_t m = series.feature_count();

  WindowedDataset out;
  out.inputs.reserve(count);
  out.targets.reserve(count);
  out.origins.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t begin = j * stride;
    Tensor input({m, input_length});
    Tensor target({m, horizon});
    for (std::size_t f = 0; f < m; ++f) {
      for (std::size_t t = 0; t < input_length; ++t) {
        input(f, t) = series.values(f, begin + t);
      }
      for (std::size_t t = 0; t < horizon; ++t) {
        target(f, t) = series.values(f, begin + input_length + t);
      }
    }
    out.inputs.push_back(std::move(input));
    out.targets.push_back(std::move(target));
    out.origins.push_back(begin);
  }
  return out;
}

SeriesMatrix synth_generate(const SynthSpec& spec) {
  if (spec.length == 0) throw InvalidConfig("synth length must be positive");
  if (!(spec.dx > 0.0)) throw InvalidConfig("synth dx must be positive");
  if (!(spec.noise >= 0.0 && spec.noise <= 1.0)) {
    throw InvalidConfig("synth noise ratio must lie in [0, 1]");
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor values({1, spec.length});
  for (std::size_t t = 0; t < spec.length; ++t) {
    const double x = static_cast<double>(t) * spec.dx;
    const double phase = x + spec.noise * gauss(rng);
    switch (spec.function) {
      case SynthFunction::sine:
        values(0, t) = std::sin(phase);
        break;
      case SynthFunction::sine_plus_linear:
        values(0, t) = std::sin(phase) + x;
        break;
      case SynthFunction::x_times_sine:
        values(0, t) = x * std::sin(phase);
        break;
      case SynthFunction::sine_plus_half_linear:
        values(0, t) = std::sin(phase) + 0.5 * x;
        break;
    }
  }
  return make_series(std::move(values), {synth_function_name(spec.function)});
}

std::vector<double> autocorrelation(const SeriesMatrix& series,
                                    std::size_t feature, std::size_t max_lag) {
  if (feature >= series.feature_count()) {
    throw OutOfBounds("feature " + std::to_string(feature) +
                      " out of range for " +
                      std::to_string(series.feature_count()) + " features");
  }
  const std::size_t t_len = series.length();
  if (max_lag >= t_len) {
    throw InvalidConfig("max lag " + std::to_string(max_lag) +
                        " must be below the series length " +
                        std::to_string(t_len));
  }

  double mean = 0.0;
  for (std::size_t t = 0; t < t_len; ++t) mean += series.values(feature, t);
  mean /= static_cast<double>(t_len);

  double denom = 0.0;
  for (std::size_t t = 0; t < t_len; ++t) {
    const double d = series.values(feature, t) - mean;
    denom += d * d;
  }
  if (denom == 0.0) {
    throw DegenerateSample("autocorrelation of a constant series is undefined");
  }

  std::vector<double> r(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (std::size_t t = 0; t + k < t_len; ++t) {
      acc += (series.values(feature, t) - mean) *
             (series.values(feature, t + k) - mean);
    }
    r[k] = acc / denom;
  }
  return r;
}

ScaleMethod parse_scale_method(const std::string& name) {
  if (name == "none") return ScaleMethod::none;
  if (name == "max-abs") return ScaleMethod::max_abs;
  if (name == "min-max") return ScaleMethod::min_max;
  if (name == "z-score") return ScaleMethod::z_score;
  throw InvalidConfig("unknown scale method '" + name + "'");
}

const char* scale_method_name(ScaleMethod method) {
  switch (method) {
    case ScaleMethod::none: return "none";
    case ScaleMethod::max_abs: return "max-abs";
    case ScaleMethod::min_max: return "min-max";
    case ScaleMethod::z_score: return "z-score";
  }
  return "none";
}

SynthFunction parse_synth_function(const std::string& name) {
  if (name == "sine") return SynthFunction::sine;
  if (name == "sine-plus-linear") return SynthFunction::sine_plus_linear;
  if (name == "x-times-sine") return SynthFunction::x_times_sine;
  if (name == "sine-plus-half-linear") return SynthFunction::sine_plus_half_linear;
  throw InvalidConfig("unknown synth function '" + name + "'");
}

const char* synth_function_name(SynthFunction function) {
  switch (function) {
    case SynthFunction::sine: return "sine";
    case SynthFunction::sine_plus_linear: return "sine-plus-linear";
    case SynthFunction::x_times_sine: return "x-times-sine";
    case SynthFunction::sine_plus_half_linear: return "sine-plus-half-linear";
  }
  return "sine";
}

}  // namespace tssnet
