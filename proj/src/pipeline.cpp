#include "tssnet/pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "format.hpp"
#include "tssnet/errors.hpp"

namespace tssnet {

namespace {

// Every key the toolkit understands, with its default. The table is the
// single source of truth for config validation, the echo headers and the
// fingerprint.
const std::map<std::string, std::string>& default_entries() {
  static const std::map<std::string, std::string> defaults = {
      {"data.csv", ""},
      {"data.has_header", "true"},
      {"data.delimiter", ","},
      {"data.columns", ""},
      {"data.scale", "max-abs"},
      {"split.train", "0.6"},
      {"split.valid", "0.2"},
      {"split.test", "0.2"},
      {"window.input", "168"},
      {"window.horizon", "15"},
      {"window.stride", "1"},
      {"synth.function", "sine"},
      {"synth.length", "2000"},
      {"synth.dx", "0.2617993877991494"},
      {"synth.noise", "0"},
      {"synth.seed", "1"},
      {"transform.window", "8"},
      {"transform.stride", "2"},
      {"transform.dilation", "1"},
      {"transform.padding", "0"},
      {"transform.padding_mode", "edge-replicate"},
      {"transform.local_mean_k", "3"},
      {"transform.slice_mode", "standard"},
      {"model", "tssnet"},
      {"model.kernel_width", "3"},
      {"model.kernel_height_mode", "full-stack"},
      {"model.kernel_height", "3"},
      {"model.hidden_multiplier", "2"},
      {"cnn1d.kernel_height", "0"},
      {"cnn1d.kernel_width", "3"},
      {"persistence.mode", "last-value"},
      {"persistence.period", "24"},
      {"train.optimizer", "adam"},
      {"train.lr", "0.001"},
      {"train.clip", "10"},
      {"train.batch", "32"},
      {"train.epochs", "100"},
      {"train.patience", "0"},
      {"metrics.corr_variant", "pearson"},
      {"search.window_min", "5"},
      {"search.window_max", "10"},
      {"search.stride_min", "1"},
      {"search.stride_max", "5"},
      {"search.lr_min", "0.0001"},
      {"search.lr_max", "0.01"},
      {"search.budget", "100"},
      {"sweep.inputs", "32,64,128,256"},
      {"sweep.horizons", "15,30,60,120"},
      {"featuremap.sample", "0"},
      {"acf.feature", "0"},
      {"acf.max_lag", "48"},
      {"gradcheck.epsilon", "1e-5"},
      {"gradcheck.sample", "200"},
      {"report.dataset", ""},
      {"seed", "42"},
      {"jobs", "1"},
  };
  return defaults;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

RunConfig::RunConfig() : entries_(default_entries()) {}

bool RunConfig::is_known(const std::string& key) const {
  return entries_.count(key) != 0;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw InvalidConfig("unknown config key '" + key + "'");
  }
  it->second = value;
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw InvalidConfig("unknown config key '" + key + "'");
  }
  return it->second;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");

  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfig(path + ":" + std::to_string(number) +
                          ": expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) {
      throw InvalidConfig(path + ":" + std::to_string(number) +
                          ": empty key");
    }
    if (!is_known(key)) {
      throw InvalidConfig(path + ":" + std::to_string(number) +
                          ": unknown config key '" + key + "'");
    }
    set(key, value);
  }
}

std::string RunConfig::get_string(const std::string& key) const {
  return get(key);
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InvalidConfig("config key '" + key + "': expected true or false, got '" +
                      v + "'");
}

std::size_t RunConfig::get_size(const std::string& key) const {
  const std::string& v = get(key);
  const char* begin = v.c_str();
  char* end = nullptr;
  errno = 0;
  const unsigned long long parsed = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || errno != 0 || v.find('-') != std::string::npos) {
    throw InvalidConfig("config key '" + key +
                        "': expected a non-negative integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(parsed);
}

std::uint64_t RunConfig::get_uint64(const std::string& key) const {
  return static_cast<std::uint64_t>(get_size(key));
}

double RunConfig::get_double(const std::string& key) const {
  const std::string& v = get(key);
  const char* begin = v.c_str();
  char* end = nullptr;
  const double parsed = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw InvalidConfig("config key '" + key + "': expected a number, got '" +
                        v + "'");
  }
  return parsed;
}

std::vector<std::size_t> RunConfig::get_size_list(const std::string& key) const {
  const std::string& v = get(key);
  std::vector<std::size_t> out;
  std::stringstream stream(v);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::string text = trim(item);
    if (text.empty()) {
      throw InvalidConfig("config key '" + key + "': empty list entry in '" +
                          v + "'");
    }
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const unsigned long long parsed = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || errno != 0) {
      throw InvalidConfig("config key '" + key + "': bad list entry '" + text +
                          "'");
    }
    out.push_back(static_cast<std::size_t>(parsed));
  }
  if (out.empty()) {
    throw InvalidConfig("config key '" + key + "': list is empty");
  }
  return out;
}

std::vector<std::string> RunConfig::echo() const {
  std::vector<std::string> lines;
  lines.reserve(entries_.size());
  for (const auto& [key, value] : entries_) {
    lines.push_back(key + " = " + value);
  }
  return lines;
}

std::string RunConfig::fingerprint() const {
  std::uint64_t hash = 14695981039346656037ULL;
  auto mix = [&hash](const std::string& text) {
    for (const char c : text) {
      hash ^= static_cast<unsigned char>(c);
      hash *= 1099511628211ULL;
    }
  };
  for (const auto& [key, value] : entries_) {
    mix(key);
    mix("=");
    mix(value);
    mix("\n");
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buffer);
}

namespace {

std::string echo_comment(const RunConfig& config) {
  std::string comment;
  for (const std::string& line : config.echo()) {
    comment += line;
    comment += '\n';
  }
  comment += "fingerprint = " + config.fingerprint();
  return comment;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_echo_header(std::ofstream& out, const RunConfig& config) {
  for (const std::string& line : config.echo()) out << "# " << line << "\n";
  out << "# fingerprint = " << config.fingerprint() << "\n";
}

std::string csv_quote(const std::string& text) {
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

SeriesMatrix open_series(const RunConfig& config) {
  const std::string csv = config.get_string("data.csv");
  if (!csv.empty()) {
    CsvOptions options;
    options.has_header = config.get_bool("data.has_header");
    const std::string delimiter = config.get_string("data.delimiter");
    if (delimiter.size() != 1) {
      throw InvalidConfig("config key 'data.delimiter': expected one character");
    }
    options.delimiter = delimiter[0];
    if (!config.get_string("data.columns").empty()) {
      options.columns = config.get_size_list("data.columns");
    }
    return load_csv(csv, options);
  }

  SynthSpec spec;
  spec.function = parse_synth_function(config.get_string("synth.function"));
  spec.length = config.get_size("synth.length");
  spec.dx = config.get_double("synth.dx");
  spec.noise = config.get_double("synth.noise");
  spec.seed = config.get_uint64("synth.seed");
  return synth_generate(spec);
}

std::string dataset_label(const RunConfig& config) {
  const std::string named = config.get_string("report.dataset");
  if (!named.empty()) return named;
  const std::string csv = config.get_string("data.csv");
  if (!csv.empty()) return std::filesystem::path(csv).stem().string();
  return config.get_string("synth.function");
}

PreparedData prepare_data(const RunConfig& config, const SeriesMatrix& raw,
                          const ScalerRecord* forced_scaler) {
  SplitRatios ratios;
  ratios.train = config.get_double("split.train");
  ratios.valid = config.get_double("split.valid");
  ratios.test = config.get_double("split.test");

  PreparedData prepared;
  if (forced_scaler != nullptr) {
    prepared.scaler = *forced_scaler;
    prepared.scaled = raw;
    prepared.scaled.values = apply_scaler(raw.values, prepared.scaler);
    prepared.scaled.scaling = prepared.scaler;
  } else {
    const ScaleMethod method =
        parse_scale_method(config.get_string("data.scale"));
    // Fit statistics only on the columns the chronological split hands to
    // training, so validation and test stay unseen.
    const SplitSeries raw_split = split_chronological(raw, ratios);
    const std::size_t fit_length = raw_split.train.length();
    prepared.scaler = fit_scaler(raw, method, fit_length);
    prepared.scaled = scale_series(raw, method, fit_length);
  }

  const SplitSeries parts = split_chronological(prepared.scaled, ratios);
  const std::size_t input_length = config.get_size("window.input");
  const std::size_t horizon = config.get_size("window.horizon");
  const std::size_t stride = config.get_size("window.stride");
  prepared.train = make_windows(parts.train, input_length, horizon, stride);
  prepared.valid = make_windows(parts.valid, input_length, horizon, stride);
  prepared.test = make_windows(parts.test, input_length, horizon, stride);
  return prepared;
}

TssNetConfig tssnet_config_from(const RunConfig& config,
                                std::size_t features) {
  TssNetConfig out;
  out.features = features;
  out.input_length = config.get_size("window.input");
  out.horizon = config.get_size("window.horizon");
  out.transform.window = config.get_size("transform.window");
  out.transform.stride = config.get_size("transform.stride");
  out.transform.dilation = config.get_size("transform.dilation");
  out.transform.padding = config.get_size("transform.padding");
  out.transform.padding_mode =
      parse_padding_mode(config.get_string("transform.padding_mode"));
  out.transform.local_mean_k = config.get_size("transform.local_mean_k");
  out.transform.slice_mode =
      parse_slice_mode(config.get_string("transform.slice_mode"));
  out.kernel_width = config.get_size("model.kernel_width");
  out.kernel_height_mode = TssNetModel::parse_kernel_height_mode(
      config.get_string("model.kernel_height_mode"));
  out.kernel_height = config.get_size("model.kernel_height");
  out.hidden_multiplier = config.get_size("model.hidden_multiplier");
  out.seed = config.get_uint64("seed");
  return out;
}

Cnn1dConfig cnn1d_config_from(const RunConfig& config, std::size_t features) {
  Cnn1dConfig out;
  out.features = features;
  out.input_length = config.get_size("window.input");
  out.horizon = config.get_size("window.horizon");
  out.kernel_height = config.get_size("cnn1d.kernel_height");
  out.kernel_width = config.get_size("cnn1d.kernel_width");
  out.hidden_multiplier = config.get_size("model.hidden_multiplier");
  out.seed = config.get_uint64("seed");
  return out;
}

PersistenceConfig persistence_config_from(const RunConfig& config,
                                          std::size_t features) {
  PersistenceConfig out;
  out.features = features;
  out.input_length = config.get_size("window.input");
  out.horizon = config.get_size("window.horizon");
  out.mode = parse_persistence_mode(config.get_string("persistence.mode"));
  out.period = config.get_size("persistence.period");
  return out;
}

TrainConfig train_config_from(const RunConfig& config) {
  TrainConfig out;
  out.optimizer = parse_optimizer_kind(config.get_string("train.optimizer"));
  out.lr = config.get_double("train.lr");
  out.clip_threshold = config.get_double("train.clip");
  out.batch_size = config.get_size("train.batch");
  out.max_epochs = config.get_size("train.epochs");
  out.patience = config.get_size("train.patience");
  out.seed = config.get_uint64("seed");
  out.corr_variant =
      parse_corr_variant(config.get_string("metrics.corr_variant"));
  return out;
}

SearchSpace search_space_from(const RunConfig& config) {
  SearchSpace out;
  out.window_min = config.get_size("search.window_min");
  out.window_max = config.get_size("search.window_max");
  out.stride_min = config.get_size("search.stride_min");
  out.stride_max = config.get_size("search.stride_max");
  out.lr_min = config.get_double("search.lr_min");
  out.lr_max = config.get_double("search.lr_max");
  out.budget = config.get_size("search.budget");
  return out;
}

std::unique_ptr<Model> build_model(const RunConfig& config,
                                   std::size_t features) {
  const std::string name = config.get_string("model");
  if (name == "tssnet") {
    return std::make_unique<TssNetModel>(tssnet_config_from(config, features));
  }
  if (name == "cnn1d") {
    return std::make_unique<Cnn1dBaseline>(cnn1d_config_from(config, features));
  }
  if (name == "persistence") {
    return std::make_unique<PersistenceModel>(
        persistence_config_from(config, features));
  }
  throw InvalidConfig("unknown model '" + name +
                      "' (expected tssnet, cnn1d or persistence)");
}

SeriesMatrix run_synth(const RunConfig& config, const std::string& out_dir) {
  SynthSpec spec;
  spec.function = parse_synth_function(config.get_string("synth.function"));
  spec.length = config.get_size("synth.length");
  spec.dx = config.get_double("synth.dx");
  spec.noise = config.get_double("synth.noise");
  spec.seed = config.get_uint64("synth.seed");
  SeriesMatrix series = synth_generate(spec);
  save_csv(series, join_path(out_dir, "series.csv"), echo_comment(config));
  return series;
}

std::vector<double> run_acf(const RunConfig& config,
                            const std::string& out_dir) {
  const SeriesMatrix series = open_series(config);
  const std::vector<double> values = autocorrelation(
      series, config.get_size("acf.feature"), config.get_size("acf.max_lag"));

  const std::string path = join_path(out_dir, "acf.csv");
  std::ofstream out = open_output(path);
  write_echo_header(out, config);
  out << "lag,acf\n";
  for (std::size_t lag = 0; lag < values.size(); ++lag) {
    out << lag << "," << detail::format_double(values[lag]) << "\n";
  }
  finish_output(out, path);
  return values;
}

namespace {

void write_history_csv(const RunConfig& config, const TrainResult& result,
                       const std::string& path) {
  std::ofstream out = open_output(path);
  write_echo_header(out, config);
  out << "epoch,train_loss,valid_corr,valid_rmse\n";
  for (const EpochStats& stats : result.history) {
    out << stats.epoch << "," << detail::format_double(stats.train_loss) << ","
        << detail::format_double(stats.valid_corr) << ","
        << detail::format_double(stats.valid_rmse) << "\n";
  }
  finish_output(out, path);
}

}  // namespace

TrainResult run_train(const RunConfig& config, const std::string& out_dir) {
  const SeriesMatrix raw = open_series(config);
  const PreparedData prepared = prepare_data(config, raw);
  std::unique_ptr<Model> model =
      build_model(config, prepared.scaled.feature_count());
  if (model->parameters().empty()) {
    throw InvalidConfig(std::string(model->kind()) +
                        " has no trainable parameters; evaluate it directly");
  }

  const TrainConfig train_config = train_config_from(config);
  TrainResult result =
      train(*model, prepared.train, prepared.valid, train_config);

  write_history_csv(config, result, join_path(out_dir, "history.csv"));
  save_checkpoint(*model, prepared.scaler,
                  join_path(out_dir, "checkpoint.json"));
  return result;
}

namespace {

struct ResolvedModel {
  std::unique_ptr<Model> model;
  std::optional<ScalerRecord> scaler;  // from the checkpoint, when loaded
};

ResolvedModel load_or_build(const RunConfig& config, const SeriesMatrix& raw,
                            const std::string& checkpoint_path) {
  ResolvedModel resolved;
  if (checkpoint_path.empty()) {
    resolved.model = build_model(config, raw.feature_count());
    return resolved;
  }

  LoadedModel loaded = load_checkpoint(checkpoint_path);
  resolved.model = std::move(loaded.model);
  resolved.scaler = std::move(loaded.scaler);
  if (resolved.model->dims().features != raw.feature_count()) {
    throw ShapeMismatch("checkpoint expects " +
                        std::to_string(resolved.model->dims().features) +
                        " features, the series has " +
                        std::to_string(raw.feature_count()));
  }
  return resolved;
}

void check_window_match(const RunConfig& config, const Model& model) {
  const ModelDims dims = model.dims();
  if (dims.input_length != config.get_size("window.input") ||
      dims.horizon != config.get_size("window.horizon")) {
    throw ShapeMismatch("checkpoint was trained for input " +
                        std::to_string(dims.input_length) + ", horizon " +
                        std::to_string(dims.horizon) +
                        "; set window.input/window.horizon to match");
  }
}

// Scaler fitted exactly the way training would fit it: statistics from
// the chronological train share only.
ScalerRecord fitted_scaler(const RunConfig& config, const SeriesMatrix& raw) {
  SplitRatios ratios;
  ratios.train = config.get_double("split.train");
  ratios.valid = config.get_double("split.valid");
  ratios.test = config.get_double("split.test");
  const SplitSeries raw_split = split_chronological(raw, ratios);
  return fit_scaler(raw, parse_scale_method(config.get_string("data.scale")),
                    raw_split.train.length());
}

void fill_report_labels(EvalReport& report, const RunConfig& config,
                        const Model& model) {
  report.dataset = dataset_label(config);
  report.seed = config.get_uint64("seed");
  report.config_fingerprint = config.fingerprint();
  if (const auto* net = dynamic_cast<const TssNetModel*>(&model)) {
    report.window = net->config().transform.window;
    report.stride = net->config().transform.stride;
  }
}

}  // namespace

EvalReport run_evaluate(const RunConfig& config,
                        const std::string& checkpoint_path,
                        const std::string& split, const std::string& out_dir) {
  const SeriesMatrix raw = open_series(config);
  ResolvedModel resolved = load_or_build(config, raw, checkpoint_path);
  check_window_match(config, *resolved.model);
  const PreparedData prepared =
      prepare_data(config, raw, resolved.scaler ? &*resolved.scaler : nullptr);

  const WindowedDataset* dataset = nullptr;
  if (split == "train") dataset = &prepared.train;
  else if (split == "valid") dataset = &prepared.valid;
  else if (split == "test" || split.empty()) dataset = &prepared.test;
  else {
    throw InvalidConfig("unknown split '" + split +
                        "' (expected train, valid or test)");
  }

  EvalReport report = evaluate_model(
      *resolved.model, *dataset,
      parse_corr_variant(config.get_string("metrics.corr_variant")));
  fill_report_labels(report, config, *resolved.model);

  const std::string path = join_path(out_dir, "report.csv");
  std::ofstream out = open_output(path);
  write_echo_header(out, config);
  out << eval_report_csv_header() << "\n" << eval_report_csv_row(report) << "\n";
  finish_output(out, path);
  return report;
}

Tensor run_predict(const RunConfig& config, const std::string& checkpoint_path,
                   const std::string& out_dir) {
  const SeriesMatrix raw = open_series(config);
  ResolvedModel resolved = load_or_build(config, raw, checkpoint_path);
  const ScalerRecord scaler =
      resolved.scaler ? *resolved.scaler : fitted_scaler(config, raw);
  const Tensor scaled = apply_scaler(raw.values, scaler);

  const ModelDims dims = resolved.model->dims();
  const std::size_t m = raw.feature_count();
  const std::size_t length = raw.length();
  if (length < dims.input_length) {
    throw TooShort("series has " + std::to_string(length) +
                   " columns, the model needs " +
                   std::to_string(dims.input_length));
  }

  Tensor input({m, dims.input_length});
  const std::size_t start = length - dims.input_length;
  for (std::size_t f = 0; f < m; ++f) {
    for (std::size_t t = 0; t < dims.input_length; ++t) {
      input(f, t) = scaled(f, start + t);
    }
  }

  const Tensor scaled_prediction = resolved.model->predict(input);
  const Tensor prediction = invert_scaler(scaled_prediction, scaler);

  SeriesMatrix out_series = make_series(prediction, raw.feature_names);
  save_csv(out_series, join_path(out_dir, "prediction.csv"),
           echo_comment(config));
  return prediction;
}

std::size_t run_featuremap(const RunConfig& config,
                           const std::string& checkpoint_path,
                           const std::string& out_dir) {
  const SeriesMatrix raw = open_series(config);
  ResolvedModel resolved = load_or_build(config, raw, checkpoint_path);
  check_window_match(config, *resolved.model);
  const auto* net = dynamic_cast<const TssNetModel*>(resolved.model.get());
  if (net == nullptr) {
    throw InvalidConfig("feature maps are a tssnet study; model '" +
                        std::string(resolved.model->kind()) +
                        "' has no slicing stack");
  }
  const ScalerRecord scaler =
      resolved.scaler ? *resolved.scaler : fitted_scaler(config, raw);
  SeriesMatrix scaled = raw;
  scaled.values = apply_scaler(raw.values, scaler);
  scaled.scaling = scaler;

  // Windows over the whole scaled series, so any region is addressable.
  const WindowedDataset windows = make_windows(
      scaled, config.get_size("window.input"),
      config.get_size("window.horizon"), config.get_size("window.stride"));
  const std::size_t sample = config.get_size("featuremap.sample");
  if (sample >= windows.size()) {
    throw OutOfBounds("featuremap.sample " + std::to_string(sample) +
                      " is out of range; the series yields " +
                      std::to_string(windows.size()) + " windows");
  }

  const std::vector<Tensor> maps =
      net->capture_feature_maps(windows.inputs[sample]);
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const Tensor& map = maps[k];
    const std::size_t rows = map.dim(0), cols = map.dim(1);
    const std::string base = "featuremap_k" + std::to_string(k);

    const std::string csv_path = join_path(out_dir, base + ".csv");
    std::ofstream csv = open_output(csv_path);
    write_echo_header(csv, config);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        csv << (c ? "," : "") << detail::format_double(map(r, c));
      }
      csv << "\n";
    }
    finish_output(csv, csv_path);

    // Plain ASCII PGM, min-max stretched to the 8-bit range; a flat map
    // renders black.
    double lo = map[0], hi = map[0];
    for (std::size_t i = 1; i < map.size(); ++i) {
      lo = std::min(lo, map[i]);
      hi = std::max(hi, map[i]);
    }
    const double span = hi - lo;
    const std::string pgm_path = join_path(out_dir, base + ".pgm");
    std::ofstream pgm = open_output(pgm_path);
    pgm << "P2\n" << cols << " " << rows << "\n255\n";
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        int level = 0;
        if (span > 0.0) {
          level = static_cast<int>(std::lround((map(r, c) - lo) / span * 255.0));
        }
        pgm << (c ? " " : "") << level;
      }
      pgm << "\n";
    }
    finish_output(pgm, pgm_path);
  }
  return maps.size();
}

SearchResult run_search(const RunConfig& config, const std::string& out_dir) {
  if (config.get_string("model") != "tssnet") {
    throw InvalidConfig("the search tunes the tssnet model; got '" +
                        config.get_string("model") + "'");
  }
  const SeriesMatrix raw = open_series(config);
  const PreparedData prepared = prepare_data(config, raw);

  const SearchResult result = hyper_search(
      search_space_from(config),
      tssnet_config_from(config, raw.feature_count()),
      train_config_from(config), prepared.train, prepared.valid,
      config.get_uint64("seed"), config.get_size("jobs"));

  const std::string path = join_path(out_dir, "trials.csv");
  std::ofstream out = open_output(path);
  write_echo_header(out, config);
  out << "trial,window,stride,lr,valid_corr,valid_rmse,status\n";
  for (const TrialResult& trial : result.trials) {
    out << trial.trial << "," << trial.window << "," << trial.stride << ","
        << detail::format_double(trial.lr) << ","
        << detail::format_double(trial.valid_corr) << ","
        << detail::format_double(trial.valid_rmse) << ","
        << csv_quote(trial.status) << "\n";
  }
  finish_output(out, path);

  // The winning trial is rebuilt and retrained from its recorded seeds,
  // which reproduces the trial exactly and leaves a loadable artifact.
  TssNetModel best(result.best_model_config);
  train(best, prepared.train, prepared.valid, result.best_train_config);
  save_checkpoint(best, prepared.scaler,
                  join_path(out_dir, "best_checkpoint.json"));
  return result;
}

std::vector<EvalReport> run_sweep(const RunConfig& config,
                                  const std::string& out_dir) {
  const std::vector<std::size_t> inputs = config.get_size_list("sweep.inputs");
  const std::vector<std::size_t> horizons =
      config.get_size_list("sweep.horizons");
  const SeriesMatrix raw = open_series(config);

  std::vector<EvalReport> reports;
  reports.reserve(inputs.size() * horizons.size());
  for (const std::size_t input_length : inputs) {
    for (const std::size_t horizon : horizons) {
      RunConfig cell = config;
      cell.set("window.input", std::to_string(input_length));
      cell.set("window.horizon", std::to_string(horizon));

      const PreparedData prepared = prepare_data(cell, raw);
      std::unique_ptr<Model> model = build_model(cell, raw.feature_count());
      if (!model->parameters().empty()) {
        train(*model, prepared.train, prepared.valid, train_config_from(cell));
      }
      EvalReport report = evaluate_model(
          *model, prepared.test,
          parse_corr_variant(cell.get_string("metrics.corr_variant")));
      fill_report_labels(report, cell, *model);
      reports.push_back(std::move(report));
    }
  }

  const std::string path = join_path(out_dir, "sweep.csv");
  std::ofstream out = open_output(path);
  write_echo_header(out, config);
  out << eval_report_csv_header() << "\n";
  for (const EvalReport& report : reports) {
    out << eval_report_csv_row(report) << "\n";
  }
  finish_output(out, path);
  return reports;
}

GradCheckReport run_gradcheck(const RunConfig& config,
                              const std::string& out_dir) {
  const SeriesMatrix raw = open_series(config);
  const PreparedData prepared = prepare_data(config, raw);
  std::unique_ptr<Model> model = build_model(config, raw.feature_count());

  const GradCheckReport report = grad_check(
      *model, prepared.train.inputs.at(0), prepared.train.targets.at(0),
      config.get_double("gradcheck.epsilon"),
      config.get_size("gradcheck.sample"), config.get_uint64("seed"));

  const std::string path = join_path(out_dir, "gradcheck.txt");
  std::ofstream out = open_output(path);
  write_echo_header(out, config);
  for (const GradCheckEntry& entry : report.params) {
    out << entry.name << " max_rel_err "
        << detail::format_double(entry.max_rel_err) << " checked "
        << entry.checked << "\n";
  }
  out << "total max_rel_err " << detail::format_double(report.max_rel_err)
      << " coords " << report.coords_checked << "\n";
  finish_output(out, path);
  return report;
}

}  // namespace tssnet
