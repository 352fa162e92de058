#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tssnet/baselines.hpp"
#include "tssnet/data.hpp"
#include "tssnet/metrics.hpp"
#include "tssnet/model.hpp"
#include "tssnet/training.hpp"

namespace tssnet {

// Flat key/value run configuration. Every key the toolkit understands is
// preregistered with its default; setting or reading an unknown key is an
// error, which catches typos in config files and --set flags early.
// Values are kept as strings and parsed by the typed getters on use.
class RunConfig {
 public:
  RunConfig();  // defaults for every known key

  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  bool is_known(const std::string& key) const;

  // Reads `key = value` lines; blank lines and '#' comments are skipped.
  void load_file(const std::string& path);

  std::string get_string(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  std::uint64_t get_uint64(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::vector<std::size_t> get_size_list(const std::string& key) const;

  // Sorted `key = value` lines, one per entry; written as comments into
  // every output file so results stay attributable to their settings.
  std::vector<std::string> echo() const;
  // FNV-1a 64 over the echo, hex encoded.
  std::string fingerprint() const;

 private:
  std::map<std::string, std::string> entries_;
};

// Series acquisition: data.csv when set, the synthetic generator
// otherwise. The label is the CSV stem or the synth function name unless
// report.dataset overrides it.
SeriesMatrix open_series(const RunConfig& config);
std::string dataset_label(const RunConfig& config);

struct PreparedData {
  SeriesMatrix scaled;  // whole series after scaling
  ScalerRecord scaler;
  WindowedDataset train;
  WindowedDataset valid;
  WindowedDataset test;
};

// Scale (fitted on the train share only, or with the forced record when
// given), split chronologically, and window each part.
PreparedData prepare_data(const RunConfig& config, const SeriesMatrix& raw,
                          const ScalerRecord* forced_scaler = nullptr);

TssNetConfig tssnet_config_from(const RunConfig& config, std::size_t features);
Cnn1dConfig cnn1d_config_from(const RunConfig& config, std::size_t features);
PersistenceConfig persistence_config_from(const RunConfig& config,
                                          std::size_t features);
TrainConfig train_config_from(const RunConfig& config);
SearchSpace search_space_from(const RunConfig& config);

// Builds the model named by the `model` key for an m-feature series.
std::unique_ptr<Model> build_model(const RunConfig& config,
                                   std::size_t features);

// End-to-end drivers. Each writes its artifacts under out_dir (which must
// already exist) and returns the in-memory result. File names are fixed:
// series.csv, acf.csv, checkpoint.json + history.csv, report.csv,
// prediction.csv, featuremap_k<i>.csv/.pgm, trials.csv +
// best_checkpoint.json, sweep.csv, gradcheck.txt.
SeriesMatrix run_synth(const RunConfig& config, const std::string& out_dir);

std::vector<double> run_acf(const RunConfig& config,
                            const std::string& out_dir);

TrainResult run_train(const RunConfig& config, const std::string& out_dir);

// checkpoint_path may be empty: the model is then built fresh from the
// config, which is the normal route for the parameter-free baseline.
// split selects train, valid or test windows.
EvalReport run_evaluate(const RunConfig& config,
                        const std::string& checkpoint_path,
                        const std::string& split, const std::string& out_dir);

// Feeds the model the last input_length columns and writes the
// inverse-scaled forecast as time-as-rows CSV.
Tensor run_predict(const RunConfig& config, const std::string& checkpoint_path,
                   const std::string& out_dir);

// First-stage convolution maps for one input window, one CSV and one PGM
// per kernel. Returns the number of kernels written.
std::size_t run_featuremap(const RunConfig& config,
                           const std::string& checkpoint_path,
                           const std::string& out_dir);

SearchResult run_search(const RunConfig& config, const std::string& out_dir);

std::vector<EvalReport> run_sweep(const RunConfig& config,
                                  const std::string& out_dir);

GradCheckReport run_gradcheck(const RunConfig& config,
                              const std::string& out_dir);

}  // namespace tssnet
