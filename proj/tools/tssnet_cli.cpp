// Command line front end for the forecasting toolkit. Only the C API is
// used here, so the binary doubles as a living example of driving the
// shared library from another language.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tssnet/tssnet.h"

namespace {

struct ConfigDeleter {
  void operator()(tssnet_config* config) const { tssnet_config_free(config); }
};
using ConfigHandle = std::unique_ptr<tssnet_config, ConfigDeleter>;

int runtime_failure(tssnet_status status) {
  std::cerr << "error: " << tssnet_last_error() << " ["
            << tssnet_status_name(status) << "]\n";
  return 2;
}

int usage_failure(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 1;
}

std::string format_value(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal-slicing forecaster: transform studies, training, "
               "baselines and reports"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::string data_file;
  std::string seed_value;
  std::string jobs_value;
  app.add_option("--config", config_file, "config file with key = value lines");
  app.add_option("--set", overrides, "override one config key, key=value")
      ->take_all();
  app.add_option("--out", out_dir, "output directory (created when missing)");
  app.add_option("--data", data_file, "shorthand for --set data.csv=FILE");
  app.add_option("--seed", seed_value, "shorthand for --set seed=N");
  app.add_option("--jobs", jobs_value, "shorthand for --set jobs=N");

  std::string checkpoint;
  std::string split = "test";

  CLI::App* synth = app.add_subcommand("synth", "write the configured synthetic series");
  CLI::App* acf = app.add_subcommand("acf", "autocorrelation of one feature");
  CLI::App* train = app.add_subcommand("train", "fit the configured model, save checkpoint and history");
  CLI::App* evaluate = app.add_subcommand("evaluate", "score a model on one split");
  evaluate->add_option("--checkpoint", checkpoint, "checkpoint to load (fresh model otherwise)");
  evaluate->add_option("--split", split, "train, valid or test")
      ->check(CLI::IsMember({"train", "valid", "test"}));
  CLI::App* predict = app.add_subcommand("predict", "forecast past the end of the series");
  predict->add_option("--checkpoint", checkpoint, "checkpoint to load (fresh model otherwise)");
  CLI::App* featuremap = app.add_subcommand("featuremap", "first-stage convolution maps for one window");
  featuremap->add_option("--checkpoint", checkpoint, "checkpoint to load (fresh model otherwise)");
  CLI::App* search = app.add_subcommand("search", "random hyperparameter search");
  CLI::App* sweep = app.add_subcommand("sweep", "score every input-length x horizon pair");
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "numeric audit of the analytic gradients");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  ConfigHandle config(tssnet_config_new());
  if (!config) return usage_failure("out of memory");

  tssnet_status status = TSSNET_OK;
  if (!config_file.empty()) {
    status = tssnet_config_load_file(config.get(), config_file.c_str());
    if (status != TSSNET_OK) return runtime_failure(status);
  }
  if (!data_file.empty()) {
    status = tssnet_config_set(config.get(), "data.csv", data_file.c_str());
    if (status != TSSNET_OK) return runtime_failure(status);
  }
  if (!seed_value.empty()) {
    status = tssnet_config_set(config.get(), "seed", seed_value.c_str());
    if (status != TSSNET_OK) return runtime_failure(status);
  }
  if (!jobs_value.empty()) {
    status = tssnet_config_set(config.get(), "jobs", jobs_value.c_str());
    if (status != TSSNET_OK) return runtime_failure(status);
  }
  for (const std::string& entry : overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      return usage_failure("--set expects key=value, got '" + entry + "'");
    }
    const std::string key = entry.substr(0, eq);
    const std::string value = entry.substr(eq + 1);
    status = tssnet_config_set(config.get(), key.c_str(), value.c_str());
    if (status != TSSNET_OK) return runtime_failure(status);
  }

  std::error_code fs_error;
  std::filesystem::create_directories(out_dir, fs_error);
  if (fs_error) {
    return usage_failure("cannot create output directory '" + out_dir +
                         "': " + fs_error.message());
  }

  if (synth->parsed()) {
    status = tssnet_run_synth(config.get(), out_dir.c_str());
    if (status != TSSNET_OK) return runtime_failure(status);
    std::cout << "wrote " << out_dir << "/series.csv\n";
    return 0;
  }

  if (acf->parsed()) {
    status = tssnet_run_acf(config.get(), out_dir.c_str());
    if (status != TSSNET_OK) return runtime_failure(status);
    std::cout << "wrote " << out_dir << "/acf.csv\n";
    return 0;
  }

  if (train->parsed()) {
    double best_corr = 0.0;
    size_t epochs = 0;
    status = tssnet_run_train(config.get(), out_dir.c_str(), &best_corr, &epochs);
    if (status != TSSNET_OK) return runtime_failure(status);
    std::cout << "trained " << epochs << " epochs, best valid corr "
              << format_value(best_corr) << "\n"
              << "wrote " << out_dir << "/checkpoint.json and " << out_dir
              << "/history.csv\n";
    return 0;
  }

  if (evaluate->parsed()) {
    double rmse = 0.0, corr = 0.0;
    status = tssnet_run_evaluate(config.get(), checkpoint.c_str(),
                                 split.c_str(), out_dir.c_str(), &rmse, &corr);
    if (status != TSSNET_OK) return runtime_failure(status);
    std::cout << "split " << split << " rmse " << format_value(rmse)
              << " corr " << format_value(corr) << "\n"
              << "wrote " << out_dir << "/report.csv\n";
    return 0;
  }

  if (predict->parsed()) {
    status = tssnet_run_predict(config.get(), checkpoint.c_str(), out_dir.c_str());
    if (status != TSSNET_OK) return runtime_failure(status);
    std::cout << "wrote " << out_dir << "/prediction.csv\n";
    return 0;
  }

  if (featuremap->parsed()) {
    size_t kernels = 0;
    status = tssnet_run_featuremap(config.get(), checkpoint.c_str(),
                                   out_dir.c_str(), &kernels);
    if (status != TSSNET_OK) return runtime_failure(status);
    std::cout << "wrote " << kernels << " feature maps under " << out_dir
              << "\n";
    return 0;
  }

  if (search->parsed()) {
    size_t best_trial = 0;
    double best_corr = 0.0;
    status = tssnet_run_search(config.get(), out_dir.c_str(), &best_trial,
                               &best_corr);
    if (status != TSSNET_OK) return runtime_failure(status);
    std::cout << "best trial " << best_trial << " valid corr "
              << format_value(best_corr) << "\n"
              << "wrote " << out_dir << "/trials.csv and " << out_dir
              << "/best_checkpoint.json\n";
    return 0;
  }

  if (sweep->parsed()) {
    size_t rows = 0;
    status = tssnet_run_sweep(config.get(), out_dir.c_str(), &rows);
    if (status != TSSNET_OK) return runtime_failure(status);
    std::cout << "wrote " << rows << " rows to " << out_dir << "/sweep.csv\n";
    return 0;
  }

  if (gradcheck->parsed()) {
    double max_rel_err = 0.0;
    status = tssnet_run_gradcheck(config.get(), out_dir.c_str(), &max_rel_err);
    if (status != TSSNET_OK) return runtime_failure(status);
    std::cout << "max relative error " << format_value(max_rel_err) << "\n"
              << "wrote " << out_dir << "/gradcheck.txt\n";
    return 0;
  }

  return usage_failure("no subcommand given");
}
