#include "tssnet/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <utility>

#include "json.hpp"
#include "seed.hpp"
#include "tssnet/baselines.hpp"
#include "tssnet/errors.hpp"

namespace tssnet {

namespace {

void check_train_config(const TrainConfig& config) {
  if (!(config.lr > 0.0) || config.lr > 0.01) {
    throw InvalidConfig("learning rate must lie in (0, 0.01], got " +
                        std::to_string(config.lr));
  }
  if (!(config.clip_threshold > 0.0)) {
    throw InvalidConfig("clip threshold must be positive");
  }
  if (config.batch_size == 0) {
    throw InvalidConfig("batch size must be at least 1");
  }
  if (config.max_epochs == 0) {
    throw InvalidConfig("epoch budget must be at least 1");
  }
}

void check_dataset(const WindowedDataset& set, const char* label) {
  if (set.size() == 0) {
    throw EmptyInput(std::string(label) + " set has no samples");
  }
  if (set.inputs.size() != set.targets.size()) {
    throw ShapeMismatch(std::string(label) + " set has " +
                        std::to_string(set.inputs.size()) + " inputs but " +
                        std::to_string(set.targets.size()) + " targets");
  }
}

std::vector<std::vector<double>> snapshot_params(
    const std::vector<NamedParam>& params) {
  std::vector<std::vector<double>> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(p.value->values());
  return out;
}

void restore_params(const std::vector<NamedParam>& params,
                    const std::vector<std::vector<double>>& snapshot) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::copy(snapshot[i].begin(), snapshot[i].end(),
              params[i].value->data());
  }
}

// NaN (all-degenerate validation) never beats a real score and never
// replaces one; between two NaN epochs the earlier one stands.
bool better_corr(double candidate, double incumbent) {
  if (std::isnan(candidate)) return false;
  if (std::isnan(incumbent)) return true;
  return candidate > incumbent;
}

struct ValidScores {
  double corr = std::numeric_limits<double>::quiet_NaN();
  double rmse = 0.0;
};

ValidScores score_validation(const Model& model, const WindowedDataset& set,
                             CorrVariant variant) {
  std::vector<Tensor> predictions;
  predictions.reserve(set.size());
  for (const auto& input : set.inputs) predictions.push_back(model.predict(input));
  ValidScores scores;
  scores.rmse = rmse(set.targets, predictions);
  try {
    scores.corr = corr(set.targets, predictions, variant).value;
  } catch (const AllDegenerate&) {
    // leave NaN
  }
  return scores;
}

}  // namespace

TrainResult train(Model& model, const WindowedDataset& train_set,
                  const WindowedDataset& valid_set, const TrainConfig& config,
                  const StepObserver& observer) {
  check_train_config(config);
  check_dataset(train_set, "training");
  check_dataset(valid_set, "validation");

  std::vector<NamedParam> named = model.parameters();
  if (named.empty()) {
    throw InvalidConfig(std::string(model.kind()) +
                        " has no trainable parameters");
  }
  std::vector<Tensor*> params;
  params.reserve(named.size());
  for (auto& p : named) params.push_back(p.value);

  auto optimizer = make_optimizer(config.optimizer, config.lr);
  std::mt19937_64 shuffle_engine(config.seed);

  const std::size_t n = train_set.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  std::vector<std::vector<double>> best_snapshot;
  double best_corr = std::numeric_limits<double>::quiet_NaN();
  std::size_t best_epoch = 0;
  std::size_t epochs_since_best = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_engine);

    double epoch_loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, n - start);
      std::vector<Tensor> grads;
      double batch_loss_sum = 0.0;
      for (std::size_t j = 0; j < count; ++j) {
        const std::size_t sample = order[start + j];
        Tensor output({1});
        auto cache = model.forward(train_set.inputs[sample], output);
        LossResult loss = frobenius_loss(train_set.targets[sample], output);
        batch_loss_sum += loss.value;
        std::vector<Tensor> sample_grads = model.backward(*cache, loss.grad);
        if (grads.empty()) {
          grads = std::move(sample_grads);
        } else {
          for (std::size_t g = 0; g < grads.size(); ++g) {
            add_inplace(grads[g], sample_grads[g]);
          }
        }
      }
      const double batch_loss = batch_loss_sum / static_cast<double>(count);
      if (!std::isfinite(batch_loss)) {
        throw NonFiniteLoss("batch loss " + std::to_string(batch_loss) +
                            " at epoch " + std::to_string(epoch) + " batch " +
                            std::to_string(batch_index + 1));
      }
      for (auto& g : grads) scale_inplace(g, 1.0 / static_cast<double>(count));
      const double pre_clip = clip_gradients(grads, config.clip_threshold);
      optimizer->step(params, grads);
      epoch_loss_sum += batch_loss_sum;
      ++batch_index;
      if (observer) {
        StepInfo info;
        info.epoch = epoch;
        info.batch = batch_index;
        info.loss = batch_loss;
        info.grad_norm = pre_clip;
        info.clipped_norm = std::min(pre_clip, config.clip_threshold);
        observer(info);
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss_sum / static_cast<double>(n);
    ValidScores scores =
        score_validation(model, valid_set, config.corr_variant);
    stats.valid_corr = scores.corr;
    stats.valid_rmse = scores.rmse;
    result.history.push_back(stats);

    if (best_snapshot.empty() || better_corr(stats.valid_corr, best_corr)) {
      best_snapshot = snapshot_params(named);
      best_corr = stats.valid_corr;
      best_epoch = epoch;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
      if (config.patience > 0 && epochs_since_best >= config.patience) break;
    }
  }

  restore_params(named, best_snapshot);
  result.best_epoch = best_epoch;
  result.best_valid_corr = best_corr;
  result.epochs_run = result.history.size();
  return result;
}

namespace {

void check_search_space(const SearchSpace& space) {
  if (space.window_min == 0 || space.window_min > space.window_max) {
    throw InvalidConfig("window range [" + std::to_string(space.window_min) +
                        ", " + std::to_string(space.window_max) +
                        "] is empty");
  }
  if (space.stride_min == 0 || space.stride_min > space.stride_max) {
    throw InvalidConfig("stride range [" + std::to_string(space.stride_min) +
                        ", " + std::to_string(space.stride_max) +
                        "] is empty");
  }
  if (!(space.lr_min > 0.0) || space.lr_min > space.lr_max ||
      space.lr_max > 0.01) {
    throw InvalidConfig("learning-rate range must satisfy 0 < lo <= hi <= 0.01");
  }
  if (space.budget == 0) {
    throw InvalidConfig("search budget must be at least 1");
  }
}

struct TrialDraw {
  std::size_t window = 0;
  std::size_t stride = 0;
  double lr = 0.0;
  std::uint64_t model_seed = 0;
  std::uint64_t train_seed = 0;
};

// One engine per trial, seeded from (seed, trial), so a trial draws the
// same hyperparameters no matter which worker runs it or in what order.
TrialDraw draw_trial(const SearchSpace& space, std::uint64_t seed,
                     std::size_t trial) {
  std::mt19937_64 engine(detail::mix_seed(seed, trial));
  TrialDraw draw;
  draw.window = std::uniform_int_distribution<std::size_t>(
      space.window_min, space.window_max)(engine);
  draw.stride = std::uniform_int_distribution<std::size_t>(
      space.stride_min, space.stride_max)(engine);
  const double log_lr = std::uniform_real_distribution<double>(
      std::log(space.lr_min), std::log(space.lr_max))(engine);
  draw.lr = std::exp(log_lr);
  draw.model_seed = engine();
  draw.train_seed = engine();
  return draw;
}

}  // namespace

SearchResult hyper_search(const SearchSpace& space,
                          const TssNetConfig& base_model,
                          const TrainConfig& base_train,
                          const WindowedDataset& train_set,
                          const WindowedDataset& valid_set, std::uint64_t seed,
                          std::size_t jobs) {
  check_search_space(space);
  check_train_config(base_train);
  check_dataset(train_set, "training");
  check_dataset(valid_set, "validation");
  if (jobs == 0) throw InvalidConfig("jobs must be at least 1");

  SearchResult result;
  result.trials.assign(space.budget, TrialResult{});

  auto run_trial = [&](std::size_t trial) {
    const TrialDraw draw = draw_trial(space, seed, trial);
    TrialResult& out = result.trials[trial];
    out.trial = trial;
    out.window = draw.window;
    out.stride = draw.stride;
    out.lr = draw.lr;
    out.valid_corr = std::numeric_limits<double>::quiet_NaN();
    out.valid_rmse = std::numeric_limits<double>::quiet_NaN();
    try {
      TssNetConfig model_config = base_model;
      model_config.transform.window = draw.window;
      model_config.transform.stride = draw.stride;
      model_config.seed = draw.model_seed;
      TrainConfig train_config = base_train;
      train_config.lr = draw.lr;
      train_config.seed = draw.train_seed;
      // Trials are always ranked on the plain per-sample correlation.
      train_config.corr_variant = CorrVariant::pearson;

      TssNetModel model(model_config);
      TrainResult trained = train(model, train_set, valid_set, train_config);
      out.valid_corr = trained.best_valid_corr;
      out.valid_rmse = trained.history[trained.best_epoch - 1].valid_rmse;
      out.status = std::isnan(out.valid_corr)
                       ? "degenerate validation correlation"
                       : "ok";
    } catch (const Error& e) {
      out.status = e.what();
    }
  };

  if (jobs <= 1 || space.budget <= 1) {
    for (std::size_t trial = 0; trial < space.budget; ++trial) run_trial(trial);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t trial = next.fetch_add(1);
        if (trial >= space.budget) return;
        run_trial(trial);
      }
    };
    std::vector<std::thread> pool;
    const std::size_t threads = std::min(jobs, space.budget);
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }

  bool found = false;
  std::size_t best = 0;
  for (std::size_t trial = 0; trial < space.budget; ++trial) {
    const TrialResult& t = result.trials[trial];
    if (t.status != "ok") continue;
    if (!found) {
      best = trial;
      found = true;
      continue;
    }
    const TrialResult& b = result.trials[best];
    if (t.valid_corr > b.valid_corr ||
        (t.valid_corr == b.valid_corr && t.valid_rmse < b.valid_rmse)) {
      best = trial;
    }
  }
  if (!found) {
    throw AllTrialsFailed("all " + std::to_string(space.budget) +
                          " trials failed; first error: " +
                          result.trials.front().status);
  }

  const TrialDraw draw = draw_trial(space, seed, best);
  result.best_trial = best;
  result.best_model_config = base_model;
  result.best_model_config.transform.window = draw.window;
  result.best_model_config.transform.stride = draw.stride;
  result.best_model_config.seed = draw.model_seed;
  result.best_train_config = base_train;
  result.best_train_config.lr = draw.lr;
  result.best_train_config.seed = draw.train_seed;
  result.best_train_config.corr_variant = CorrVariant::pearson;
  return result;
}

GradCheckReport grad_check(Model& model, const Tensor& input,
                           const Tensor& target, double epsilon,
                           std::size_t max_coords, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw InvalidConfig("epsilon must be positive");
  std::vector<NamedParam> named = model.parameters();
  if (named.empty()) {
    throw InvalidConfig(std::string(model.kind()) +
                        " has no parameters to check");
  }

  Tensor output({1});
  auto cache = model.forward(input, output);
  LossResult loss = frobenius_loss(target, output);
  std::vector<Tensor> analytic = model.backward(*cache, loss.grad);

  auto loss_at = [&]() {
    return frobenius_loss(target, model.predict(input)).value;
  };

  // Global coordinate list as (param index, flat offset) pairs.
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t p = 0; p < named.size(); ++p) {
    for (std::size_t i = 0; i < named[p].value->size(); ++i) {
      coords.emplace_back(p, i);
    }
  }
  if (max_coords > 0 && coords.size() > max_coords) {
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    chosen.reserve(max_coords);
    std::mt19937_64 engine(seed);
    std::sample(coords.begin(), coords.end(), std::back_inserter(chosen),
                max_coords, engine);
    coords = std::move(chosen);
  }

  GradCheckReport report;
  report.params.resize(named.size());
  for (std::size_t p = 0; p < named.size(); ++p) {
    report.params[p].name = named[p].name;
  }
  for (const auto& [p, i] : coords) {
    double* slot = named[p].value->data() + i;
    const double saved = *slot;
    *slot = saved + epsilon;
    const double plus = loss_at();
    *slot = saved - epsilon;
    const double minus = loss_at();
    *slot = saved;
    const double numeric = (plus - minus) / (2.0 * epsilon);
    const double exact = analytic[p][i];
    const double rel = std::abs(exact - numeric) /
                       std::max(1.0, std::abs(exact) + std::abs(numeric));
    GradCheckEntry& entry = report.params[p];
    entry.max_rel_err = std::max(entry.max_rel_err, rel);
    ++entry.checked;
    report.max_rel_err = std::max(report.max_rel_err, rel);
    ++report.coords_checked;
  }
  return report;
}

namespace {

using nlohmann::json;

json transform_to_json(const TemporalTensorConfig& cfg) {
  json j;
  j["window"] = cfg.window;
  j["stride"] = cfg.stride;
  j["dilation"] = cfg.dilation;
  j["padding"] = cfg.padding;
  j["padding_mode"] = padding_mode_name(cfg.padding_mode);
  j["local_mean_k"] = cfg.local_mean_k;
  j["slice_mode"] = slice_mode_name(cfg.slice_mode);
  return j;
}

TemporalTensorConfig transform_from_json(const json& j) {
  TemporalTensorConfig cfg;
  cfg.window = j.at("window").get<std::size_t>();
  cfg.stride = j.at("stride").get<std::size_t>();
  cfg.dilation = j.at("dilation").get<std::size_t>();
  cfg.padding = j.at("padding").get<std::size_t>();
  cfg.padding_mode = parse_padding_mode(j.at("padding_mode").get<std::string>());
  cfg.local_mean_k = j.at("local_mean_k").get<std::size_t>();
  cfg.slice_mode = parse_slice_mode(j.at("slice_mode").get<std::string>());
  return cfg;
}

json arch_to_json(const Model& model) {
  json arch;
  arch["kind"] = model.kind();
  if (const auto* net = dynamic_cast<const TssNetModel*>(&model)) {
    const TssNetConfig& cfg = net->config();
    arch["features"] = cfg.features;
    arch["input_length"] = cfg.input_length;
    arch["horizon"] = cfg.horizon;
    arch["transform"] = transform_to_json(cfg.transform);
    arch["kernel_width"] = cfg.kernel_width;
    arch["kernel_height_mode"] =
        TssNetModel::kernel_height_mode_name(cfg.kernel_height_mode);
    arch["kernel_height"] = cfg.kernel_height;
    arch["hidden_multiplier"] = cfg.hidden_multiplier;
  } else if (const auto* cnn = dynamic_cast<const Cnn1dBaseline*>(&model)) {
    const Cnn1dConfig& cfg = cnn->config();
    arch["features"] = cfg.features;
    arch["input_length"] = cfg.input_length;
    arch["horizon"] = cfg.horizon;
    arch["kernel_height"] = cfg.kernel_height;
    arch["kernel_width"] = cfg.kernel_width;
    arch["hidden_multiplier"] = cfg.hidden_multiplier;
  } else if (const auto* pers = dynamic_cast<const PersistenceModel*>(&model)) {
    const PersistenceConfig& cfg = pers->config();
    arch["features"] = cfg.features;
    arch["input_length"] = cfg.input_length;
    arch["horizon"] = cfg.horizon;
    arch["mode"] = persistence_mode_name(cfg.mode);
    arch["period"] = cfg.period;
  } else {
    throw InvalidConfig(std::string("cannot checkpoint model kind ") +
                        model.kind());
  }
  return arch;
}

std::uint64_t model_seed_of(const Model& model) {
  if (const auto* net = dynamic_cast<const TssNetModel*>(&model)) {
    return net->config().seed;
  }
  if (const auto* cnn = dynamic_cast<const Cnn1dBaseline*>(&model)) {
    return cnn->config().seed;
  }
  return 0;
}

std::unique_ptr<Model> model_from_arch(const json& arch, std::uint64_t seed) {
  const std::string kind = arch.at("kind").get<std::string>();
  if (kind == "tssnet") {
    TssNetConfig cfg;
    cfg.features = arch.at("features").get<std::size_t>();
    cfg.input_length = arch.at("input_length").get<std::size_t>();
    cfg.horizon = arch.at("horizon").get<std::size_t>();
    cfg.transform = transform_from_json(arch.at("transform"));
    cfg.kernel_width = arch.at("kernel_width").get<std::size_t>();
    cfg.kernel_height_mode = TssNetModel::parse_kernel_height_mode(
        arch.at("kernel_height_mode").get<std::string>());
    cfg.kernel_height = arch.at("kernel_height").get<std::size_t>();
    cfg.hidden_multiplier = arch.at("hidden_multiplier").get<std::size_t>();
    cfg.seed = seed;
    return std::make_unique<TssNetModel>(cfg);
  }
  if (kind == "cnn1d") {
    Cnn1dConfig cfg;
    cfg.features = arch.at("features").get<std::size_t>();
    cfg.input_length = arch.at("input_length").get<std::size_t>();
    cfg.horizon = arch.at("horizon").get<std::size_t>();
    cfg.kernel_height = arch.at("kernel_height").get<std::size_t>();
    cfg.kernel_width = arch.at("kernel_width").get<std::size_t>();
    cfg.hidden_multiplier = arch.at("hidden_multiplier").get<std::size_t>();
    cfg.seed = seed;
    return std::make_unique<Cnn1dBaseline>(cfg);
  }
  if (kind == "persistence") {
    PersistenceConfig cfg;
    cfg.features = arch.at("features").get<std::size_t>();
    cfg.input_length = arch.at("input_length").get<std::size_t>();
    cfg.horizon = arch.at("horizon").get<std::size_t>();
    cfg.mode = parse_persistence_mode(arch.at("mode").get<std::string>());
    cfg.period = arch.at("period").get<std::size_t>();
    return std::make_unique<PersistenceModel>(cfg);
  }
  throw CorruptCheckpoint("unknown model kind \"" + kind + "\"");
}

}  // namespace

void save_checkpoint(Model& model, const std::optional<ScalerRecord>& scaler,
                     const std::string& path) {
  json j;
  j["version"] = kCheckpointVersion;
  j["seed"] = model_seed_of(model);
  j["arch"] = arch_to_json(model);
  json params = json::array();
  for (const NamedParam& p : model.parameters()) {
    json entry;
    entry["name"] = p.name;
    entry["shape"] = p.value->shape();
    entry["values"] = p.value->values();
    params.push_back(std::move(entry));
  }
  j["params"] = std::move(params);
  if (scaler) {
    json s;
    s["method"] = scale_method_name(scaler->method);
    s["scale"] = scaler->scale;
    s["offset"] = scaler->offset;
    j["scaler"] = std::move(s);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(1, '\t') << '\n';
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

LoadedModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CorruptCheckpoint(path + ": " + e.what());
  }

  if (!j.is_object() || !j.contains("version") || !j["version"].is_string()) {
    throw CorruptCheckpoint(path + ": missing version field");
  }
  const std::string version = j["version"].get<std::string>();
  if (version != kCheckpointVersion) {
    throw VersionMismatch(path + ": version \"" + version + "\", expected \"" +
                          kCheckpointVersion + "\"");
  }

  LoadedModel loaded;
  try {
    const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
    loaded.model = model_from_arch(j.at("arch"), seed);

    std::vector<NamedParam> named = loaded.model->parameters();
    const json& params = j.at("params");
    if (!params.is_array() || params.size() != named.size()) {
      throw CorruptCheckpoint(path + ": expected " +
                              std::to_string(named.size()) + " parameters");
    }
    for (std::size_t i = 0; i < named.size(); ++i) {
      const json& entry = params.at(i);
      if (entry.at("name").get<std::string>() != named[i].name) {
        throw CorruptCheckpoint(path + ": parameter " + std::to_string(i) +
                                " is \"" +
                                entry.at("name").get<std::string>() +
                                "\", expected \"" + named[i].name + "\"");
      }
      const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
      if (shape != named[i].value->shape()) {
        throw CorruptCheckpoint(path + ": parameter \"" + named[i].name +
                                "\" has the wrong shape");
      }
      const auto values = entry.at("values").get<std::vector<double>>();
      if (values.size() != named[i].value->size()) {
        throw CorruptCheckpoint(path + ": parameter \"" + named[i].name +
                                "\" has the wrong value count");
      }
      std::copy(values.begin(), values.end(), named[i].value->data());
    }

    if (j.contains("scaler") && !j["scaler"].is_null()) {
      const json& s = j.at("scaler");
      ScalerRecord record;
      record.method = parse_scale_method(s.at("method").get<std::string>());
      record.scale = s.at("scale").get<std::vector<double>>();
      record.offset = s.at("offset").get<std::vector<double>>();
      if (record.scale.size() != record.offset.size()) {
        throw CorruptCheckpoint(path + ": scaler arrays disagree in length");
      }
      loaded.scaler = std::move(record);
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw CorruptCheckpoint(path + ": " + e.what());
  }
  return loaded;
}

}  // namespace tssnet
