#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tssnet/data.hpp"
#include "tssnet/metrics.hpp"
#include "tssnet/model.hpp"
#include "tssnet/optim.hpp"

namespace tssnet {

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::adam;
  double lr = 1e-3;             // must lie in (0, 0.01]
  double clip_threshold = 10.0; // joint L2 clip on all gradients
  std::size_t batch_size = 32;
  std::size_t max_epochs = 100;
  std::size_t patience = 0;     // epochs without a better valid corr; 0 = off
  std::uint64_t seed = 42;      // drives the epoch shuffles
  CorrVariant corr_variant = CorrVariant::pearson;
};

struct EpochStats {
  std::size_t epoch = 0;      // 1-based
  double train_loss = 0.0;    // mean per-sample squared Frobenius loss
  double valid_corr = 0.0;    // NaN when every validation sample degenerate
  double valid_rmse = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> history;
  std::size_t best_epoch = 0;
  double best_valid_corr = 0.0;
  std::size_t epochs_run = 0;
};

// Called after every optimizer step; loss is the batch mean, grad_norm the
// pre-clip joint norm, clipped_norm the norm actually applied.
struct StepInfo {
  std::size_t epoch = 0;
  std::size_t batch = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  double clipped_norm = 0.0;
};
using StepObserver = std::function<void(const StepInfo&)>;

// Mini-batch training with shuffled epochs, joint-norm clipping and best
// validation-corr selection: when training ends (epoch budget or
// patience), the model carries the parameters of the best validation
// epoch, and history records the whole trajectory. Fully deterministic
// for a fixed seed. A non-finite batch loss aborts with NonFiniteLoss.
TrainResult train(Model& model, const WindowedDataset& train_set,
                  const WindowedDataset& valid_set, const TrainConfig& config,
                  const StepObserver& observer = {});

// Random hyperparameter search over the transform window/stride and the
// learning rate (log-uniform). Each trial gets its own seed derived from
// (seed, trial index), so trials are schedule independent and the whole
// search is reproducible. Trials that fail to build or train are logged
// with their error and skipped; every trial failing raises
// AllTrialsFailed. Ties on valid corr break to lower valid rmse, then to
// the earlier trial.
struct SearchSpace {
  std::size_t window_min = 5;
  std::size_t window_max = 10;
  std::size_t stride_min = 1;
  std::size_t stride_max = 5;
  double lr_min = 1e-4;  // log-uniform lower edge, must be positive
  double lr_max = 0.01;
  std::size_t budget = 100;
};

struct TrialResult {
  std::size_t trial = 0;
  std::size_t window = 0;
  std::size_t stride = 0;
  double lr = 0.0;
  double valid_corr = 0.0;
  double valid_rmse = 0.0;
  std::string status;  // "ok" or the error text
};

struct SearchResult {
  std::vector<TrialResult> trials;
  std::size_t best_trial = 0;
  TssNetConfig best_model_config;
  TrainConfig best_train_config;
};

SearchResult hyper_search(const SearchSpace& space,
                          const TssNetConfig& base_model,
                          const TrainConfig& base_train,
                          const WindowedDataset& train_set,
                          const WindowedDataset& valid_set, std::uint64_t seed,
                          std::size_t jobs = 1);

// Central-difference audit of the analytic gradients on one sample.
// Relative error per coordinate: |analytic - numeric| / max(1, |analytic|
// + |numeric|). With max_coords > 0 and more coordinates than that, a
// seeded subsample is checked instead of every coordinate.
struct GradCheckEntry {
  std::string name;
  double max_rel_err = 0.0;
  std::size_t checked = 0;
};

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::size_t coords_checked = 0;
  std::vector<GradCheckEntry> params;
};

GradCheckReport grad_check(Model& model, const Tensor& input,
                           const Tensor& target, double epsilon = 1e-5,
                           std::size_t max_coords = 0, std::uint64_t seed = 0);

// Checkpoints are JSON with full-precision decimal parameter values, so a
// save/load round trip reproduces predictions bit for bit. The scaler
// that preprocessed the training data rides along. Unknown version string
// raises VersionMismatch; structural damage raises CorruptCheckpoint.
inline constexpr const char* kCheckpointVersion = "tssnet-ckpt-1";

void save_checkpoint(Model& model, const std::optional<ScalerRecord>& scaler,
                     const std::string& path);

struct LoadedModel {
  std::unique_ptr<Model> model;
  std::optional<ScalerRecord> scaler;
};

LoadedModel load_checkpoint(const std::string& path);

}  // namespace tssnet
