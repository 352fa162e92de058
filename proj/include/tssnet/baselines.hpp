#pragma once

#include <cstdint>
#include <string>

#include "tssnet/model.hpp"

namespace tssnet {

// Reference CNN that skips the slicing stack: the raw m x T block is
// treated as a one-channel image, then one convolution + pool stage and
// two dense layers. Same no-activation policy as TssNetModel so the
// comparison isolates the transform.
struct Cnn1dConfig {
  std::size_t features = 1;
  std::size_t input_length = 168;
  std::size_t horizon = 15;
  std::size_t kernel_height = 0;  // rows covered per kernel; 0 means all m
  std::size_t kernel_width = 3;   // time steps covered per kernel
  std::size_t hidden_multiplier = 2;
  std::uint64_t seed = 42;
};

class Cnn1dBaseline final : public Model {
 public:
  explicit Cnn1dBaseline(const Cnn1dConfig& config);

  const char* kind() const override { return "cnn1d"; }
  ModelDims dims() const override;
  std::vector<NamedParam> parameters() override;

  Tensor predict(const Tensor& input) const override;
  std::unique_ptr<ForwardCache> forward(const Tensor& input,
                                        Tensor& output) const override;
  std::vector<Tensor> backward(const ForwardCache& cache,
                               const Tensor& grad_output) const override;

  const Cnn1dConfig& config() const { return config_; }
  const Conv2dLayer& conv() const { return conv_; }

 private:
  struct Cache;
  Tensor run_forward(const Tensor& input, Cache* cache) const;

  Cnn1dConfig config_;
  Conv2dLayer conv_;
  MaxPool2dLayer pool_;
  DenseLayer fc1_;
  DenseLayer out_;
};

enum class PersistenceMode { last_value, seasonal };

PersistenceMode parse_persistence_mode(const std::string& name);
const char* persistence_mode_name(PersistenceMode mode);

// Parameter-free reference: repeat the last column, or tile the last
// `period` columns cyclically. Training does not apply.
struct PersistenceConfig {
  std::size_t features = 1;
  std::size_t input_length = 168;
  std::size_t horizon = 15;
  PersistenceMode mode = PersistenceMode::last_value;
  std::size_t period = 24;  // seasonal mode only; must be <= input_length
};

class PersistenceModel final : public Model {
 public:
  explicit PersistenceModel(const PersistenceConfig& config);

  const char* kind() const override { return "persistence"; }
  ModelDims dims() const override;
  std::vector<NamedParam> parameters() override { return {}; }

  Tensor predict(const Tensor& input) const override;
  std::unique_ptr<ForwardCache> forward(const Tensor& input,
                                        Tensor& output) const override;
  std::vector<Tensor> backward(const ForwardCache& cache,
                               const Tensor& grad_output) const override;

  const PersistenceConfig& config() const { return config_; }

 private:
  PersistenceConfig config_;
};

}  // namespace tssnet
