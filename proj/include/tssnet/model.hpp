#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tssnet/layers.hpp"
#include "tssnet/tensor.hpp"
#include "tssnet/transform.hpp"

namespace tssnet {

struct NamedParam {
  std::string name;
  Tensor* value;
};

struct ModelDims {
  std::size_t features = 0;      // m
  std::size_t input_length = 0;  // columns consumed per prediction
  std::size_t horizon = 0;       // columns predicted
};

// Per-model forward state kept for the matching backward() call.
struct ForwardCache {
  virtual ~ForwardCache() = default;
};

// Common surface for every forecaster in the toolkit. predict maps an
// m x input_length block to an m x horizon block. Trainable models expose
// their parameters and a forward/backward pair; parameter-free models
// return an empty parameter list.
class Model {
 public:
  virtual ~Model() = default;

  virtual const char* kind() const = 0;
  virtual ModelDims dims() const = 0;
  virtual std::vector<NamedParam> parameters() = 0;

  virtual Tensor predict(const Tensor& input) const = 0;
  virtual std::unique_ptr<ForwardCache> forward(const Tensor& input,
                                                Tensor& output) const = 0;
  // Gradients come back aligned with parameters().
  virtual std::vector<Tensor> backward(const ForwardCache& cache,
                                       const Tensor& grad_output) const = 0;
};

// How much of the stack axis one conv kernel covers: the whole stack
// (valid convolution, collapses the stack axis to extent 1) or a fixed
// number of slices with same-zero padding (keeps the window x stack
// plane size, which is what the feature-map study wants).
enum class KernelHeightMode { full_stack, fixed };

struct TssNetConfig {
  std::size_t features = 1;
  std::size_t input_length = 168;
  std::size_t horizon = 15;
  TemporalTensorConfig transform;
  std::size_t kernel_width = 3;  // taps along the window axis, must be <= window
  KernelHeightMode kernel_height_mode = KernelHeightMode::full_stack;
  std::size_t kernel_height = 3;  // stack-axis extent in fixed mode
  std::size_t hidden_multiplier = 2;  // fc1 width = multiplier * m * horizon
  std::uint64_t seed = 42;
};

// Forecaster over the temporal slicing stack: transform, two
// convolution + max-pool stages, then two dense layers. Deliberately no
// activation function anywhere; the network is affine end to end and the
// convolution stages do the feature extraction.
class TssNetModel final : public Model {
 public:
  explicit TssNetModel(const TssNetConfig& config);

  const char* kind() const override { return "tssnet"; }
  ModelDims dims() const override;
  std::vector<NamedParam> parameters() override;

  Tensor predict(const Tensor& input) const override;
  std::unique_ptr<ForwardCache> forward(const Tensor& input,
                                        Tensor& output) const override;
  std::vector<Tensor> backward(const ForwardCache& cache,
                               const Tensor& grad_output) const override;

  // Post-conv1 activation planes for one input, one per kernel, in the
  // window x stack orientation. No pooling, no reshaping.
  std::vector<Tensor> capture_feature_maps(const Tensor& input) const;

  const TssNetConfig& config() const { return config_; }
  std::size_t slices() const { return slices_; }  // stack height o

  const Conv2dLayer& conv1() const { return conv1_; }
  const Conv2dLayer& conv2() const { return conv2_; }
  const MaxPool2dLayer& pool1() const { return pool1_; }
  const MaxPool2dLayer& pool2() const { return pool2_; }
  const DenseLayer& fc1() const { return fc1_; }
  const DenseLayer& output_layer() const { return out_; }

  static KernelHeightMode parse_kernel_height_mode(const std::string& name);
  static const char* kernel_height_mode_name(KernelHeightMode mode);

 private:
  struct Cache;

  Tensor run_forward(const Tensor& input, Cache* cache,
                     std::vector<Tensor>* maps) const;
  void check_input(const Tensor& input) const;

  TssNetConfig config_;
  std::size_t slices_ = 0;
  Conv2dLayer conv1_;
  MaxPool2dLayer pool1_;
  Conv2dLayer conv2_;
  MaxPool2dLayer pool2_;
  DenseLayer fc1_;
  DenseLayer out_;
};

}  // namespace tssnet
