#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "tssnet/tensor.hpp"

namespace tssnet {

// Gradients coming out of one layer's backward pass: the gradient with
// respect to the layer input plus one tensor per parameter, in the layer's
// parameter order.
struct GradientBundle {
  Tensor input;
  std::vector<Tensor> params;
};

enum class ConvPadding {
  valid,      // output shrinks by kernel-1 per axis; kernel must fit
  same_zero,  // zero padded so the output keeps the input plane size
};

// 2D cross-correlation over a channels x H x W volume, stride 1.
// weight is kernels x channels x kh x kw, bias one value per kernel.
// same_zero splits padding floor/ceil with the extra column or row on the
// trailing side.
struct Conv2dLayer {
  Tensor weight;
  Tensor bias;
  ConvPadding padding = ConvPadding::valid;

  std::size_t kernel_count() const { return weight.dim(0); }
  std::size_t in_channels() const { return weight.dim(1); }
  std::size_t kernel_h() const { return weight.dim(2); }
  std::size_t kernel_w() const { return weight.dim(3); }
};

Conv2dLayer make_conv2d(std::size_t kernels, std::size_t channels,
                        std::size_t kernel_h, std::size_t kernel_w,
                        ConvPadding padding);

Tensor conv2d_forward(const Conv2dLayer& layer, const Tensor& input);
// `input` must be the exact tensor the forward pass saw (StaleCache
// otherwise); params come back as {d weight, d bias}.
GradientBundle conv2d_backward(const Conv2dLayer& layer, const Tensor& input,
                               const Tensor& grad_output);

// Max pooling over channels x H x W. Windows start every stride_h/stride_w
// and are clipped to the plane, so trailing partial windows pool over their
// actual extent. Pool dims must not exceed the plane dims.
struct MaxPool2dLayer {
  std::size_t pool_h = 2;
  std::size_t pool_w = 2;
  std::size_t stride_h = 2;  // defaults give non-overlapping windows
  std::size_t stride_w = 2;
};

// Flat input index of every output cell's maximum; ties keep the lowest
// flat index, which makes backprop routing deterministic.
struct ArgmaxRecord {
  Tensor::Shape input_shape;
  Tensor::Shape output_shape;
  std::vector<std::size_t> argmax;
};

Tensor maxpool2d_forward(const MaxPool2dLayer& layer, const Tensor& input,
                         ArgmaxRecord* record = nullptr);
GradientBundle maxpool2d_backward(const MaxPool2dLayer& layer,
                                  const ArgmaxRecord& record,
                                  const Tensor& grad_output);

// Fully connected map of a flat vector: out = weight * in + bias.
struct DenseLayer {
  Tensor weight;  // out x in
  Tensor bias;    // out
};

DenseLayer make_dense(std::size_t out_dim, std::size_t in_dim);

Tensor dense_forward(const DenseLayer& layer, const Tensor& input);
GradientBundle dense_backward(const DenseLayer& layer, const Tensor& input,
                              const Tensor& grad_output);

// Glorot-uniform init: weights ~ U(-a, a) with a = sqrt(6 / (fan_in +
// fan_out)), biases zero. Draw order is fixed, so one seeded engine gives
// bit-identical parameters run to run.
void glorot_fill(Tensor& weight, std::size_t fan_in, std::size_t fan_out,
                 std::mt19937_64& rng);
void init_conv(Conv2dLayer& layer, std::mt19937_64& rng);
void init_dense(DenseLayer& layer, std::mt19937_64& rng);

}  // namespace tssnet
