#include "tssnet/layers.hpp"

#include <cmath>
#include <string>

#include "tssnet/errors.hpp"

namespace tssnet {

namespace {

void check_volume(const Tensor& input, const char* what) {
  if (input.rank() != 3) {
    throw ShapeMismatch(std::string(what) +
                        " expects a channels x height x width volume");
  }
}

struct PadSplit {
  std::size_t before = 0;
  std::size_t after = 0;
};

// same_zero split: floor before, remainder after, so the extra line of
// padding lands on the trailing side.
PadSplit same_split(std::size_t kernel) {
  PadSplit s;
  s.before = (kernel - 1) / 2;
  s.after = (kernel - 1) - s.before;
  return s;
}

Tensor zero_pad(const Tensor& input, const PadSplit& ph, const PadSplit& pw) {
  if (ph.before + ph.after + pw.before + pw.after == 0) return input;
  const std::size_t c = input.dim(0), h = input.dim(1), w = input.dim(2);
  Tensor out({c, h + ph.before + ph.after, w + pw.before + pw.after});
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        out(ch, y + ph.before, x + pw.before) = input(ch, y, x);
      }
    }
  }
  return out;
}

}  // namespace

Conv2dLayer make_conv2d(std::size_t kernels, std::size_t channels,
                        std::size_t kernel_h, std::size_t kernel_w,
                        ConvPadding padding) {
  if (kernels == 0 || channels == 0 || kernel_h == 0 || kernel_w == 0) {
    throw InvalidConfig("conv2d dimensions must be positive");
  }
  Conv2dLayer layer;
  layer.weight = Tensor({kernels, channels, kernel_h, kernel_w});
  layer.bias = Tensor({kernels});
  layer.padding = padding;
  return layer;
}

Tensor conv2d_forward(const Conv2dLayer& layer, const Tensor& input) {
  check_volume(input, "conv2d");
  if (input.dim(0) != layer.in_channels()) {
    throw ShapeMismatch("conv2d: input has " + std::to_string(input.dim(0)) +
                        " channels, layer expects " +
                        std::to_string(layer.in_channels()));
  }
  const std::size_t kh = layer.kernel_h(), kw = layer.kernel_w();
  Tensor work = input;
  if (layer.padding == ConvPadding::same_zero) {
    work = zero_pad(input, same_split(kh), same_split(kw));
  } else if (kh > input.dim(1) || kw > input.dim(2)) {
    throw KernelTooLarge("conv2d: kernel " + std::to_string(kh) + " x " +
                         std::to_string(kw) + " exceeds plane " +
                         std::to_string(input.dim(1)) + " x " +
                         std::to_string(input.dim(2)));
  }

  const std::size_t c = work.dim(0), h = work.dim(1), w = work.dim(2);
  const std::size_t oh = h - kh + 1, ow = w - kw + 1;
  const std::size_t l = layer.kernel_count();
  Tensor out({l, oh, ow});
  for (std::size_t k = 0; k < l; ++k) {
    const double b = layer.bias[k];
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        double acc = b;
        for (std::size_t ch = 0; ch < c; ++ch) {
          for (std::size_t ky = 0; ky < kh; ++ky) {
            for (std::size_t kx = 0; kx < kw; ++kx) {
              acc += work(ch, y + ky, x + kx) * layer.weight(k, ch, ky, kx);
            }
          }
        }
        out(k, y, x) = acc;
      }
    }
  }
  return out;
}

GradientBundle conv2d_backward(const Conv2dLayer& layer, const Tensor& input,
                               const Tensor& grad_output) {
  check_volume(input, "conv2d backward");
  check_volume(grad_output, "conv2d backward");
  if (input.dim(0) != layer.in_channels()) {
    throw StaleCache("conv2d backward: cached input has " +
                     std::to_string(input.dim(0)) + " channels, layer expects " +
                     std::to_string(layer.in_channels()));
  }
  if (grad_output.dim(0) != layer.kernel_count()) {
    throw ShapeMismatch("conv2d backward: gradient has " +
                        std::to_string(grad_output.dim(0)) +
                        " channels, layer emits " +
                        std::to_string(layer.kernel_count()));
  }

  const std::size_t kh = layer.kernel_h(), kw = layer.kernel_w();
  const bool same = layer.padding == ConvPadding::same_zero;
  const PadSplit ph = same ? same_split(kh) : PadSplit{};
  const PadSplit pw = same ? same_split(kw) : PadSplit{};
  const Tensor work = same ? zero_pad(input, ph, pw) : input;

  const std::size_t c = work.dim(0), h = work.dim(1), w = work.dim(2);
  if (kh > h || kw > w) {
    throw StaleCache("conv2d backward: cached input is smaller than the kernel");
  }
  const std::size_t oh = h - kh + 1, ow = w - kw + 1;
  if (grad_output.dim(1) != oh || grad_output.dim(2) != ow) {
    throw StaleCache("conv2d backward: cached input implies a " +
                     std::to_string(oh) + " x " + std::to_string(ow) +
                     " output, gradient is " +
                     std::to_string(grad_output.dim(1)) + " x " +
                     std::to_string(grad_output.dim(2)));
  }

  Tensor grad_work({c, h, w});
  Tensor grad_weight(layer.weight.shape());
  Tensor grad_bias(layer.bias.shape());
  const std::size_t l = layer.kernel_count();
  for (std::size_t k = 0; k < l; ++k) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        const double g = grad_output(k, y, x);
        if (g == 0.0) continue;
        grad_bias[k] += g;
        for (std::size_t ch = 0; ch < c; ++ch) {
          for (std::size_t ky = 0; ky < kh; ++ky) {
            for (std::size_t kx = 0; kx < kw; ++kx) {
              grad_weight(k, ch, ky, kx) += g * work(ch, y + ky, x + kx);
              grad_work(ch, y + ky, x + kx) += g * layer.weight(k, ch, ky, kx);
            }
          }
        }
      }
    }
  }

  GradientBundle out;
  if (same) {
    // Drop the gradient that fell on the zero padding.
    Tensor grad_in(input.shape());
    for (std::size_t ch = 0; ch < input.dim(0); ++ch) {
      for (std::size_t y = 0; y < input.dim(1); ++y) {
        for (std::size_t x = 0; x < input.dim(2); ++x) {
          grad_in(ch, y, x) = grad_work(ch, y + ph.before, x + pw.before);
        }
      }
    }
    out.input = std::move(grad_in);
  } else {
    out.input = std::move(grad_work);
  }
  out.params.push_back(std::move(grad_weight));
  out.params.push_back(std::move(grad_bias));
  return out;
}

Tensor maxpool2d_forward(const MaxPool2dLayer& layer, const Tensor& input,
                         ArgmaxRecord* record) {
  check_volume(input, "maxpool2d");
  if (layer.pool_h == 0 || layer.pool_w == 0 || layer.stride_h == 0 ||
      layer.stride_w == 0) {
    throw InvalidConfig("maxpool2d window and stride must be positive");
  }
  const std::size_t c = input.dim(0), h = input.dim(1), w = input.dim(2);
  if (layer.pool_h > h || layer.pool_w > w) {
    throw ShapeMismatch("maxpool2d: window " + std::to_string(layer.pool_h) +
                        " x " + std::to_string(layer.pool_w) +
                        " exceeds plane " + std::to_string(h) + " x " +
                        std::to_string(w));
  }
  const std::size_t oh = (h + layer.stride_h - 1) / layer.stride_h;
  const std::size_t ow = (w + layer.stride_w - 1) / layer.stride_w;

  Tensor out({c, oh, ow});
  if (record) {
    record->input_shape = input.shape();
    record->output_shape = out.shape();
    record->argmax.assign(out.size(), 0);
  }
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      const std::size_t y0 = oy * layer.stride_h;
      const std::size_t y1 = std::min(y0 + layer.pool_h, h);
      for (std::size_t ox = 0; ox < ow; ++ox) {
        const std::size_t x0 = ox * layer.stride_w;
        const std::size_t x1 = std::min(x0 + layer.pool_w, w);
        double best = input(ch, y0, x0);
        std::size_t best_flat = (ch * h + y0) * w + x0;
        for (std::size_t y = y0; y < y1; ++y) {
          for (std::size_t x = x0; x < x1; ++x) {
            const double v = input(ch, y, x);
            if (v > best) {  // strict, so ties keep the lowest flat index
              best = v;
              best_flat = (ch * h + y) * w + x;
            }
          }
        }
        out(ch, oy, ox) = best;
        if (record) record->argmax[(ch * oh + oy) * ow + ox] = best_flat;
      }
    }
  }
  return out;
}

GradientBundle maxpool2d_backward(const MaxPool2dLayer&,
                                  const ArgmaxRecord& record,
                                  const Tensor& grad_output) {
  if (grad_output.shape() != record.output_shape) {
    throw ShapeMismatch("maxpool2d backward: gradient shape does not match "
                        "the recorded output shape");
  }
  std::size_t in_count = 1;
  for (std::size_t d : record.input_shape) in_count *= d;
  if (record.input_shape.size() != 3 || record.argmax.size() != grad_output.size()) {
    throw StaleCache("maxpool2d backward: argmax record is inconsistent");
  }

  GradientBundle out;
  out.input = Tensor(record.input_shape);
  for (std::size_t i = 0; i < record.argmax.size(); ++i) {
    const std::size_t src = record.argmax[i];
    if (src >= in_count) {
      throw StaleCache("maxpool2d backward: recorded index out of range");
    }
    out.input[src] += grad_output[i];
  }
  return out;
}

DenseLayer make_dense(std::size_t out_dim, std::size_t in_dim) {
  if (out_dim == 0 || in_dim == 0) {
    throw InvalidConfig("dense dimensions must be positive");
  }
  DenseLayer layer;
  layer.weight = Tensor({out_dim, in_dim});
  layer.bias = Tensor({out_dim});
  return layer;
}

Tensor dense_forward(const DenseLayer& layer, const Tensor& input) {
  const std::size_t out_dim = layer.weight.dim(0), in_dim = layer.weight.dim(1);
  if (input.rank() != 1 || input.size() != in_dim) {
    throw ShapeMismatch("dense: input size " + std::to_string(input.size()) +
                        " does not match layer width " + std::to_string(in_dim));
  }
  Tensor out({out_dim});
  for (std::size_t i = 0; i < out_dim; ++i) {
    double acc = layer.bias[i];
    const double* row = layer.weight.data() + i * in_dim;
    for (std::size_t j = 0; j < in_dim; ++j) acc += row[j] * input[j];
    out[i] = acc;
  }
  return out;
}

GradientBundle dense_backward(const DenseLayer& layer, const Tensor& input,
                              const Tensor& grad_output) {
  const std::size_t out_dim = layer.weight.dim(0), in_dim = layer.weight.dim(1);
  if (input.rank() != 1 || input.size() != in_dim) {
    throw StaleCache("dense backward: cached input size " +
                     std::to_string(input.size()) +
                     " does not match layer width " + std::to_string(in_dim));
  }
  if (grad_output.rank() != 1 || grad_output.size() != out_dim) {
    throw ShapeMismatch("dense backward: gradient size " +
                        std::to_string(grad_output.size()) +
                        " does not match layer height " +
                        std::to_string(out_dim));
  }

  GradientBundle out;
  Tensor grad_weight({out_dim, in_dim});
  for (std::size_t i = 0; i < out_dim; ++i) {
    const double g = grad_output[i];
    if (g == 0.0) continue;
    double* row = grad_weight.data() + i * in_dim;
    for (std::size_t j = 0; j < in_dim; ++j) row[j] = g * input[j];
  }
  Tensor grad_in({in_dim});
  for (std::size_t i = 0; i < out_dim; ++i) {
    const double g = grad_output[i];
    if (g == 0.0) continue;
    const double* row = layer.weight.data() + i * in_dim;
    for (std::size_t j = 0; j < in_dim; ++j) grad_in[j] += row[j] * g;
  }
  out.input = std::move(grad_in);
  out.params.push_back(std::move(grad_weight));
  out.params.push_back(grad_output);  // d bias
  return out;
}

void glorot_fill(Tensor& weight, std::size_t fan_in, std::size_t fan_out,
                 std::mt19937_64& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (std::size_t i = 0; i < weight.size(); ++i) weight[i] = dist(rng);
}

void init_conv(Conv2dLayer& layer, std::mt19937_64& rng) {
  const std::size_t receptive = layer.kernel_h() * layer.kernel_w();
  glorot_fill(layer.weight, layer.in_channels() * receptive,
              layer.kernel_count() * receptive, rng);
  layer.bias.fill(0.0);
}

void init_dense(DenseLayer& layer, std::mt19937_64& rng) {
  glorot_fill(layer.weight, layer.weight.dim(1), layer.weight.dim(0), rng);
  layer.bias.fill(0.0);
}

}  // namespace tssnet
