#include "tssnet/model.hpp"

#include <algorithm>
#include <string>

#include "tssnet/errors.hpp"

namespace tssnet {

namespace {

// Non-overlapping pooling with windows clipped to the plane, so a
// degenerate axis (extent 1) passes through unchanged.
MaxPool2dLayer clamped_pool(std::size_t h, std::size_t w) {
  MaxPool2dLayer pool;
  pool.pool_h = std::min<std::size_t>(2, h);
  pool.pool_w = std::min<std::size_t>(2, w);
  pool.stride_h = pool.pool_h;
  pool.stride_w = pool.pool_w;
  return pool;
}

std::size_t pooled_extent(std::size_t extent, std::size_t stride) {
  return (extent + stride - 1) / stride;
}

}  // namespace

struct TssNetModel::Cache : ForwardCache {
  Tensor stack;       // conv1 input
  Tensor conv1_out;
  ArgmaxRecord pool1_record;
  Tensor pool1_out;   // conv2 input
  Tensor conv2_out;
  ArgmaxRecord pool2_record;
  Tensor pool2_out;
  Tensor flat;        // fc1 input
  Tensor fc1_out;     // output layer input
};

TssNetModel::TssNetModel(const TssNetConfig& config) : config_(config) {
  const std::size_t m = config_.features;
  if (m == 0 || config_.input_length == 0 || config_.horizon == 0) {
    throw InvalidConfig("model needs positive feature count, input length and horizon");
  }
  if (config_.hidden_multiplier == 0) {
    throw InvalidConfig("hidden multiplier must be at least 1");
  }
  const std::size_t k = config_.kernel_width;
  const std::size_t w = config_.transform.window;
  if (k == 0 || k > w) {
    throw InvalidConfig("kernel width " + std::to_string(k) +
                        " must lie in [1, window " + std::to_string(w) + "]");
  }

  slices_ = slice_count(config_.transform, config_.input_length);

  // Stage geometry. Planes are window x stack; full-stack kernels span the
  // whole stack axis so their output keeps a single stack column, fixed
  // kernels keep the plane size via same-zero padding.
  const bool full = config_.kernel_height_mode == KernelHeightMode::full_stack;
  std::size_t h1, w1;
  if (full) {
    conv1_ = make_conv2d(m, m, k, slices_, ConvPadding::valid);
    h1 = w - k + 1;
    w1 = 1;
  } else {
    if (config_.kernel_height == 0) {
      throw InvalidConfig("fixed kernel height must be at least 1");
    }
    conv1_ = make_conv2d(m, m, k, config_.kernel_height, ConvPadding::same_zero);
    h1 = w;
    w1 = slices_;
  }

  pool1_ = clamped_pool(h1, w1);
  const std::size_t h2 = pooled_extent(h1, pool1_.stride_h);
  const std::size_t w2 = pooled_extent(w1, pool1_.stride_w);

  std::size_t h3, w3;
  if (full) {
    // Mirror conv1's width but never outgrow the shrunken plane.
    const std::size_t kh2 = std::min(k, h2);
    conv2_ = make_conv2d(m, m, kh2, w2, ConvPadding::valid);
    h3 = h2 - kh2 + 1;
    w3 = 1;
  } else {
    conv2_ = make_conv2d(m, m, k, config_.kernel_height, ConvPadding::same_zero);
    h3 = h2;
    w3 = w2;
  }

  pool2_ = clamped_pool(h3, w3);
  const std::size_t h4 = pooled_extent(h3, pool2_.stride_h);
  const std::size_t w4 = pooled_extent(w3, pool2_.stride_w);

  const std::size_t flat_dim = m * h4 * w4;
  const std::size_t out_dim = m * config_.horizon;
  fc1_ = make_dense(config_.hidden_multiplier * out_dim, flat_dim);
  out_ = make_dense(out_dim, config_.hidden_multiplier * out_dim);

  std::mt19937_64 rng(config_.seed);
  init_conv(conv1_, rng);
  init_conv(conv2_, rng);
  init_dense(fc1_, rng);
  init_dense(out_, rng);
}

ModelDims TssNetModel::dims() const {
  return {config_.features, config_.input_length, config_.horizon};
}

std::vector<NamedParam> TssNetModel::parameters() {
  return {
      {"conv1.weight", &conv1_.weight}, {"conv1.bias", &conv1_.bias},
      {"conv2.weight", &conv2_.weight}, {"conv2.bias", &conv2_.bias},
      {"fc1.weight", &fc1_.weight},     {"fc1.bias", &fc1_.bias},
      {"out.weight", &out_.weight},     {"out.bias", &out_.bias},
  };
}

void TssNetModel::check_input(const Tensor& input) const {
  if (input.rank() != 2 || input.dim(0) != config_.features ||
      input.dim(1) != config_.input_length) {
    throw ShapeMismatch("model expects a " + std::to_string(config_.features) +
                        " x " + std::to_string(config_.input_length) +
                        " input block");
  }
}

Tensor TssNetModel::run_forward(const Tensor& input, Cache* cache,
                                std::vector<Tensor>* maps) const {
  check_input(input);
  Tensor stack = slice_stack(input, config_.transform);
  Tensor conv1_out = conv2d_forward(conv1_, stack);

  if (maps) {
    const std::size_t l = conv1_out.dim(0);
    const std::size_t h = conv1_out.dim(1), w = conv1_out.dim(2);
    for (std::size_t kernel = 0; kernel < l; ++kernel) {
      Tensor plane({h, w});
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) plane(y, x) = conv1_out(kernel, y, x);
      }
      maps->push_back(std::move(plane));
    }
  }

  ArgmaxRecord rec1;
  Tensor pool1_out = maxpool2d_forward(pool1_, conv1_out, cache ? &rec1 : nullptr);
  Tensor conv2_out = conv2d_forward(conv2_, pool1_out);
  ArgmaxRecord rec2;
  Tensor pool2_out = maxpool2d_forward(pool2_, conv2_out, cache ? &rec2 : nullptr);

  Tensor flat = pool2_out.reshaped({pool2_out.size()});
  Tensor fc1_out = dense_forward(fc1_, flat);
  Tensor out_vec = dense_forward(out_, fc1_out);
  Tensor output = out_vec.reshaped({config_.features, config_.horizon});

  if (cache) {
    cache->stack = std::move(stack);
    cache->conv1_out = std::move(conv1_out);
    cache->pool1_record = std::move(rec1);
    cache->pool1_out = std::move(pool1_out);
    cache->conv2_out = std::move(conv2_out);
    cache->pool2_record = std::move(rec2);
    cache->pool2_out = std::move(pool2_out);
    cache->flat = std::move(flat);
    cache->fc1_out = std::move(fc1_out);
  }
  return output;
}

Tensor TssNetModel::predict(const Tensor& input) const {
  return run_forward(input, nullptr, nullptr);
}

std::unique_ptr<ForwardCache> TssNetModel::forward(const Tensor& input,
                                                   Tensor& output) const {
  auto cache = std::make_unique<Cache>();
  output = run_forward(input, cache.get(), nullptr);
  return cache;
}

std::vector<Tensor> TssNetModel::backward(const ForwardCache& cache,
                                          const Tensor& grad_output) const {
  const auto* c = dynamic_cast<const Cache*>(&cache);
  if (!c) throw StaleCache("backward got a cache from a different model type");
  if (grad_output.rank() != 2 || grad_output.dim(0) != config_.features ||
      grad_output.dim(1) != config_.horizon) {
    throw ShapeMismatch("gradient must match the " +
                        std::to_string(config_.features) + " x " +
                        std::to_string(config_.horizon) + " output block");
  }

  const Tensor grad_vec = grad_output.reshaped({grad_output.size()});
  GradientBundle g_out = dense_backward(out_, c->fc1_out, grad_vec);
  GradientBundle g_fc1 = dense_backward(fc1_, c->flat, g_out.input);
  const Tensor grad_pool2 = g_fc1.input.reshaped(c->pool2_out.shape());
  GradientBundle g_pool2 = maxpool2d_backward(pool2_, c->pool2_record, grad_pool2);
  GradientBundle g_conv2 = conv2d_backward(conv2_, c->pool1_out, g_pool2.input);
  GradientBundle g_pool1 = maxpool2d_backward(pool1_, c->pool1_record, g_conv2.input);
  GradientBundle g_conv1 = conv2d_backward(conv1_, c->stack, g_pool1.input);

  std::vector<Tensor> grads;
  grads.reserve(8);
  grads.push_back(std::move(g_conv1.params[0]));
  grads.push_back(std::move(g_conv1.params[1]));
  grads.push_back(std::move(g_conv2.params[0]));
  grads.push_back(std::move(g_conv2.params[1]));
  grads.push_back(std::move(g_fc1.params[0]));
  grads.push_back(std::move(g_fc1.params[1]));
  grads.push_back(std::move(g_out.params[0]));
  grads.push_back(std::move(g_out.params[1]));
  return grads;
}

std::vector<Tensor> TssNetModel::capture_feature_maps(const Tensor& input) const {
  std::vector<Tensor> maps;
  run_forward(input, nullptr, &maps);
  return maps;
}

}  // namespace tssnet

namespace tssnet {

KernelHeightMode TssNetModel::parse_kernel_height_mode(const std::string& name) {
  if (name == "full-stack") return KernelHeightMode::full_stack;
  if (name == "fixed") return KernelHeightMode::fixed;
  throw InvalidConfig("unknown kernel height mode '" + name + "'");
}

const char* TssNetModel::kernel_height_mode_name(KernelHeightMode mode) {
  return mode == KernelHeightMode::full_stack ? "full-stack" : "fixed";
}

}  // namespace tssnet
