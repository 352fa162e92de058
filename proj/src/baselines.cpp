#include "tssnet/baselines.hpp"

#include <algorithm>
#include <string>

#include "tssnet/errors.hpp"

namespace tssnet {

struct Cnn1dBaseline::Cache : ForwardCache {
  Tensor image;  // 1 x m x T
  Tensor conv_out;
  ArgmaxRecord pool_record;
  Tensor pool_out;
  Tensor flat;
  Tensor fc1_out;
};

Cnn1dBaseline::Cnn1dBaseline(const Cnn1dConfig& config) : config_(config) {
  const std::size_t m = config_.features;
  if (m == 0 || config_.input_length == 0 || config_.horizon == 0) {
    throw InvalidConfig("model needs positive feature count, input length and horizon");
  }
  if (config_.hidden_multiplier == 0) {
    throw InvalidConfig("hidden multiplier must be at least 1");
  }
  const std::size_t kh = config_.kernel_height == 0 ? m : config_.kernel_height;
  const std::size_t kw = config_.kernel_width;
  if (kh > m) {
    throw InvalidConfig("kernel height " + std::to_string(kh) +
                        " exceeds the " + std::to_string(m) + " feature rows");
  }
  if (kw == 0 || kw > config_.input_length) {
    throw InvalidConfig("kernel width " + std::to_string(kw) +
                        " must lie in [1, input length " +
                        std::to_string(config_.input_length) + "]");
  }

  conv_ = make_conv2d(m, 1, kh, kw, ConvPadding::valid);
  const std::size_t h1 = m - kh + 1;
  const std::size_t w1 = config_.input_length - kw + 1;
  pool_.pool_h = std::min<std::size_t>(2, h1);
  pool_.pool_w = std::min<std::size_t>(2, w1);
  pool_.stride_h = pool_.pool_h;
  pool_.stride_w = pool_.pool_w;
  const std::size_t h2 = (h1 + pool_.stride_h - 1) / pool_.stride_h;
  const std::size_t w2 = (w1 + pool_.stride_w - 1) / pool_.stride_w;

  const std::size_t out_dim = m * config_.horizon;
  fc1_ = make_dense(config_.hidden_multiplier * out_dim, m * h2 * w2);
  out_ = make_dense(out_dim, config_.hidden_multiplier * out_dim);

  std::mt19937_64 rng(config_.seed);
  init_conv(conv_, rng);
  init_dense(fc1_, rng);
  init_dense(out_, rng);
}

ModelDims Cnn1dBaseline::dims() const {
  return {config_.features, config_.input_length, config_.horizon};
}

std::vector<NamedParam> Cnn1dBaseline::parameters() {
  return {
      {"conv.weight", &conv_.weight}, {"conv.bias", &conv_.bias},
      {"fc1.weight", &fc1_.weight},   {"fc1.bias", &fc1_.bias},
      {"out.weight", &out_.weight},   {"out.bias", &out_.bias},
  };
}

Tensor Cnn1dBaseline::run_forward(const Tensor& input, Cache* cache) const {
  if (input.rank() != 2 || input.dim(0) != config_.features ||
      input.dim(1) != config_.input_length) {
    throw ShapeMismatch("model expects a " + std::to_string(config_.features) +
                        " x " + std::to_string(config_.input_length) +
                        " input block");
  }
  Tensor image = input.reshaped({1, config_.features, config_.input_length});
  Tensor conv_out = conv2d_forward(conv_, image);
  ArgmaxRecord rec;
  Tensor pool_out = maxpool2d_forward(pool_, conv_out, cache ? &rec : nullptr);
  Tensor flat = pool_out.reshaped({pool_out.size()});
  Tensor fc1_out = dense_forward(fc1_, flat);
  Tensor out_vec = dense_forward(out_, fc1_out);
  Tensor output = out_vec.reshaped({config_.features, config_.horizon});

  if (cache) {
    cache->image = std::move(image);
    cache->conv_out = std::move(conv_out);
    cache->pool_record = std::move(rec);
    cache->pool_out = std::move(pool_out);
    cache->flat = std::move(flat);
    cache->fc1_out = std::move(fc1_out);
  }
  return output;
}

Tensor Cnn1dBaseline::predict(const Tensor& input) const {
  return run_forward(input, nullptr);
}

std::unique_ptr<ForwardCache> Cnn1dBaseline::forward(const Tensor& input,
                                                     Tensor& output) const {
  auto cache = std::make_unique<Cache>();
  output = run_forward(input, cache.get());
  return cache;
}

std::vector<Tensor> Cnn1dBaseline::backward(const ForwardCache& cache,
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
  const Tensor grad_pool = g_fc1.input.reshaped(c->pool_out.shape());
  GradientBundle g_pool = maxpool2d_backward(pool_, c->pool_record, grad_pool);
  GradientBundle g_conv = conv2d_backward(conv_, c->image, g_pool.input);

  std::vector<Tensor> grads;
  grads.reserve(6);
  grads.push_back(std::move(g_conv.params[0]));
  grads.push_back(std::move(g_conv.params[1]));
  grads.push_back(std::move(g_fc1.params[0]));
  grads.push_back(std::move(g_fc1.params[1]));
  grads.push_back(std::move(g_out.params[0]));
  grads.push_back(std::move(g_out.params[1]));
  return grads;
}

PersistenceModel::PersistenceModel(const PersistenceConfig& config)
    : config_(config) {
  if (config_.features == 0 || config_.input_length == 0 ||
      config_.horizon == 0) {
    throw InvalidConfig("model needs positive feature count, input length and horizon");
  }
  if (config_.mode == PersistenceMode::seasonal) {
    if (config_.period == 0 || config_.period > config_.input_length) {
      throw InvalidConfig("seasonal period " + std::to_string(config_.period) +
                          " must lie in [1, input length " +
                          std::to_string(config_.input_length) + "]");
    }
  }
}

ModelDims PersistenceModel::dims() const {
  return {config_.features, config_.input_length, config_.horizon};
}

Tensor PersistenceModel::predict(const Tensor& input) const {
  if (input.rank() != 2 || input.dim(0) != config_.features ||
      input.dim(1) != config_.input_length) {
    throw ShapeMismatch("model expects a " + std::to_string(config_.features) +
                        " x " + std::to_string(config_.input_length) +
                        " input block");
  }
  const std::size_t m = config_.features, t_len = config_.input_length;
  Tensor out({m, config_.horizon});
  for (std::size_t f = 0; f < m; ++f) {
    for (std::size_t j = 0; j < config_.horizon; ++j) {
      if (config_.mode == PersistenceMode::last_value) {
        out(f, j) = input(f, t_len - 1);
      } else {
        out(f, j) = input(f, t_len - config_.period + (j % config_.period));
      }
    }
  }
  return out;
}

std::unique_ptr<ForwardCache> PersistenceModel::forward(const Tensor& input,
                                                        Tensor& output) const {
  output = predict(input);
  return std::make_unique<ForwardCache>();
}

std::vector<Tensor> PersistenceModel::backward(const ForwardCache&,
                                               const Tensor&) const {
  return {};  // nothing to learn
}

}  // namespace tssnet

namespace tssnet {

PersistenceMode parse_persistence_mode(const std::string& name) {
  if (name == "last-value") return PersistenceMode::last_value;
  if (name == "seasonal") return PersistenceMode::seasonal;
  throw InvalidConfig("unknown persistence mode '" + name + "'");
}

const char* persistence_mode_name(PersistenceMode mode) {
  return mode == PersistenceMode::last_value ? "last-value" : "seasonal";
}

}  // namespace tssnet
