#include "tssnet/optim.hpp"

#include <cmath>
#include <string>

#include "tssnet/errors.hpp"

namespace tssnet {

namespace {

void check_aligned(const std::vector<Tensor*>& params,
                   const std::vector<Tensor>& grads) {
  if (params.size() != grads.size()) {
    throw ShapeMismatch("optimizer: " + std::to_string(params.size()) +
                        " parameters but " + std::to_string(grads.size()) +
                        " gradients");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(grads[i])) {
      throw ShapeMismatch("optimizer: parameter " + std::to_string(i) +
                          " and its gradient have different shapes");
    }
  }
}

}  // namespace

LossResult frobenius_loss(const Tensor& target, const Tensor& prediction) {
  if (!target.same_shape(prediction)) {
    throw ShapeMismatch("frobenius_loss: target and prediction shapes differ");
  }
  LossResult result;
  result.grad = Tensor(prediction.shape());
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double r = prediction[i] - target[i];
    result.value += r * r;
    result.grad[i] = 2.0 * r;
  }
  return result;
}

double clip_gradients(std::vector<Tensor>& grads, double threshold) {
  if (!(threshold > 0.0)) {
    throw InvalidConfig("clip threshold must be positive");
  }
  double sq = 0.0;
  for (const Tensor& g : grads) {
    for (std::size_t i = 0; i < g.size(); ++i) sq += g[i] * g[i];
  }
  const double norm = std::sqrt(sq);
  if (norm > threshold) {
    const double factor = threshold / norm;
    for (Tensor& g : grads) {
      for (std::size_t i = 0; i < g.size(); ++i) g[i] *= factor;
    }
  }
  return norm;
}

SgdOptimizer::SgdOptimizer(double lr) : lr_(lr) {
  if (!(lr > 0.0)) throw InvalidConfig("learning rate must be positive");
}

void SgdOptimizer::step(const std::vector<Tensor*>& params,
                        const std::vector<Tensor>& grads) {
  check_aligned(params, grads);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const Tensor& g = grads[i];
    for (std::size_t j = 0; j < p.size(); ++j) p[j] -= lr_ * g[j];
  }
}

AdamOptimizer::AdamOptimizer(double lr, double beta1, double beta2,
                             double epsilon)
    : lr_(lr), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {
  if (!(lr > 0.0)) throw InvalidConfig("learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw InvalidConfig("adam decay rates must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw InvalidConfig("adam epsilon must be positive");
}

void AdamOptimizer::step(const std::vector<Tensor*>& params,
                         const std::vector<Tensor>& grads) {
  check_aligned(params, grads);
  if (first_.empty()) {
    for (const Tensor* p : params) {
      first_.emplace_back(p->shape());
      second_.emplace_back(p->shape());
    }
  } else if (first_.size() != params.size()) {
    throw ShapeMismatch("adam: parameter list changed between steps");
  }

  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const Tensor& g = grads[i];
    Tensor& m = first_[i];
    Tensor& v = second_[i];
    if (!m.same_shape(p)) {
      throw ShapeMismatch("adam: parameter " + std::to_string(i) +
                          " changed shape between steps");
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g[j];
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j];
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      p[j] -= lr_ * mhat / (std::sqrt(vhat) + epsilon_);
    }
  }
}

std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double lr) {
  if (kind == OptimizerKind::sgd) return std::make_unique<SgdOptimizer>(lr);
  return std::make_unique<AdamOptimizer>(lr);
}

}  // namespace tssnet

namespace tssnet {

OptimizerKind parse_optimizer_kind(const std::string& name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "adam") return OptimizerKind::adam;
  throw InvalidConfig("unknown optimizer '" + name + "'");
}

const char* optimizer_kind_name(OptimizerKind kind) {
  return kind == OptimizerKind::sgd ? "sgd" : "adam";
}

}  // namespace tssnet
