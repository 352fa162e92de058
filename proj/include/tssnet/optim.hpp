#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "tssnet/tensor.hpp"

namespace tssnet {

// Squared Frobenius distance: loss = sum (pred - target)^2, gradient
// 2 * (pred - target) with respect to the prediction. No averaging here;
// batch reduction is the trainer's job.
struct LossResult {
  double value = 0.0;
  Tensor grad;
};

LossResult frobenius_loss(const Tensor& target, const Tensor& prediction);

// Joint L2 clipping: if the global norm over all tensors exceeds the
// threshold, every tensor is scaled by threshold / norm. Returns the
// pre-clip norm. threshold must be positive.
double clip_gradients(std::vector<Tensor>& grads, double threshold);

enum class OptimizerKind { sgd, adam };

OptimizerKind parse_optimizer_kind(const std::string& name);
const char* optimizer_kind_name(OptimizerKind kind);

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  // params and grads are aligned; shapes must match pairwise.
  virtual void step(const std::vector<Tensor*>& params,
                    const std::vector<Tensor>& grads) = 0;
};

// Plain gradient descent: p <- p - lr * g.
class SgdOptimizer final : public Optimizer {
 public:
  explicit SgdOptimizer(double lr);
  void step(const std::vector<Tensor*>& params,
            const std::vector<Tensor>& grads) override;

 private:
  double lr_;
};

// Adam with bias correction. Moment buffers are allocated on the first
// step and keyed by position, so the parameter list must stay stable.
class AdamOptimizer final : public Optimizer {
 public:
  explicit AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999,
                         double epsilon = 1e-8);
  void step(const std::vector<Tensor*>& params,
            const std::vector<Tensor>& grads) override;

 private:
  double lr_, beta1_, beta2_, epsilon_;
  std::size_t t_ = 0;
  std::vector<Tensor> first_;
  std::vector<Tensor> second_;
};

std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double lr);

}  // namespace tssnet
