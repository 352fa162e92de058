#pragma once

#include <cstddef>
#include <vector>

namespace tssnet {

// Dense row-major tensor of doubles. Every dimension must be positive;
// the element count is fixed at construction. All math in the library is
// double precision, there is no float path.
class Tensor {
 public:
  using Shape = std::vector<std::size_t>;

  Tensor() = default;
  explicit Tensor(Shape shape);                     // zero filled
  Tensor(Shape shape, std::vector<double> values);  // count must match shape

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t dim(std::size_t axis) const;

  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double at(std::size_t i) const;  // bounds checked
  double& at(std::size_t i);

  // Unchecked multi-index access for rank 2/3/4 hot paths.
  double operator()(std::size_t i, std::size_t j) const noexcept;
  double& operator()(std::size_t i, std::size_t j) noexcept;
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept;
  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept;
  double operator()(std::size_t i, std::size_t j, std::size_t k,
                    std::size_t l) const noexcept;
  double& operator()(std::size_t i, std::size_t j, std::size_t k,
                     std::size_t l) noexcept;

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  const double* data() const noexcept { return values_.data(); }
  double* data() noexcept { return values_.data(); }

  // Same elements, new shape; element count must be preserved.
  Tensor reshaped(Shape new_shape) const;

  bool same_shape(const Tensor& other) const noexcept;
  bool all_finite() const noexcept;
  void fill(double value);

 private:
  Shape shape_;
  std::vector<double> values_;
};

// Rank-2 matrix product: [r x k] * [k x c] -> [r x c].
Tensor matmul(const Tensor& a, const Tensor& b);

// Elementwise ops over identically shaped tensors.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

// Allocation-free variants for accumulation loops.
void add_inplace(Tensor& a, const Tensor& b);
void scale_inplace(Tensor& a, double factor);

// Reductions over the half-open flat range [first, last). The range must
// be non-empty and inside the tensor. argmax returns the lowest flat index
// among tied maxima.
double reduce_sum(const Tensor& t, std::size_t first, std::size_t last);
double reduce_max(const Tensor& t, std::size_t first, std::size_t last);
std::size_t reduce_argmax(const Tensor& t, std::size_t first, std::size_t last);

// Whole-tensor conveniences.
double reduce_sum(const Tensor& t);
double reduce_max(const Tensor& t);
std::size_t reduce_argmax(const Tensor& t);

}  // namespace tssnet
