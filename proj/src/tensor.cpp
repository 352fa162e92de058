#include "tssnet/tensor.hpp"

#include <cmath>
#include <string>

#include "tssnet/errors.hpp"

namespace tssnet {

namespace {

std::size_t checked_count(const Tensor::Shape& shape) {
  if (shape.empty()) {
    throw InvalidShape("tensor shape must have at least one dimension");
  }
  std::size_t count = 1;
  for (std::size_t d : shape) {
    if (d == 0) {
      throw InvalidShape("tensor dimensions must be positive");
    }
    count *= d;
  }
  return count;
}

std::string shape_text(const Tensor::Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += " x ";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeMismatch(std::string(op) + ": shapes " + shape_text(a.shape()) +
                        " and " + shape_text(b.shape()) + " differ");
  }
}

void check_range(const Tensor& t, std::size_t first, std::size_t last) {
  if (first >= last || last > t.size()) {
    throw OutOfBounds("reduce range [" + std::to_string(first) + ", " +
                      std::to_string(last) + ") invalid for " +
                      std::to_string(t.size()) + " elements");
  }
}

}  // namespace

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  values_.assign(checked_count(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (checked_count(shape_) != values_.size()) {
    throw ShapeMismatch("tensor shape " + shape_text(shape_) + " expects " +
                        std::to_string(checked_count(shape_)) +
                        " values, got " + std::to_string(values_.size()));
  }
}

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= shape_.size()) {
    throw OutOfBounds("axis " + std::to_string(axis) + " out of range for rank " +
                      std::to_string(shape_.size()));
  }
  return shape_[axis];
}

double Tensor::at(std::size_t i) const {
  if (i >= values_.size()) {
    throw OutOfBounds("flat index " + std::to_string(i) + " out of range for " +
                      std::to_string(values_.size()) + " elements");
  }
  return values_[i];
}

double& Tensor::at(std::size_t i) {
  if (i >= values_.size()) {
    throw OutOfBounds("flat index " + std::to_string(i) + " out of range for " +
                      std::to_string(values_.size()) + " elements");
  }
  return values_[i];
}

double Tensor::operator()(std::size_t i, std::size_t j) const noexcept {
  return values_[i * shape_[1] + j];
}

double& Tensor::operator()(std::size_t i, std::size_t j) noexcept {
  return values_[i * shape_[1] + j];
}

double Tensor::operator()(std::size_t i, std::size_t j,
                          std::size_t k) const noexcept {
  return values_[(i * shape_[1] + j) * shape_[2] + k];
}

double& Tensor::operator()(std::size_t i, std::size_t j,
                           std::size_t k) noexcept {
  return values_[(i * shape_[1] + j) * shape_[2] + k];
}

double Tensor::operator()(std::size_t i, std::size_t j, std::size_t k,
                          std::size_t l) const noexcept {
  return values_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
}

double& Tensor::operator()(std::size_t i, std::size_t j, std::size_t k,
                           std::size_t l) noexcept {
  return values_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
}

Tensor Tensor::reshaped(Shape new_shape) const {
  if (checked_count(new_shape) != values_.size()) {
    throw ShapeMismatch("reshape to " + shape_text(new_shape) +
                        " changes element count " +
                        std::to_string(values_.size()));
  }
  return Tensor(std::move(new_shape), values_);
}

bool Tensor::same_shape(const Tensor& other) const noexcept {
  return shape_ == other.shape_;
}

bool Tensor::all_finite() const noexcept {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::fill(double value) {
  for (double& v : values_) v = value;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw ShapeMismatch("matmul requires rank-2 operands");
  }
  const std::size_t rows = a.dim(0), inner = a.dim(1), cols = b.dim(1);
  if (b.dim(0) != inner) {
    throw ShapeMismatch("matmul: inner dimensions " + std::to_string(inner) +
                        " and " + std::to_string(b.dim(0)) + " differ");
  }
  Tensor out({rows, cols});
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = pa[i * inner + k];
      if (aik == 0.0) continue;
      const double* brow = pb + k * cols;
      double* orow = po + i * cols;
      for (std::size_t j = 0; j < cols; ++j) {
        orow[j] += aik * brow[j];
      }
    }
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

Tensor scale(const Tensor& a, double factor) {
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor;
  return out;
}

void add_inplace(Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

void scale_inplace(Tensor& a, double factor) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= factor;
}

double reduce_sum(const Tensor& t, std::size_t first, std::size_t last) {
  check_range(t, first, last);
  double acc = 0.0;
  for (std::size_t i = first; i < last; ++i) acc += t[i];
  return acc;
}

double reduce_max(const Tensor& t, std::size_t first, std::size_t last) {
  check_range(t, first, last);
  double best = t[first];
  for (std::size_t i = first + 1; i < last; ++i) {
    if (t[i] > best) best = t[i];
  }
  return best;
}

std::size_t reduce_argmax(const Tensor& t, std::size_t first, std::size_t last) {
  check_range(t, first, last);
  std::size_t best = first;
  for (std::size_t i = first + 1; i < last; ++i) {
    if (t[i] > t[best]) best = i;  // strict, so ties keep the lowest index
  }
  return best;
}

double reduce_sum(const Tensor& t) { return reduce_sum(t, 0, t.size()); }
double reduce_max(const Tensor& t) { return reduce_max(t, 0, t.size()); }
std::size_t reduce_argmax(const Tensor& t) {
  return reduce_argmax(t, 0, t.size());
}

}  // namespace tssnet
