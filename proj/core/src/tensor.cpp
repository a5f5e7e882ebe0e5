#include "fsco/tensor.hpp"

#include <cmath>
#include <sstream>

#include "fsco/errors.hpp"

namespace fsco {

namespace {

std::size_t checked_product(const std::vector<std::size_t>& shape) {
  if (shape.empty()) throw DimensionError("tensor shape must not be empty");
  std::size_t n = 1;
  for (std::size_t e : shape) {
    if (e == 0) throw DimensionError("tensor extents must be positive");
    n *= e;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(checked_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (checked_product(shape_) != data_.size()) {
    throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_str());
  }
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols) {
  return Tensor({rows, cols});
}

Tensor Tensor::vector(std::size_t n) { return Tensor({n}); }

std::size_t Tensor::dim(std::size_t d) const {
  if (d >= shape_.size()) throw DimensionError("tensor dimension index out of range");
  return shape_[d];
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw DimensionError("rows() requires a rank-2 tensor, got " + shape_str());
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw DimensionError("cols() requires a rank-2 tensor, got " + shape_str());
  return shape_[1];
}

double& Tensor::at(std::size_t r, std::size_t c) {
  return data_[r * cols() + c];
}

double Tensor::at(std::size_t r, std::size_t c) const {
  return data_[r * cols() + c];
}

double* Tensor::row(std::size_t r) { return data_.data() + r * cols(); }

const double* Tensor::row(std::size_t r) const { return data_.data() + r * cols(); }

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::fill(double value) {
  for (double& v : data_) v = value;
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) os << " x ";
    os << shape_[i];
  }
  os << "]";
  return os.str();
}

void require_finite(const Tensor& t, const char* what) {
  if (!t.all_finite()) {
    throw NumericError(std::string("non-finite value in ") + what);
  }
}

}  // namespace fsco
