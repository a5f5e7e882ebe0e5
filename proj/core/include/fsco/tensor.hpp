#ifndef FSCO_TENSOR_HPP
#define FSCO_TENSOR_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace fsco {

/// Dense row-major array of 64-bit floats. The universal value carrier for
/// activations, gradients and parameters. Value semantics; cheap to copy at
/// desk scale.
class Tensor {
 public:
  Tensor() = default;

  /// Zero-filled tensor of the given shape. Every extent must be positive.
  explicit Tensor(std::vector<std::size_t> shape);

  /// Tensor adopting existing data; product(shape) must equal data.size().
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  /// 2-D convenience constructors.
  static Tensor matrix(std::size_t rows, std::size_t cols);
  static Tensor vector(std::size_t n);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }

  /// Extent of dimension d (0-indexed).
  std::size_t dim(std::size_t d) const;

  /// rows()/cols() require rank 2.
  std::size_t rows() const;
  std::size_t cols() const;

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  /// 2-D element access, row-major.
  double& at(std::size_t r, std::size_t c);
  double at(std::size_t r, std::size_t c) const;

  /// Pointer to the start of row r (rank 2).
  double* row(std::size_t r);
  const double* row(std::size_t r) const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  /// True when every entry is finite (no NaN/Inf).
  bool all_finite() const;

  void fill(double value);

  /// "[r x c]" style shape string for error messages.
  std::string shape_str() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

/// Throws NumericError mentioning `what` if any entry of t is NaN/Inf.
void require_finite(const Tensor& t, const char* what);

}  // namespace fsco

#endif  // FSCO_TENSOR_HPP
