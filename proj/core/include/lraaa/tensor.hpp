#pragma once

#include <span>

#include "lraaa/common.hpp"

namespace lraaa {

/// Dense complex d-way tensor stored row-major (last index fastest).
///
/// Element (i_1,...,i_d) lives at flat offset sum_j i_j * prod_{k>j} shape[k]
/// (0-based), which is the row-wise vectorization used for vec(alpha), vec(D)
/// and vec(H) throughout the library.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(Shape shape, Complex fill = Complex{0.0, 0.0});
  DenseTensor(Shape shape, std::vector<Complex> values);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t extent(std::size_t mode) const { return shape_.at(mode); }

  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }
  Complex* data() noexcept { return values_.data(); }
  const Complex* data() const noexcept { return values_.data(); }

  Complex& operator[](std::size_t flat) { return values_[flat]; }
  const Complex& operator[](std::size_t flat) const { return values_[flat]; }

  Complex& at(const MultiIndex& index) { return values_[offset(index)]; }
  const Complex& at(const MultiIndex& index) const { return values_[offset(index)]; }

  std::size_t offset(const MultiIndex& index) const;
  MultiIndex unravel(std::size_t flat) const;

  /// Same values under a new shape with identical element count.
  DenseTensor reshaped(Shape shape) const&;
  DenseTensor reshaped(Shape shape) &&;

  std::vector<Complex> release() && { return std::move(values_); }

 private:
  Shape shape_;
  std::vector<Complex> values_;
};

/// CP (canonical polyadic) factors: vec(alpha) = sum_k beta1_k (x) ... (x) betad_k.
class CPFactors {
 public:
  CPFactors() = default;
  explicit CPFactors(std::vector<Matrix> factors);

  std::size_t order() const noexcept { return factors_.size(); }
  std::size_t rank() const noexcept { return factors_.empty() ? 0 : static_cast<std::size_t>(factors_.front().cols()); }
  Shape shape() const;

  const Matrix& factor(std::size_t mode) const { return factors_.at(mode); }
  Matrix& factor(std::size_t mode) { return factors_.at(mode); }
  const std::vector<Matrix>& factors() const noexcept { return factors_; }

 private:
  std::vector<Matrix> factors_;
};

std::vector<Complex> vectorize(const DenseTensor& t);

/// Mode-j product: replaces extent `mode` by m.rows(); out(.., a, ..) = sum_i m(a, i) t(.., i, ..).
DenseTensor mode_product(const DenseTensor& t, const Matrix& m, std::size_t mode);

DenseTensor materialize_cp(const CPFactors& f);

/// Frobenius norm of the materialized tensor via the Hadamard product of factor Gram matrices.
double cp_frobenius_norm(const CPFactors& f);

/// Hadamard product of beta^(m)^H beta^(m) over all modes except `skip` (pass order() to skip none).
Matrix cp_gram(const CPFactors& f, std::size_t skip);

/// Kronecker product of vectors in the given order (first vector varies slowest).
Vector kron(std::span<const Vector> parts);

double squared_norm(std::span<const Complex> values);

/// Moves axis `mode` to the front, keeping the remaining axes in order.
DenseTensor move_axis_to_front(const DenseTensor& t, std::size_t mode);

}  // namespace lraaa
