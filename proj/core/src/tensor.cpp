#include "lraaa/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lraaa {

namespace {

void check_shape(const Shape& shape) {
  if (shape.empty() || shape.size() > kMaxOrder) {
    throw Error(ErrorCode::kInvalidArgument, "tensor order must be between 1 and " + std::to_string(kMaxOrder));
  }
  for (auto e : shape) {
    if (e == 0) throw Error(ErrorCode::kInvalidArgument, "tensor extents must be positive");
  }
}

std::size_t prod(const Shape& s, std::size_t begin, std::size_t end) {
  std::size_t n = 1;
  for (std::size_t i = begin; i < end; ++i) n *= s[i];
  return n;
}

}  // namespace

DenseTensor::DenseTensor(Shape shape, Complex fill) : shape_(std::move(shape)) {
  check_shape(shape_);
  values_.assign(shape_product(shape_), fill);
}

DenseTensor::DenseTensor(Shape shape, std::vector<Complex> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  check_shape(shape_);
  if (values_.size() != shape_product(shape_)) {
    throw Error(ErrorCode::kDimensionMismatch, "tensor value count does not match its shape");
  }
}

std::size_t DenseTensor::offset(const MultiIndex& index) const {
  std::size_t flat = 0;
  for (std::size_t j = 0; j < shape_.size(); ++j) flat = flat * shape_[j] + index[j];
  return flat;
}

MultiIndex DenseTensor::unravel(std::size_t flat) const {
  MultiIndex index(shape_.size());
  for (std::size_t j = shape_.size(); j-- > 0;) {
    index[j] = flat % shape_[j];
    flat /= shape_[j];
  }
  return index;
}

DenseTensor DenseTensor::reshaped(Shape shape) const& { return DenseTensor(std::move(shape), values_); }

DenseTensor DenseTensor::reshaped(Shape shape) && { return DenseTensor(std::move(shape), std::move(values_)); }

CPFactors::CPFactors(std::vector<Matrix> factors) : factors_(std::move(factors)) {
  if (factors_.empty() || factors_.size() > kMaxOrder) {
    throw Error(ErrorCode::kInvalidArgument, "CP factor count must be between 1 and " + std::to_string(kMaxOrder));
  }
  const auto r = factors_.front().cols();
  for (const auto& f : factors_) {
    if (f.cols() != r) throw Error(ErrorCode::kDimensionMismatch, "CP factors must share the same column count");
    if (f.rows() == 0) throw Error(ErrorCode::kInvalidArgument, "CP factors must have at least one row");
  }
  if (r == 0) throw Error(ErrorCode::kInvalidArgument, "CP rank must be at least 1");
}

Shape CPFactors::shape() const {
  Shape s;
  s.reserve(factors_.size());
  for (const auto& f : factors_) s.push_back(static_cast<std::size_t>(f.rows()));
  return s;
}

std::vector<Complex> vectorize(const DenseTensor& t) { return {t.values().begin(), t.values().end()}; }

DenseTensor mode_product(const DenseTensor& t, const Matrix& m, std::size_t mode) {
  if (mode >= t.order()) throw Error(ErrorCode::kDimensionMismatch, "mode index exceeds tensor order");
  const std::size_t n = t.extent(mode);
  if (static_cast<std::size_t>(m.cols()) != n) {
    std::ostringstream os;
    os << "mode_product: matrix has " << m.cols() << " columns but mode " << mode << " has extent " << n;
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
  Shape out_shape = t.shape();
  out_shape[mode] = static_cast<std::size_t>(m.rows());
  DenseTensor out(out_shape);

  const std::size_t pre = prod(t.shape(), 0, mode);
  const std::size_t post = prod(t.shape(), mode + 1, t.order());
  const auto rows = m.rows();
  const auto nn = static_cast<Eigen::Index>(n);

  if (post == 1) {
    Eigen::Map<const RowMajorMatrix> in(t.data(), static_cast<Eigen::Index>(pre), nn);
    Eigen::Map<RowMajorMatrix> res(out.data(), static_cast<Eigen::Index>(pre), rows);
    res.noalias() = in * m.transpose();
    return out;
  }
  const auto pp = static_cast<Eigen::Index>(post);
  for (std::size_t p = 0; p < pre; ++p) {
    Eigen::Map<const RowMajorMatrix> in(t.data() + p * n * post, nn, pp);
    Eigen::Map<RowMajorMatrix> res(out.data() + p * static_cast<std::size_t>(rows) * post, rows, pp);
    res.noalias() = m * in;
  }
  return out;
}

Vector kron(std::span<const Vector> parts) {
  Vector acc = Vector::Ones(1);
  for (const auto& v : parts) {
    Vector next(acc.size() * v.size());
    for (Eigen::Index a = 0; a < acc.size(); ++a) next.segment(a * v.size(), v.size()) = acc(a) * v;
    acc = std::move(next);
  }
  return acc;
}

DenseTensor materialize_cp(const CPFactors& f) {
  DenseTensor out(f.shape());
  Eigen::Map<Vector> acc(out.data(), static_cast<Eigen::Index>(out.size()));
  std::vector<Vector> cols(f.order());
  for (std::size_t k = 0; k < f.rank(); ++k) {
    for (std::size_t j = 0; j < f.order(); ++j) cols[j] = f.factor(j).col(static_cast<Eigen::Index>(k));
    acc += kron(cols);
  }
  return out;
}

Matrix cp_gram(const CPFactors& f, std::size_t skip) {
  const auto r = static_cast<Eigen::Index>(f.rank());
  Matrix g = Matrix::Ones(r, r);
  for (std::size_t j = 0; j < f.order(); ++j) {
    if (j == skip) continue;
    g = g.cwiseProduct(f.factor(j).adjoint() * f.factor(j));
  }
  return g;
}

double cp_frobenius_norm(const CPFactors& f) {
  const Matrix g = cp_gram(f, f.order());
  return std::sqrt(std::max(0.0, g.sum().real()));
}

double squared_norm(std::span<const Complex> values) {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s;
}

DenseTensor move_axis_to_front(const DenseTensor& t, std::size_t mode) {
  if (mode >= t.order()) throw Error(ErrorCode::kDimensionMismatch, "mode index exceeds tensor order");
  Shape s;
  s.push_back(t.extent(mode));
  for (std::size_t j = 0; j < t.order(); ++j)
    if (j != mode) s.push_back(t.extent(j));
  DenseTensor out(s);
  const std::size_t pre = prod(t.shape(), 0, mode);
  const std::size_t n = t.extent(mode);
  const std::size_t post = prod(t.shape(), mode + 1, t.order());
  const std::size_t rest = pre * post;
  for (std::size_t p = 0; p < pre; ++p)
    for (std::size_t i = 0; i < n; ++i)
      std::copy_n(t.data() + (p * n + i) * post, post, out.data() + i * rest + p * post);
  return out;
}

}  // namespace lraaa
