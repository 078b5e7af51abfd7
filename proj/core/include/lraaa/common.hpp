#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lraaa {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Shape = std::vector<std::size_t>;
using MultiIndex = std::vector<std::size_t>;
using PointList = std::vector<Complex>;

/// Largest tensor order accepted anywhere in the library.
inline constexpr std::size_t kMaxOrder = 8;

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kDuplicateNodes,
  kPole,
  kMemoryBudget,
  kSolverFailure,
  kRankDeficient,
  kMalformedDocument,
  kShapeMismatch,
  kDuplicatePoint,
  kUnsupportedVariant,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a rational function has a vanishing denominator away from its nodes.
class PoleError : public Error {
 public:
  PoleError(std::vector<Complex> point, const std::string& what)
      : Error(ErrorCode::kPole, what), point_(std::move(point)) {}
  const std::vector<Complex>& point() const noexcept { return point_; }

 private:
  std::vector<Complex> point_;
};

/// Raised when a dense builder would exceed its entry budget.
class MemoryBudgetError : public Error {
 public:
  MemoryBudgetError(double requested, double budget);
  double requested() const noexcept { return requested_; }
  double budget() const noexcept { return budget_; }

 private:
  double requested_;
  double budget_;
};

std::size_t shape_product(const Shape& shape);

}  // namespace lraaa
