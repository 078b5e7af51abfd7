#pragma once

#include <optional>
#include <span>
#include <variant>

#include "lraaa/common.hpp"
#include "lraaa/tensor.hpp"

namespace lraaa {

/// Tensor-product sample grid: one point list per variable plus the samples on the full grid.
struct SampleGrid {
  std::vector<PointList> axes;
  DenseTensor data;

  std::size_t order() const noexcept { return axes.size(); }
  Shape shape() const;

  /// Throws kDuplicatePoint or kShapeMismatch when the invariants do not hold.
  void validate() const;
};

using Coefficients = std::variant<DenseTensor, CPFactors>;

/// Barycentric rational function r = n/d in d variables.
struct BarycentricModel {
  std::vector<PointList> nodes;
  DenseTensor interpolated;  // H, samples at the node tuples
  Coefficients coeffs;

  std::size_t order() const noexcept { return nodes.size(); }
  Shape node_shape() const;
  bool is_low_rank() const noexcept { return std::holds_alternative<CPFactors>(coeffs); }

  /// Coefficient tensor alpha, materialized if stored as CP factors.
  DenseTensor coefficient_tensor() const;

  void validate() const;
};

/// Modified Cauchy matrix (|nodes| x |points|) with unit columns at node-coincident points.
///
/// Point equality is exact: nodes are always copies of grid points.
Matrix modified_cauchy(std::span<const Complex> nodes, std::span<const Complex> points);

/// Index of `value` in `points` under exact equality, if present.
std::optional<std::size_t> find_exact(std::span<const Complex> points, Complex value);

Complex evaluate(const BarycentricModel& model, std::span<const Complex> z);

struct GridEvaluation {
  DenseTensor numerator;
  DenseTensor denominator;
  DenseTensor values;
};

/// Numerator, denominator and r(z) over the full tensor-product grid of `axes`.
GridEvaluation evaluate_grid_parts(const BarycentricModel& model, std::span<const PointList> axes);

DenseTensor evaluate_grid(const BarycentricModel& model, std::span<const PointList> axes);
DenseTensor evaluate_grid(const BarycentricModel& model, const SampleGrid& grid);

/// max |D - R| / max |D|; max |R| if every data entry is zero.
double relative_max_error(const DenseTensor& approx, const DenseTensor& data);

/// sum |D - R|^2 / sum |D|^2; the plain sum |R|^2 if the data is identically zero.
double relative_ls_error(const DenseTensor& approx, const DenseTensor& data);

/// sum |d(z) f(z) - n(z)|^2 / sum |f(z)|^2 over the grid.
double relative_linearized_ls_error(const BarycentricModel& model, const SampleGrid& grid);
double relative_linearized_ls_error(const GridEvaluation& parts, const DenseTensor& data);

}  // namespace lraaa
