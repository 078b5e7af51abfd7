#pragma once

#include "lraaa/barycentric.hpp"
#include "lraaa/common.hpp"
#include "lraaa/tensor.hpp"

namespace lraaa {

/// Default refusal threshold (matrix entries) for the dense Loewner builder.
inline constexpr double kDefaultMemoryBudget = 2e8;

/// Operands of the higher-order Loewner matrix for a grid and a choice of node indices.
///
/// Holds a non-owning reference to the grid; the grid must outlive the context.
class LoewnerContext {
 public:
  /// `node_indices[j]` lists positions in grid.axes[j]; order defines lambda^(j).
  LoewnerContext(const SampleGrid& grid, std::vector<std::vector<std::size_t>> node_indices);

  std::size_t order() const noexcept { return cauchy_.size(); }
  const SampleGrid& grid() const noexcept { return *grid_; }
  const DenseTensor& data() const noexcept { return grid_->data; }
  const DenseTensor& interpolated() const noexcept { return interpolated_; }
  const Matrix& cauchy(std::size_t mode) const { return cauchy_.at(mode); }
  const std::vector<std::vector<std::size_t>>& node_indices() const noexcept { return node_indices_; }
  std::vector<PointList> nodes() const;

  Shape grid_shape() const { return grid_->data.shape(); }
  Shape node_shape() const { return interpolated_.shape(); }

 private:
  const SampleGrid* grid_;
  std::vector<std::vector<std::size_t>> node_indices_;
  std::vector<Matrix> cauchy_;  // C^(j), n_j x N_j
  DenseTensor interpolated_;
};

/// L_d = diag(vec D) [C1 (x) ... (x) Cd]^T - [C1 (x) ... (x) Cd]^T diag(vec H).
Matrix build_full(const LoewnerContext& ctx, double memory_budget = kDefaultMemoryBudget);

/// Block columns beta^(1)_k (x) ... (x) I_{n_j} (x) ... (x) beta^(d)_k, k = 1..r.
///
/// The matching parameter vector stacks the columns of beta^(j): x[k * n_j + i] = beta^(j)(i, k).
Matrix build_J(const CPFactors& factors, std::size_t mode);

/// J^H J without forming J: block (k, l) equals the off-mode Gram product times I_{n_j}.
Matrix gram_of_J(const CPFactors& factors, std::size_t mode);

/// Contracted Loewner matrix L_d J^(j) assembled by mode products (never forms L_d).
Matrix build_contracted(const LoewnerContext& ctx, const CPFactors& factors, std::size_t mode);

/// Upper-triangular R with R^H R = (L_d J^(j))^H (L_d J^(j)).
///
/// Exploits that every row of the contracted matrix factors as c_i(z_j) [D(z) s_k(z') - h_ik(z')],
/// so only O(prod_{m != j} N_m * n_j r) memory and O(prod N * n_j r^2) work are needed.
Matrix contracted_factor(const LoewnerContext& ctx, const CPFactors& factors, std::size_t mode);

/// Column-stacked parameter vector of a CP factor, the ordering build_J expects.
Vector stack_columns(const Matrix& factor);
Matrix unstack_columns(const Vector& x, Eigen::Index rows, Eigen::Index cols);

}  // namespace lraaa
