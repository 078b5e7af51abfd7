#pragma once

#include "lraaa/common.hpp"
#include "lraaa/tensor.hpp"

namespace lraaa {

struct ConstrainedLsSolution {
  Vector solution;
  double objective = 0.0;           // ||L x||^2 at the solution
  double constraint_residual = 0.0; // | ||J x|| - 1 |
  std::size_t effective_rank = 1;   // CP rank in effect for the solve
  double diagonal_shift = 0.0;      // nonzero when the constraint Gram needed regularization
};

/// Smallest right singular vector of `l` (unit 2-norm, phase-normalized).
ConstrainedLsSolution solve_full(const Matrix& l);

/// min ||lc x||^2 subject to x^H g x = 1, via Cholesky of g and an SVD of lc R^{-1}.
ConstrainedLsSolution solve_constrained(const Matrix& lc, const Matrix& g, std::size_t cp_rank = 1);

/// min ||a x||^2 subject to ||f x|| = 1 for an invertible upper-triangular f.
///
/// `a` may be any matrix with the same Gram as the objective matrix (e.g. its R factor).
ConstrainedLsSolution solve_constrained_factored(const Matrix& a, const Matrix& f, std::size_t cp_rank = 1);

/// Upper-triangular R with R^H R = m^H m (Householder QR, zero-padded when m is wide).
Matrix triangular_factor(const Matrix& m);

/// Rotates x so that its largest-magnitude entry is real and positive.
void normalize_phase(Vector& x);

/// Result of a rank check on the Khatri-Rao product of the factors other than `mode`.
struct TruncationResult {
  CPFactors factors;
  bool truncated = false;
};

/// Drops CP columns that are numerically dependent in the off-mode Khatri-Rao product.
///
/// Dependent columns are folded into factor `mode`, so the materialized tensor is preserved
/// up to `tol` times the magnitude of the dropped directions.
TruncationResult truncate_rank_checked(const CPFactors& factors, std::size_t mode, double tol = 1e-12);
CPFactors truncate_rank(const CPFactors& factors, std::size_t mode, double tol = 1e-12);

/// Khatri-Rao product of all factors except `mode` (column k = kron of the k-th columns).
Matrix off_mode_khatri_rao(const CPFactors& factors, std::size_t mode);

}  // namespace lraaa
