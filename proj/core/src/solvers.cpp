#include "lraaa/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace lraaa {

namespace {

constexpr double kPivotFloor = 1e-14;

}  // namespace

void normalize_phase(Vector& x) {
  if (x.size() == 0) return;
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i));
    if (a > mag) {
      mag = a;
      best = i;
    }
  }
  if (mag > 0.0) x *= std::conj(x(best)) / mag;
}

Matrix triangular_factor(const Matrix& m) {
  const auto p = m.cols();
  Matrix r = Matrix::Zero(p, p);
  if (m.rows() == 0 || p == 0) return r;
  Eigen::HouseholderQR<Matrix> qr(m);
  const auto k = std::min(m.rows(), p);
  r.topRows(k) = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return r;
}

ConstrainedLsSolution solve_constrained_factored(const Matrix& a, const Matrix& f, std::size_t cp_rank) {
  const auto p = f.cols();
  if (f.rows() != p || a.cols() != p) throw Error(ErrorCode::kDimensionMismatch, "constrained solve: size mismatch");
  if (p == 0) throw Error(ErrorCode::kInvalidArgument, "constrained solve: empty system");
  for (Eigen::Index i = 0; i < p; ++i) {
    if (f(i, i) == Complex{0.0, 0.0}) {
      throw Error(ErrorCode::kRankDeficient, "constraint factor is singular; truncate the CP rank first");
    }
  }
  // QR of [A; F] = [Q1; Q2] Rs. With x = Rs^-1 y, ||A x|| = ||Q1 y|| and ||F x|| = ||Q2 y||, and
  // Q1^H Q1 + Q2^H Q2 = I, so the minimizer is the smallest right singular vector of Q1. Nothing here
  // inverts F, so accuracy does not degrade with cond(F).
  const Eigen::Index m = a.rows();
  Matrix stacked(m + p, p);
  stacked.topRows(m) = a;
  stacked.bottomRows(p) = f.triangularView<Eigen::Upper>();
  Eigen::HouseholderQR<Matrix> qr(stacked);
  const Matrix q = qr.householderQ() * Matrix::Identity(m + p, p);
  const Matrix rs = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < p; ++i) {
    if (rs(i, i) == Complex{0.0, 0.0}) throw Error(ErrorCode::kRankDeficient, "constrained solve: stacked system is singular");
  }
  // Singular values of Q1 and Q2 pair up as cosines and sines. Once the smallest cosine is above
  // 1/sqrt(2) the cosines crowd against 1 and lose their gaps, so take the top sine vector of Q2.
  Eigen::JacobiSVD<Matrix> svd(q.topRows(m), Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw Error(ErrorCode::kSolverFailure, "SVD failed in constrained solve");
  Vector y;
  if (m >= p && svd.singularValues()(p - 1) > std::sqrt(0.5)) {
    Eigen::JacobiSVD<Matrix> sine(q.bottomRows(p), Eigen::ComputeFullV);
    if (sine.info() != Eigen::Success) throw Error(ErrorCode::kSolverFailure, "SVD failed in constrained solve");
    y = sine.matrixV().col(0);
  } else {
    y = svd.matrixV().col(p - 1);
  }
  Vector x = rs.triangularView<Eigen::Upper>().solve(y);
  x /= (f.triangularView<Eigen::Upper>() * x).norm();
  if (!x.allFinite()) throw Error(ErrorCode::kSolverFailure, "constrained solve produced non-finite values");
  normalize_phase(x);

  ConstrainedLsSolution out;
  out.objective = (a * x).squaredNorm();
  out.constraint_residual = std::abs((f.triangularView<Eigen::Upper>() * x).norm() - 1.0);
  out.solution = std::move(x);
  out.effective_rank = cp_rank;
  return out;
}

ConstrainedLsSolution solve_full(const Matrix& l) {
  if (l.cols() == 0) throw Error(ErrorCode::kInvalidArgument, "solve_full: empty matrix");
  const Matrix identity = Matrix::Identity(l.cols(), l.cols());
  return solve_constrained_factored(triangular_factor(l), identity, 1);
}

ConstrainedLsSolution solve_constrained(const Matrix& lc, const Matrix& g, std::size_t cp_rank) {
  const auto p = lc.cols();
  if (g.rows() != p || g.cols() != p) throw Error(ErrorCode::kDimensionMismatch, "constraint Gram has the wrong size");

  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kRankDeficient, "constraint Gram is singular; truncate the CP rank first");
  }
  double shift = 0.0;
  const Eigen::VectorXd piv = llt.matrixL().toDenseMatrix().diagonal().cwiseAbs2().real();
  if (piv.minCoeff() < kPivotFloor * piv.maxCoeff()) {
    shift = kPivotFloor * g.trace().real() / static_cast<double>(p);
    llt.compute(g + shift * Matrix::Identity(p, p));
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kSolverFailure, "Cholesky failed after diagonal shift");
    }
  }
  const Matrix f = llt.matrixU();
  auto out = solve_constrained_factored(triangular_factor(lc), f, cp_rank);
  out.diagonal_shift = shift;
  // Report feasibility against the unshifted constraint.
  out.constraint_residual = std::abs(std::sqrt(std::max(0.0, (out.solution.adjoint() * g * out.solution)(0, 0).real())) - 1.0);
  return out;
}

Matrix off_mode_khatri_rao(const CPFactors& factors, std::size_t mode) {
  const auto r = static_cast<Eigen::Index>(factors.rank());
  std::size_t rows = 1;
  for (std::size_t m = 0; m < factors.order(); ++m)
    if (m != mode) rows *= static_cast<std::size_t>(factors.factor(m).rows());
  Matrix k(static_cast<Eigen::Index>(rows), r);
  std::vector<Vector> parts;
  for (Eigen::Index c = 0; c < r; ++c) {
    parts.clear();
    for (std::size_t m = 0; m < factors.order(); ++m)
      if (m != mode) parts.push_back(factors.factor(m).col(c));
    k.col(c) = kron(parts);
  }
  return k;
}

TruncationResult truncate_rank_checked(const CPFactors& factors, std::size_t mode, double tol) {
  if (mode >= factors.order()) throw Error(ErrorCode::kDimensionMismatch, "mode index exceeds CP order");
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "truncation tolerance must be positive");
  const auto r = static_cast<Eigen::Index>(factors.rank());
  const Matrix kr = off_mode_khatri_rao(factors, mode);

  Eigen::ColPivHouseholderQR<Matrix> qr(kr);
  qr.setThreshold(tol);
  const auto rho = std::max<Eigen::Index>(1, qr.rank());
  if (rho >= r) return {factors, false};

  // kr * P = Q [R11 R12]; the kept columns reproduce the rest via W = [I, R11^{-1} R12].
  const Matrix rmat = qr.matrixR().topRows(std::min(kr.rows(), r)).triangularView<Eigen::Upper>();
  const Matrix r11 = rmat.topLeftCorner(rho, rho);
  const Matrix r12 = rmat.block(0, rho, rho, r - rho);
  Matrix w_perm(rho, r);
  w_perm.leftCols(rho).setIdentity();
  w_perm.rightCols(r - rho) = r11.triangularView<Eigen::Upper>().solve(r12);

  const auto& perm = qr.colsPermutation().indices();
  Matrix w(rho, r);
  for (Eigen::Index c = 0; c < r; ++c) w.col(perm(c)) = w_perm.col(c);

  std::vector<Matrix> out(factors.order());
  for (std::size_t m = 0; m < factors.order(); ++m) {
    if (m == mode) {
      out[m] = factors.factor(m) * w.transpose();
      continue;
    }
    out[m].resize(factors.factor(m).rows(), rho);
    for (Eigen::Index c = 0; c < rho; ++c) out[m].col(c) = factors.factor(m).col(perm(c));
  }
  return {CPFactors(std::move(out)), true};
}

CPFactors truncate_rank(const CPFactors& factors, std::size_t mode, double tol) {
  return truncate_rank_checked(factors, mode, tol).factors;
}

}  // namespace lraaa
