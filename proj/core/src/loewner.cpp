#include "lraaa/loewner.hpp"

#include <algorithm>

namespace lraaa {

namespace {

std::size_t prod(const Shape& s, std::size_t begin, std::size_t end) {
  std::size_t n = 1;
  for (std::size_t i = begin; i < end; ++i) n *= s[i];
  return n;
}

void check_factors(const LoewnerContext& ctx, const CPFactors& factors, std::size_t mode) {
  if (factors.order() != ctx.order() || factors.shape() != ctx.node_shape()) {
    throw Error(ErrorCode::kDimensionMismatch, "CP factor shapes do not match the Loewner context");
  }
  if (mode >= ctx.order()) throw Error(ErrorCode::kDimensionMismatch, "mode index exceeds the number of variables");
  if (factors.rank() == 0) throw Error(ErrorCode::kInvalidArgument, "CP rank must be at least 1");
}

// Tensor of shape (n_1, ..., n_d, P) whose trailing fibres are the rows of `m`.
DenseTensor rows_as_tensor(const Matrix& m, const Shape& lead) {
  Shape s = lead;
  s.push_back(static_cast<std::size_t>(m.cols()));
  DenseTensor t(s);
  Eigen::Map<RowMajorMatrix>(t.data(), m.rows(), m.cols()) = m;
  return t;
}

// Applies C^(m)^T along every leading mode of a (n_1..n_d, P) tensor.
DenseTensor expand_to_grid(DenseTensor t, const LoewnerContext& ctx) {
  for (std::size_t m = 0; m < ctx.order(); ++m) t = mode_product(t, ctx.cauchy(m).transpose(), m);
  return t;
}

}  // namespace

LoewnerContext::LoewnerContext(const SampleGrid& grid, std::vector<std::vector<std::size_t>> node_indices)
    : grid_(&grid), node_indices_(std::move(node_indices)) {
  const std::size_t d = grid.order();
  if (node_indices_.size() != d) throw Error(ErrorCode::kDimensionMismatch, "one node index list per variable required");
  Shape ns(d);
  cauchy_.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto& idx = node_indices_[j];
    if (idx.empty()) throw Error(ErrorCode::kInvalidArgument, "every variable needs at least one node");
    PointList lam;
    for (auto i : idx) {
      if (i >= grid.axes[j].size()) throw Error(ErrorCode::kDimensionMismatch, "node index outside the grid axis");
      lam.push_back(grid.axes[j][i]);
    }
    cauchy_[j] = modified_cauchy(lam, grid.axes[j]);
    ns[j] = idx.size();
  }
  interpolated_ = DenseTensor(ns);
  MultiIndex gi(d);
  for (std::size_t flat = 0; flat < interpolated_.size(); ++flat) {
    const MultiIndex ni = interpolated_.unravel(flat);
    for (std::size_t j = 0; j < d; ++j) gi[j] = node_indices_[j][ni[j]];
    interpolated_[flat] = grid.data.at(gi);
  }
}

std::vector<PointList> LoewnerContext::nodes() const {
  std::vector<PointList> out(order());
  for (std::size_t j = 0; j < order(); ++j)
    for (auto i : node_indices_[j]) out[j].push_back(grid_->axes[j][i]);
  return out;
}

Matrix build_full(const LoewnerContext& ctx, double memory_budget) {
  const Shape gs = ctx.grid_shape();
  const Shape ns = ctx.node_shape();
  const double rows = static_cast<double>(shape_product(gs));
  const double cols = static_cast<double>(shape_product(ns));
  if (rows * cols > memory_budget) throw MemoryBudgetError(rows * cols, memory_budget);

  const std::size_t d = ctx.order();
  Matrix l(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::vector<Vector> parts(d);
  const auto& data = ctx.data();
  const auto& h = ctx.interpolated();
  for (std::size_t c = 0; c < h.size(); ++c) {
    const MultiIndex ni = h.unravel(c);
    for (std::size_t j = 0; j < d; ++j) parts[j] = ctx.cauchy(j).row(static_cast<Eigen::Index>(ni[j])).transpose();
    const Vector col = kron(parts);
    auto out = l.col(static_cast<Eigen::Index>(c));
    for (Eigen::Index z = 0; z < col.size(); ++z) out(z) = data[static_cast<std::size_t>(z)] * col(z) - col(z) * h[c];
  }
  return l;
}

Matrix build_J(const CPFactors& factors, std::size_t mode) {
  if (mode >= factors.order()) throw Error(ErrorCode::kDimensionMismatch, "mode index exceeds CP order");
  const Shape ns = factors.shape();
  const auto nj = static_cast<Eigen::Index>(ns[mode]);
  const auto r = static_cast<Eigen::Index>(factors.rank());
  Matrix j_mat(static_cast<Eigen::Index>(shape_product(ns)), nj * r);
  std::vector<Vector> parts(factors.order());
  for (Eigen::Index k = 0; k < r; ++k) {
    for (std::size_t m = 0; m < factors.order(); ++m)
      if (m != mode) parts[m] = factors.factor(m).col(k);
    for (Eigen::Index i = 0; i < nj; ++i) {
      parts[mode] = Vector::Unit(nj, i);
      j_mat.col(k * nj + i) = kron(parts);
    }
  }
  return j_mat;
}

Matrix gram_of_J(const CPFactors& factors, std::size_t mode) {
  if (mode >= factors.order()) throw Error(ErrorCode::kDimensionMismatch, "mode index exceeds CP order");
  const Matrix gamma = cp_gram(factors, mode);
  const auto nj = factors.factor(mode).rows();
  const auto r = gamma.rows();
  Matrix g = Matrix::Zero(nj * r, nj * r);
  for (Eigen::Index k = 0; k < r; ++k)
    for (Eigen::Index l = 0; l < r; ++l) g.block(k * nj, l * nj, nj, nj).diagonal().setConstant(gamma(k, l));
  return g;
}

Matrix build_contracted(const LoewnerContext& ctx, const CPFactors& factors, std::size_t mode) {
  check_factors(ctx, factors, mode);
  const Shape ns = ctx.node_shape();
  const Matrix j_mat = build_J(factors, mode);
  const auto p = j_mat.cols();

  // diag(vec D) [C (x) ...]^T J: expand J through the Cauchy matrices, then scale rows by D.
  DenseTensor left = expand_to_grid(rows_as_tensor(j_mat, ns), ctx);
  // [C (x) ...]^T diag(vec H) J: scale rows of J by H, then expand.
  Matrix hj = j_mat;
  const auto& h = ctx.interpolated();
  for (Eigen::Index row = 0; row < hj.rows(); ++row) hj.row(row) *= h[static_cast<std::size_t>(row)];
  DenseTensor right = expand_to_grid(rows_as_tensor(hj, ns), ctx);

  const auto rows = static_cast<Eigen::Index>(ctx.data().size());
  Eigen::Map<const RowMajorMatrix> lm(left.data(), rows, p);
  Eigen::Map<const RowMajorMatrix> rm(right.data(), rows, p);
  Eigen::Map<const Vector> dvec(ctx.data().data(), rows);
  Matrix out = dvec.asDiagonal() * lm;
  out -= rm;
  return out;
}

Matrix contracted_factor(const LoewnerContext& ctx, const CPFactors& factors, std::size_t mode) {
  check_factors(ctx, factors, mode);
  const std::size_t d = ctx.order();
  const Shape gs = ctx.grid_shape();
  const auto nj = static_cast<Eigen::Index>(ctx.node_shape()[mode]);
  const auto r = static_cast<Eigen::Index>(factors.rank());
  const Eigen::Index p = nj * r;
  const std::size_t n_mode = gs[mode];
  const std::size_t pre = prod(gs, 0, mode);
  const std::size_t post = prod(gs, mode + 1, d);
  const auto rest = static_cast<Eigen::Index>(pre * post);

  // s_k(z') = prod_{m != j} (C^(m)^T beta^(m)_k)(z_m), one column per k.
  Matrix s(rest, r);
  {
    std::vector<Vector> parts;
    for (Eigen::Index k = 0; k < r; ++k) {
      parts.clear();
      for (std::size_t m = 0; m < d; ++m)
        if (m != mode) parts.push_back(ctx.cauchy(m).transpose() * factors.factor(m).col(k));
      s.col(k) = parts.empty() ? Vector::Ones(1) : kron(parts);
    }
  }

  // h_{k,i}(z'): H with mode j fixed at i, weighted by beta^(m)_k and expanded through C^(m), m != j.
  Matrix hm(rest, p);
  {
    const DenseTensor front = move_axis_to_front(ctx.interpolated(), mode);
    for (Eigen::Index k = 0; k < r; ++k) {
      DenseTensor t = front;
      std::size_t q = 1;
      for (std::size_t m = 0; m < d; ++m) {
        if (m == mode) continue;
        const Matrix weight = ctx.cauchy(m).transpose() * factors.factor(m).col(k).asDiagonal();
        t = mode_product(t, weight, q++);
      }
      hm.middleCols(k * nj, nj) = Eigen::Map<const RowMajorMatrix>(t.data(), nj, rest).transpose();
    }
  }

  // Two-level tall-skinny QR of hm over row chunks, so every application of Q^H touches a
  // cache-sized block instead of streaming the whole slice once per reflector.
  const Eigen::Index chunk = std::max<Eigen::Index>(512, 2 * p);
  const Eigen::Index n_chunks = (rest + chunk - 1) / chunk;
  std::vector<Vector> chunk_coeffs(static_cast<std::size_t>(n_chunks));
  std::vector<Eigen::Index> chunk_top(static_cast<std::size_t>(n_chunks));
  Eigen::Index stacked_rows = 0;
  for (Eigen::Index c = 0; c < n_chunks; ++c) {
    const Eigen::Index r0 = c * chunk;
    const Eigen::Index len = std::min(chunk, rest - r0);
    Eigen::HouseholderQR<Matrix> local(hm.middleRows(r0, len));
    hm.middleRows(r0, len) = local.matrixQR();
    chunk_coeffs[static_cast<std::size_t>(c)] = local.hCoeffs().conjugate();  // as householderQ() does
    chunk_top[static_cast<std::size_t>(c)] = std::min(len, p);
    stacked_rows += chunk_top[static_cast<std::size_t>(c)];
  }
  Matrix level2(stacked_rows, p);
  for (Eigen::Index c = 0, off = 0; c < n_chunks; ++c) {
    const Eigen::Index k = chunk_top[static_cast<std::size_t>(c)];
    level2.middleRows(off, k) = hm.block(c * chunk, 0, k, p).triangularView<Eigen::Upper>();
    off += k;
  }
  const Eigen::HouseholderQR<Matrix> qr2(level2);
  const Eigen::Index q = std::min(stacked_rows, p);
  const Matrix rh = qr2.matrixQR().topRows(q).triangularView<Eigen::Upper>();

  const Matrix& cj = ctx.cauchy(mode);
  const auto& data = ctx.data();
  const auto nz = static_cast<Eigen::Index>(n_mode);
  const Eigen::Index wcols = nz * r;

  // Per slice z_j: R factor (at most r rows) of everything Q^H D S_{z_j} leaves outside span(Q).
  std::vector<Matrix> resid(n_mode, Matrix(0, r));
  auto absorb = [&](Matrix& acc, const auto& rows) {
    if (rows.rows() == 0) return;
    Matrix m(acc.rows() + rows.rows(), r);
    m << acc, rows;
    Eigen::HouseholderQR<Eigen::Ref<Matrix>> small(m);
    acc = small.matrixQR().topRows(std::min<Eigen::Index>(m.rows(), r)).triangularView<Eigen::Upper>();
  };

  Matrix tops(stacked_rows, wcols);
  Matrix w;
  for (Eigen::Index c = 0, off = 0; c < n_chunks; ++c) {
    const Eigen::Index r0 = c * chunk;
    const Eigen::Index len = std::min(chunk, rest - r0);
    w.resize(len, wcols);
    for (Eigen::Index t = 0; t < len; ++t) {
      const auto flat = static_cast<std::size_t>(r0 + t);
      const std::size_t a = flat / post;
      const std::size_t b = flat % post;
      for (std::size_t zj = 0; zj < n_mode; ++zj) {
        const Complex v = data.data()[(a * n_mode + zj) * post + b];
        for (Eigen::Index k = 0; k < r; ++k) w(t, static_cast<Eigen::Index>(zj) * r + k) = v * s(r0 + t, k);
      }
    }
    const auto& hc = chunk_coeffs[static_cast<std::size_t>(c)];
    w.applyOnTheLeft(Eigen::householderSequence(hm.middleRows(r0, len), hc).adjoint());
    const Eigen::Index k = chunk_top[static_cast<std::size_t>(c)];
    tops.middleRows(off, k) = w.topRows(k);
    off += k;
    if (len > k)
      for (std::size_t zj = 0; zj < n_mode; ++zj)
        absorb(resid[zj], w.block(k, static_cast<Eigen::Index>(zj) * r, len - k, r));
  }
  tops.applyOnTheLeft(qr2.householderQ().adjoint());
  if (stacked_rows > q)
    for (std::size_t zj = 0; zj < n_mode; ++zj)
      absorb(resid[zj], tops.block(q, static_cast<Eigen::Index>(zj) * r, stacked_rows - q, r));

  Eigen::Index block_rows = q;
  for (const auto& m : resid) block_rows = std::max(block_rows, q + m.rows());
  Matrix stacked = Matrix::Zero(std::max<Eigen::Index>(nz * block_rows, p), p);
  for (Eigen::Index zj = 0; zj < nz; ++zj) {
    const Matrix& r2 = resid[static_cast<std::size_t>(zj)];
    const Eigen::Index row0 = zj * block_rows;
    for (Eigen::Index k = 0; k < r; ++k) {
      for (Eigen::Index i = 0; i < nj; ++i) {
        const Complex c = cj(i, zj);
        if (c == Complex{0.0, 0.0}) continue;
        const Eigen::Index col = k * nj + i;
        stacked.block(row0, col, q, 1) = c * (tops.block(0, zj * r + k, q, 1) - rh.col(col));
        if (r2.rows() > 0) stacked.block(row0 + q, col, r2.rows(), 1) = c * r2.col(k);
      }
    }
  }

  Eigen::HouseholderQR<Eigen::Ref<Matrix>> final_qr(stacked);
  return final_qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
}

Vector stack_columns(const Matrix& factor) {
  return Eigen::Map<const Vector>(factor.data(), factor.size());
}

Matrix unstack_columns(const Vector& x, Eigen::Index rows, Eigen::Index cols) {
  if (x.size() != rows * cols) throw Error(ErrorCode::kDimensionMismatch, "parameter vector has the wrong length");
  return Eigen::Map<const Matrix>(x.data(), rows, cols);
}

}  // namespace lraaa
