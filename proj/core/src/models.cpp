#include "lraaa/models.hpp"

#include <cmath>
#include <random>

namespace lraaa {

namespace {

// Tridiagonal stiffness of the chain, returned as (diagonal, off-diagonal).
std::pair<std::vector<double>, std::vector<double>> chain_stiffness(const MsdSpec& spec, const Stiffness& k) {
  const std::size_t n = spec.masses;
  const std::size_t quarter = n / 4;
  std::vector<double> diag(n, 0.0), off(n - 1, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const double kt = k[t / quarter];
    diag[t] += kt;
    if (t + 1 < n) {
      diag[t + 1] += kt;
      off[t] = -kt;
    }
  }
  return {std::move(diag), std::move(off)};
}

Matrix random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = uni(rng);
  return m;
}

}  // namespace

Complex trig_f(std::span<const Complex> z) {
  if (z.empty()) throw Error(ErrorCode::kInvalidArgument, "trig_f needs at least one variable");
  Complex num{0.0, 0.0};
  Complex den{2.0 * static_cast<double>(z.size()), 0.0};
  for (const auto& v : z) {
    num += v;
    den += std::cos(v);
  }
  return num / den;
}

void MsdSpec::validate() const {
  if (masses < 4 || masses % 4 != 0) throw Error(ErrorCode::kInvalidArgument, "mass count must be a positive multiple of 4");
  if (!(mass > 0.0) || !(damping > 0.0)) throw Error(ErrorCode::kInvalidArgument, "mass and damping must be positive");
}

Complex msd_transfer(const MsdSpec& spec, Complex s, const Stiffness& k) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.masses);
  const auto [diag, off] = chain_stiffness(spec, k);

  // x = (positions, velocities); A = [0 I; -K/m -c/m I]
  Matrix a = Matrix::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n).setIdentity();
  for (Eigen::Index i = 0; i < n; ++i) {
    a(n + i, i) = -diag[i] / spec.mass;
    if (i + 1 < n) {
      a(n + i, i + 1) = -off[i] / spec.mass;
      a(n + i + 1, i) = -off[i] / spec.mass;
    }
    a(n + i, n + i) = -spec.damping / spec.mass;
  }
  Vector b = Vector::Zero(2 * n);
  b(n) = 1.0 / spec.mass;

  const Matrix shifted = s * Matrix::Identity(2 * n, 2 * n) - a;
  Eigen::FullPivLU<Matrix> lu(shifted);
  if (!lu.isInvertible()) throw PoleError({s, k[0], k[1], k[2], k[3]}, "sI - A(k) is singular");
  const Vector x = lu.solve(b);
  return x(n);
}

Complex msd_transfer_tridiagonal(const MsdSpec& spec, Complex s, const Stiffness& k) {
  spec.validate();
  const std::size_t n = spec.masses;
  const auto [diag, off] = chain_stiffness(spec, k);
  const Complex shift = s * s * spec.mass + s * spec.damping;
  // (T^{-1})_{11} by the continued fraction g_i = a_i - b_i^2 / g_{i+1}.
  Complex g = shift + diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    if (g == Complex{0.0, 0.0}) throw PoleError({s, k[0], k[1], k[2], k[3]}, "second-order system is singular");
    g = shift + diag[i] - off[i] * off[i] / g;
  }
  if (g == Complex{0.0, 0.0}) throw PoleError({s, k[0], k[1], k[2], k[3]}, "second-order system is singular");
  return s / g;
}

void BlockKSpec::validate() const {
  const auto a = k11.rows();
  const auto b2 = k22.rows();
  if (k11.cols() != a || k22.cols() != b2 || k12.rows() != a || k12.cols() != b2 || k21.rows() != b2 ||
      k21.cols() != a || b.size() != a + b2 || c.size() != a + b2) {
    throw Error(ErrorCode::kDimensionMismatch, "block system has inconsistent sizes");
  }
}

BlockKSpec make_blockk_spec(std::size_t m1, std::size_t m2, std::size_t rho, std::uint64_t seed) {
  if (m1 == 0 || m2 == 0) throw Error(ErrorCode::kInvalidArgument, "block sizes must be positive");
  std::mt19937_64 rng(seed);
  const auto a = static_cast<Eigen::Index>(m1);
  const auto b = static_cast<Eigen::Index>(m2);
  BlockKSpec s;
  s.k11 = Matrix::Identity(a, a) + 0.1 * random_complex(rng, a, a);
  s.k22 = Matrix::Identity(b, b) + 0.1 * random_complex(rng, b, b);
  s.k12 = Matrix::Zero(a, b);
  s.k21 = Matrix::Zero(b, a);
  for (std::size_t t = 0; t < rho; ++t) {
    s.k12 += 0.1 * random_complex(rng, a, 1) * random_complex(rng, 1, b);
    s.k21 += 0.1 * random_complex(rng, b, 1) * random_complex(rng, 1, a);
  }
  s.b = random_complex(rng, a + b, 1);
  s.c = random_complex(rng, a + b, 1);
  return s;
}

Complex blockk_f(const BlockKSpec& spec, Complex z1, Complex z2) {
  spec.validate();
  const auto a = spec.k11.rows();
  const auto b = spec.k22.rows();
  Matrix k(a + b, a + b);
  k.topLeftCorner(a, a) = z1 * spec.k11;
  k.topRightCorner(a, b) = spec.k12;
  k.bottomLeftCorner(b, a) = spec.k21;
  k.bottomRightCorner(b, b) = z2 * spec.k22;
  Eigen::FullPivLU<Matrix> lu(k);
  if (!lu.isInvertible()) throw PoleError({z1, z2}, "K(z) is singular");
  return (spec.c.transpose() * lu.solve(spec.b))(0, 0);
}

DenseTensor separable_data(const SeparableDataSpec& spec) {
  if (spec.deltas.empty()) throw Error(ErrorCode::kInvalidArgument, "separable data needs at least one factor");
  Shape shape;
  for (const auto& dlt : spec.deltas) shape.push_back(static_cast<std::size_t>(dlt.size()));
  DenseTensor t(shape);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    const MultiIndex idx = t.unravel(flat);
    Complex v{1.0, 0.0};
    for (std::size_t j = 0; j < idx.size(); ++j) v *= spec.deltas[j](static_cast<Eigen::Index>(idx[j]));
    t[flat] = v;
  }
  return t;
}

PointList linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {Complex{lo, 0.0}};
  PointList out(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Endpoints exact; interior points as in numpy.linspace.
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = Complex{i + 1 == n ? hi : lo + t * (hi - lo), 0.0};
  }
  return out;
}

SampleGrid msd_grid(const MsdSpec& spec, std::size_t s_points, std::size_t k_points) {
  spec.validate();
  std::vector<PointList> axes;
  PointList s_axis;
  for (const auto& v : linspace(0.1, 2.0, s_points)) s_axis.push_back(Complex{0.0, v.real()});
  axes.push_back(std::move(s_axis));
  for (int j = 0; j < 4; ++j) axes.push_back(linspace(0.5, 1.0, k_points));

  Shape shape{s_points, k_points, k_points, k_points, k_points};
  DenseTensor data(shape);
  std::size_t flat = 0;
  for (std::size_t a = 0; a < s_points; ++a)
    for (std::size_t i1 = 0; i1 < k_points; ++i1)
      for (std::size_t i2 = 0; i2 < k_points; ++i2)
        for (std::size_t i3 = 0; i3 < k_points; ++i3)
          for (std::size_t i4 = 0; i4 < k_points; ++i4) {
            const Stiffness k{axes[1][i1].real(), axes[2][i2].real(), axes[3][i3].real(), axes[4][i4].real()};
            data[flat++] = msd_transfer_tridiagonal(spec, axes[0][a], k);
          }
  return SampleGrid{std::move(axes), std::move(data)};
}

SampleGrid make_grid(Benchmark kind, const GridParams& p) {
  auto pts = [&](std::size_t def) { return p.points ? p.points : def; };
  switch (kind) {
    case Benchmark::kTrig3:
      return sample_grid(std::vector<PointList>(3, linspace(-10.0, 10.0, pts(100))), trig_f);
    case Benchmark::kTrig5:
      return sample_grid(std::vector<PointList>(5, linspace(-4.0, 4.0, pts(30))), trig_f);
    case Benchmark::kMsd:
      return msd_grid(p.msd, pts(50), p.points ? p.points : 25);
    case Benchmark::kBlockK: {
      const BlockKSpec spec = make_blockk_spec(p.block_m1, p.block_m2, p.block_rank, p.seed);
      return sample_grid(std::vector<PointList>(2, linspace(1.0, 2.0, pts(10))),
                         [&](std::span<const Complex> z) { return blockk_f(spec, z[0], z[1]); });
    }
    case Benchmark::kSeparable: {
      if (p.separable_order < 1 || p.separable_order > kMaxOrder) {
        throw Error(ErrorCode::kInvalidArgument, "separable order out of range");
      }
      std::vector<PointList> axes(p.separable_order, linspace(0.0, 1.0, pts(8)));
      SeparableDataSpec spec;
      for (std::size_t j = 0; j < axes.size(); ++j) {
        const double shift = 1.0 + 0.5 * static_cast<double>(j);
        Vector dl(static_cast<Eigen::Index>(axes[j].size()));
        for (std::size_t i = 0; i < axes[j].size(); ++i) dl(static_cast<Eigen::Index>(i)) = 1.0 / (axes[j][i] + shift);
        spec.deltas.push_back(std::move(dl));
      }
      DenseTensor data = separable_data(spec);
      return SampleGrid{std::move(axes), std::move(data)};
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown benchmark");
}

}  // namespace lraaa
