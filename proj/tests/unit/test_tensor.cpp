#include <gtest/gtest.h>

#include "oracles.hpp"
#include "lraaa/tensor.hpp"

using namespace lraaa;

namespace {

DenseTensor random_tensor(std::mt19937_64& rng, const Shape& s) {
  DenseTensor t(s);
  std::normal_distribution<double> n;
  for (auto& v : t.values()) v = Complex{n(rng), n(rng)};
  return t;
}

}  // namespace

TEST(Tensor, OffsetIsRowMajor) {
  DenseTensor t({2, 3, 4});
  EXPECT_EQ(t.offset({0, 0, 1}), 1u);
  EXPECT_EQ(t.offset({0, 1, 0}), 4u);
  EXPECT_EQ(t.offset({1, 0, 0}), 12u);
  for (std::size_t f = 0; f < t.size(); ++f) EXPECT_EQ(t.offset(t.unravel(f)), f);
}

TEST(Tensor, RejectsBadShapes) {
  EXPECT_THROW(DenseTensor({2, 0}), Error);
  EXPECT_THROW(DenseTensor(Shape{2, 2}, std::vector<Complex>(3)), Error);
}

TEST(Tensor, ModeProductMatchesLoops) {
  std::mt19937_64 rng(1);
  const Shape s{3, 4, 2};
  const DenseTensor t = random_tensor(rng, s);
  for (std::size_t mode = 0; mode < 3; ++mode) {
    const Matrix m = oracle::random_matrix(rng, 5, static_cast<Eigen::Index>(s[mode]));
    const DenseTensor out = mode_product(t, m, mode);
    Shape os = s;
    os[mode] = 5;
    ASSERT_EQ(out.shape(), os);
    for (std::size_t f = 0; f < out.size(); ++f) {
      MultiIndex oi = out.unravel(f);
      Complex ref{0.0, 0.0};
      for (std::size_t i = 0; i < s[mode]; ++i) {
        MultiIndex ti = oi;
        ti[mode] = i;
        ref += m(static_cast<Eigen::Index>(oi[mode]), static_cast<Eigen::Index>(i)) * t.at(ti);
      }
      EXPECT_LT(std::abs(out[f] - ref), 1e-12);
    }
  }
}

TEST(Tensor, MaterializeCpMatchesLoops) {
  std::mt19937_64 rng(2);
  std::vector<Matrix> f{oracle::random_matrix(rng, 2, 3), oracle::random_matrix(rng, 3, 3), oracle::random_matrix(rng, 4, 3)};
  const CPFactors cp(f);
  const DenseTensor t = materialize_cp(cp);
  ASSERT_EQ(t.shape(), (Shape{2, 3, 4}));
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    const MultiIndex i = t.unravel(flat);
    Complex ref{0.0, 0.0};
    for (Eigen::Index k = 0; k < 3; ++k) ref += f[0](i[0], k) * f[1](i[1], k) * f[2](i[2], k);
    EXPECT_LT(std::abs(t[flat] - ref), 1e-12);
  }
  EXPECT_NEAR(cp_frobenius_norm(cp), std::sqrt(squared_norm(t.values())), 1e-11);
}

TEST(Tensor, KronOrderFirstSlowest) {
  Vector a(2), b(3);
  a << 1.0, 2.0;
  b << 1.0, 10.0, 100.0;
  const std::vector<Vector> parts{a, b};
  const Vector k = kron(parts);
  ASSERT_EQ(k.size(), 6);
  EXPECT_EQ(k(1), Complex(10.0));
  EXPECT_EQ(k(3), Complex(2.0));
}

TEST(Tensor, MoveAxisToFront) {
  std::mt19937_64 rng(3);
  const DenseTensor t = random_tensor(rng, {2, 3, 4});
  const DenseTensor m = move_axis_to_front(t, 2);
  ASSERT_EQ(m.shape(), (Shape{4, 2, 3}));
  for (std::size_t f = 0; f < t.size(); ++f) {
    const MultiIndex i = t.unravel(f);
    EXPECT_EQ(m.at({i[2], i[0], i[1]}), t[f]);
  }
}

TEST(Tensor, CpFactorsValidate) {
  EXPECT_THROW(CPFactors({Matrix::Ones(2, 2), Matrix::Ones(3, 1)}), Error);
  EXPECT_THROW(CPFactors({Matrix::Ones(2, 0)}), Error);
}
