#include <gtest/gtest.h>

#include "oracles.hpp"
#include "lraaa/solvers.hpp"

using namespace lraaa;

namespace {

CPFactors random_cp(std::mt19937_64& rng, const Shape& ns, std::size_t r) {
  std::vector<Matrix> f;
  for (auto n : ns) f.push_back(oracle::random_matrix(rng, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r)));
  return CPFactors(f);
}

Vector vec_tensor(const DenseTensor& t) { return Eigen::Map<const Vector>(t.data(), static_cast<Eigen::Index>(t.size())); }

}  // namespace

TEST(Loewner, FullMatchesEntrywiseOracle) {
  std::mt19937_64 rng(1);
  const SampleGrid g = oracle::random_grid(rng, {5, 4, 3});
  const std::vector<std::vector<std::size_t>> idx{{0, 2}, {3}, {1, 2}};
  LoewnerContext ctx(g, idx);
  const Matrix l = build_full(ctx);
  const Matrix ref = oracle::loewner(g, idx);
  EXPECT_LT((l - ref).norm(), 1e-12 * ref.norm());
}

TEST(Loewner, RowsAtNodeTuplesVanish) {
  std::mt19937_64 rng(2);
  const SampleGrid g = oracle::random_grid(rng, {4, 4});
  const std::vector<std::vector<std::size_t>> idx{{1, 3}, {0, 2}};
  LoewnerContext ctx(g, idx);
  const Matrix l = build_full(ctx);
  for (auto i : idx[0])
    for (auto k : idx[1]) EXPECT_EQ(l.row(static_cast<Eigen::Index>(g.data.offset({i, k}))).norm(), 0.0);
}

TEST(Loewner, MemoryBudgetRefuses) {
  std::mt19937_64 rng(3);
  const SampleGrid g = oracle::random_grid(rng, {6, 6});
  LoewnerContext ctx(g, {{0, 1}, {0, 1}});
  EXPECT_THROW(build_full(ctx, 100.0), MemoryBudgetError);
  EXPECT_NO_THROW(build_full(ctx, 144.0));
}

TEST(Loewner, JReproducesAlpha) {
  std::mt19937_64 rng(4);
  const CPFactors f = random_cp(rng, {3, 2, 4}, 2);
  const Vector alpha = vec_tensor(materialize_cp(f));
  for (std::size_t mode = 0; mode < 3; ++mode) {
    const Matrix j = build_J(f, mode);
    EXPECT_LT((j * stack_columns(f.factor(mode)) - alpha).norm(), 1e-12 * alpha.norm());
    EXPECT_LT((gram_of_J(f, mode) - j.adjoint() * j).norm(), 1e-12 * j.squaredNorm());
  }
}

TEST(Loewner, ContractedMatchesProduct) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const SampleGrid g = oracle::random_grid(rng, {5, 4, 6});
    const std::vector<std::vector<std::size_t>> idx{{0, 2, 4}, {1, 3}, {5}};
    LoewnerContext ctx(g, idx);
    const CPFactors f = random_cp(rng, ctx.node_shape(), 2);
    const Matrix l = build_full(ctx);
    for (std::size_t mode = 0; mode < 3; ++mode) {
      const Matrix ref = l * build_J(f, mode);
      const Matrix lc = build_contracted(ctx, f, mode);
      EXPECT_LT((lc - ref).norm(), 1e-12 * ref.norm());

      // R^H R must equal Lc^H Lc.
      const Matrix r = contracted_factor(ctx, f, mode);
      const Matrix gram = ref.adjoint() * ref;
      EXPECT_LT((r.adjoint() * r - gram).norm(), 1e-12 * gram.norm());
      EXPECT_EQ(r.rows(), r.cols());
      EXPECT_LT(r.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm(), 1e-300);
    }
  }
}

TEST(Loewner, ContractedFactorSingleVariable) {
  std::mt19937_64 rng(6);
  const SampleGrid g = oracle::random_grid(rng, {7});
  LoewnerContext ctx(g, {{1, 4}});
  const CPFactors f = random_cp(rng, ctx.node_shape(), 1);
  const Matrix lc = build_contracted(ctx, f, 0);
  const Matrix r = contracted_factor(ctx, f, 0);
  EXPECT_LT((r.adjoint() * r - lc.adjoint() * lc).norm(), 1e-12 * lc.squaredNorm());
}

TEST(Loewner, StackColumnsRoundTrip) {
  std::mt19937_64 rng(7);
  const Matrix m = oracle::random_matrix(rng, 3, 2);
  const Vector x = stack_columns(m);
  EXPECT_EQ(x(3), m(0, 1));
  EXPECT_EQ(unstack_columns(x, 3, 2), m);
}
