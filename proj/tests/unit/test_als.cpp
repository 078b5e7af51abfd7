#include <gtest/gtest.h>

#include "oracles.hpp"
#include "lraaa/als.hpp"
#include "lraaa/solvers.hpp"

using namespace lraaa;

namespace {

CPFactors random_cp(std::mt19937_64& rng, const Shape& ns, std::size_t r) {
  std::vector<Matrix> f;
  for (auto n : ns) f.push_back(oracle::random_matrix(rng, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r)));
  return CPFactors(f);
}

double objective(const LoewnerContext& ctx, const CPFactors& f) {
  const DenseTensor a = materialize_cp(f);
  const Vector x = Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(a.size()));
  return (build_full(ctx) * x).squaredNorm() / x.squaredNorm();
}

}  // namespace

TEST(Als, StoppingCheck) {
  EXPECT_TRUE(stopping_check(1.0, 0.995, 1e-2));
  EXPECT_TRUE(stopping_check(5.0, 0.0, 1e-2));
  EXPECT_FALSE(stopping_check(1.0, 0.9, 1e-2));
}

TEST(Als, ConfigValidation) {
  AlsConfig c;
  c.epsilon = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c.epsilon = 0.5;
  c.max_sweeps = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Als, WarmStartPadsWithZeros) {
  std::mt19937_64 rng(1);
  const CPFactors f = random_cp(rng, {2, 3}, 2);
  const CPFactors same = warm_start(f, {false, false});
  EXPECT_EQ(same.factor(0), f.factor(0));
  const CPFactors w = warm_start(f, {true, false});
  ASSERT_EQ(w.shape(), (Shape{3, 3}));
  EXPECT_EQ(w.factor(0).row(2).norm(), 0.0);
  const DenseTensor a = materialize_cp(f);
  const DenseTensor b = materialize_cp(w);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_LT(std::abs(a.at({i, k}) - b.at({i, k})), 1e-14);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(b.at({2, k}), Complex(0.0));
}

TEST(Als, WarmStartDoesNotIncreaseObjective) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const SampleGrid g = oracle::random_grid(rng, {6, 5, 4});
    LoewnerContext small(g, {{0, 2}, {1}, {3, 0}});
    LoewnerContext big(g, {{0, 2, 5}, {1}, {3, 0, 2}});
    const CPFactors f = random_cp(rng, small.node_shape(), 2);
    const CPFactors w = warm_start(f, {true, false, true});
    EXPECT_LE(objective(big, w), objective(small, f) * (1 + 1e-12));
  }
}

TEST(Als, RestoreRankKeepsTensor) {
  std::mt19937_64 rng(3);
  const CPFactors f = random_cp(rng, {3, 2, 2}, 1);
  std::mt19937_64 r2(9);
  const CPFactors g = restore_rank(f, 3, r2);
  EXPECT_EQ(g.rank(), 3u);
  const DenseTensor a = materialize_cp(f);
  const DenseTensor b = materialize_cp(g);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(Als, TwoVariablesFullRankMatchesFullSolve) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    const SampleGrid g = oracle::random_grid(rng, {8, 7});
    LoewnerContext ctx(g, {{0, 3, 5}, {1, 6, 2}});
    const auto full = solve_full(build_full(ctx));
    const CPFactors init = random_cp(rng, ctx.node_shape(), 3);
    const AlsResult res = als_solve(ctx, init, AlsConfig{});
    EXPECT_LE(res.sweeps, 2u);
    EXPECT_LT(oracle::rel_diff(res.objective, full.objective), 1e-8);
    EXPECT_NEAR(cp_frobenius_norm(res.factors), 1.0, 1e-10);
  }
}

TEST(Als, RankOneSeparableDataIsInterpolated) {
  std::mt19937_64 rng(5);
  SampleGrid g = oracle::random_grid(rng, {6, 5, 4});
  const Complex c[3] = {Complex{2.0, 0.5}, Complex{-2.5, 0.1}, Complex{0.3, 3.0}};
  for (std::size_t f = 0; f < g.data.size(); ++f) {
    const MultiIndex i = g.data.unravel(f);
    Complex v{1.0, 0.0};
    for (std::size_t j = 0; j < 3; ++j) v /= g.axes[j][i[j]] + c[j];
    g.data[f] = v;
  }
  LoewnerContext ctx(g, {{0, 1}, {2, 3}, {0, 3}});
  std::vector<Matrix> ones(3, Matrix::Ones(2, 1));
  const AlsResult res = als_solve(ctx, CPFactors(ones), AlsConfig{});
  EXPECT_LT(res.objective, 1e-20);
}

TEST(Als, TraceMonotoneAndDeterministic) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const SampleGrid g = oracle::random_grid(rng, {5, 5, 5});
    LoewnerContext ctx(g, {{0, 1, 2}, {0, 4}, {3, 1}});
    const CPFactors init = random_cp(rng, ctx.node_shape(), 2);
    AlsConfig cfg;
    cfg.epsilon = 1e-6;
    const AlsResult a = als_solve(ctx, init, cfg);
    for (std::size_t s = 1; s < a.objective_trace.size(); ++s) {
      EXPECT_LE(a.objective_trace[s], a.objective_trace[s - 1] * (1 + 1e-10));
    }
    for (std::size_t s = 1; s < a.mode_objectives.size(); ++s) {
      EXPECT_LE(a.mode_objectives[s], a.mode_objectives[s - 1] * (1 + 1e-10));
    }
    EXPECT_LT(oracle::rel_diff(objective(ctx, a.factors), a.objective), 1e-8);
    if (t < 3) {
      const AlsResult b = als_solve(ctx, init, cfg);
      EXPECT_EQ(a.objective_trace, b.objective_trace);
      EXPECT_EQ(a.factors.factor(0), b.factors.factor(0));
    }
  }
}

TEST(Als, RejectsMismatchedInit) {
  std::mt19937_64 rng(7);
  const SampleGrid g = oracle::random_grid(rng, {4, 4});
  LoewnerContext ctx(g, {{0, 1}, {2}});
  EXPECT_THROW(als_solve(ctx, random_cp(rng, {1, 1}, 1), AlsConfig{}), Error);
}
