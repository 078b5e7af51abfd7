#include <benchmark/benchmark.h>

#include <random>

#include "lraaa/als.hpp"
#include "lraaa/barycentric.hpp"
#include "lraaa/loewner.hpp"
#include "lraaa/models.hpp"
#include "lraaa/solvers.hpp"

using namespace lraaa;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (auto& v : m.reshaped()) v = Complex{nd(rng), nd(rng)};
  return m;
}

// every variable gets n nodes spread over the axis
LoewnerContext spread_context(const SampleGrid& g, std::size_t n) {
  std::vector<std::vector<std::size_t>> idx(g.axes.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) idx[j].push_back((i * 7) % g.axes[j].size());
  return LoewnerContext(g, idx);
}

CPFactors random_factors(const LoewnerContext& ctx, std::size_t rank, std::mt19937_64& rng) {
  std::vector<Matrix> f;
  for (const auto& nodes : ctx.nodes())
    f.push_back(random_matrix(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(rank), rng));
  return CPFactors(f);
}

}  // namespace

static void BM_ContractedFactorTrig3(benchmark::State& state) {
  GridParams params;
  params.points = 40;
  const SampleGrid g = make_grid(Benchmark::kTrig3, params);
  const LoewnerContext ctx = spread_context(g, static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(1);
  const CPFactors cp = random_factors(ctx, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(contracted_factor(ctx, cp, 0));
}
BENCHMARK(BM_ContractedFactorTrig3)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_AlsSolveTrig3(benchmark::State& state) {
  GridParams params;
  params.points = 20;
  const SampleGrid g = make_grid(Benchmark::kTrig3, params);
  const LoewnerContext ctx = spread_context(g, static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(2);
  const CPFactors cp = random_factors(ctx, 2, rng);
  AlsConfig cfg;
  cfg.max_sweeps = 5;
  for (auto _ : state) benchmark::DoNotOptimize(als_solve(ctx, cp, cfg));
}
BENCHMARK(BM_AlsSolveTrig3)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_EvaluateGridTrig3(benchmark::State& state) {
  GridParams params;
  params.points = static_cast<std::size_t>(state.range(0));
  const SampleGrid g = make_grid(Benchmark::kTrig3, params);
  const LoewnerContext ctx = spread_context(g, 5);
  std::mt19937_64 rng(3);
  BarycentricModel m;
  m.nodes = ctx.nodes();
  m.interpolated = ctx.interpolated();
  m.coeffs = random_factors(ctx, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_grid_parts(m, g.axes));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.data.size()));
}
BENCHMARK(BM_EvaluateGridTrig3)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_SolveConstrainedFactored(benchmark::State& state) {
  const auto m = static_cast<Eigen::Index>(state.range(0));
  const auto p = static_cast<Eigen::Index>(state.range(1));
  std::mt19937_64 rng(4);
  const Matrix a = random_matrix(m, p, rng);
  const Matrix f = random_matrix(p, p, rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_constrained_factored(a, f));
}
BENCHMARK(BM_SolveConstrainedFactored)->Args({200, 20})->Args({2000, 60})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
