#include "cli.hpp"

#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lraaa/driver.hpp"
#include "lraaa/io.hpp"
#include "lraaa/models.hpp"

namespace lraaa::cli {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
    case ErrorCode::kMalformedDocument:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kDuplicatePoint:
    case ErrorCode::kUnsupportedVariant:
      return kIoFormat;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
      return kUsage;
    case ErrorCode::kDuplicateNodes:
    case ErrorCode::kPole:
    case ErrorCode::kMemoryBudget:
    case ErrorCode::kSolverFailure:
    case ErrorCode::kRankDeficient:
      return kNumerical;
  }
  return kNumerical;
}

double default_memory_budget() {
  if (const char* env = std::getenv("LRAAA_MEMORY_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0) return v;
  }
  return kDefaultMemoryBudget;
}

struct GenerateOptions {
  std::string model;
  std::string out;
  std::size_t points = 0;
  std::size_t masses = 40;
  double mass = 4.0;
  double damping = 1.0;
  std::vector<std::size_t> block_sizes{4, 4};
  std::size_t block_rank = 1;
  std::size_t order = 3;
  std::uint64_t seed = 1;
};

struct FitOptions {
  std::string input;
  std::string out;
  std::string trace;
  std::string algorithm = "lr-paaa";
  std::size_t rank = 1;
  bool rank_follows_order = false;
  double tol = 1e-3;
  std::size_t max_iter = 100;
  double als_tol = 1e-2;
  std::size_t als_max_sweeps = 100;
  std::vector<std::size_t> max_order;
  std::uint64_t seed = 0;
  double memory_budget = 0.0;
};

struct EvalOptions {
  std::string model;
  std::string input;
  std::string out;
};

struct ReportOptions {
  std::string model;
  std::string input;
  std::string validation;
  std::string out;
};

int do_generate(const GenerateOptions& o, std::ostream& out) {
  static const std::map<std::string, Benchmark> kinds{{"trig3", Benchmark::kTrig3},
                                                      {"trig5", Benchmark::kTrig5},
                                                      {"msd", Benchmark::kMsd},
                                                      {"blockk", Benchmark::kBlockK},
                                                      {"separable", Benchmark::kSeparable}};
  GridParams p;
  p.points = o.points;
  p.msd = MsdSpec{o.masses, o.mass, o.damping};
  if (o.block_sizes.size() != 2) throw Error(ErrorCode::kInvalidArgument, "--block-sizes takes two values");
  p.block_m1 = o.block_sizes[0];
  p.block_m2 = o.block_sizes[1];
  p.block_rank = o.block_rank;
  p.separable_order = o.order;
  p.seed = o.seed;
  const SampleGrid g = make_grid(kinds.at(o.model), p);
  std::vector<std::string> names;
  if (o.model == "msd") names = {"s", "k1", "k2", "k3", "k4"};
  save_grid(g, o.out, names);
  out << "wrote " << o.model << " grid with " << g.data.size() << " samples to " << o.out << "\n";
  return kOk;
}

DatTable trace_table(const FitReport& rep, std::size_t d) {
  DatTable t;
  t.schema = "lraaa-trace/1";
  t.names.push_back("iteration");
  for (std::size_t j = 0; j < d; ++j) t.names.push_back("n" + std::to_string(j + 1));
  for (const char* n : {"linearized_ls", "nonlinear_ls", "max_error", "als_sweeps"}) t.names.emplace_back(n);
  t.columns.assign(t.names.size(), {});
  for (const auto& r : rep.iterations) {
    std::size_t c = 0;
    t.columns[c++].push_back(static_cast<double>(r.iteration));
    for (auto n : r.orders) t.columns[c++].push_back(static_cast<double>(n));
    t.columns[c++].push_back(r.linearized_ls);
    t.columns[c++].push_back(r.nonlinear_ls);
    t.columns[c++].push_back(r.max_error);
    t.columns[c++].push_back(static_cast<double>(r.als_sweeps));
  }
  return t;
}

int do_fit(const FitOptions& o, std::ostream& out) {
  const SampleGrid grid = load_grid(o.input);
  FitConfig cfg;
  cfg.algorithm = o.algorithm == "paaa" ? Algorithm::kFull : Algorithm::kLowRank;
  cfg.rank = o.rank;
  cfg.rank_follows_order = o.rank_follows_order;
  cfg.tol = o.tol;
  cfg.max_iterations = o.max_iter;
  cfg.max_order = o.max_order;
  cfg.als.epsilon = o.als_tol;
  cfg.als.max_sweeps = o.als_max_sweeps;
  cfg.als.rng_seed = o.seed;
  cfg.memory_budget = o.memory_budget > 0.0 ? o.memory_budget : default_memory_budget();

  const FitReport rep = fit(grid, cfg);
  save_model(rep.model, o.out);
  if (!o.trace.empty()) emit_dat(trace_table(rep, grid.order()), o.trace);

  out << "stop: " << to_string(rep.stop_reason) << ", iterations: " << rep.iterations.size();
  if (!rep.iterations.empty()) {
    const auto& last = rep.iterations.back();
    out << ", orders:";
    for (auto n : last.orders) out << " " << n;
    out << ", max error: " << last.max_error;
  }
  out << "\n";
  return kOk;
}

int do_eval(const EvalOptions& o, std::ostream& out) {
  const BarycentricModel model = load_model(o.model);
  const SampleGrid grid = load_grid(o.input);
  if (grid.order() != model.order()) throw Error(ErrorCode::kDimensionMismatch, "model and grid have different variable counts");
  const DenseTensor r = evaluate_grid(model, grid);

  DatTable t;
  t.schema = "lraaa-eval/1";
  for (std::size_t j = 0; j < grid.order(); ++j) {
    t.names.push_back("z" + std::to_string(j + 1) + "_re");
    t.names.push_back("z" + std::to_string(j + 1) + "_im");
  }
  for (const char* n : {"r_re", "r_im", "f_re", "f_im"}) t.names.emplace_back(n);
  t.columns.assign(t.names.size(), std::vector<double>(r.size()));
  for (std::size_t flat = 0; flat < r.size(); ++flat) {
    const MultiIndex idx = r.unravel(flat);
    std::size_t c = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      t.columns[c++][flat] = grid.axes[j][idx[j]].real();
      t.columns[c++][flat] = grid.axes[j][idx[j]].imag();
    }
    t.columns[c++][flat] = r[flat].real();
    t.columns[c++][flat] = r[flat].imag();
    t.columns[c++][flat] = grid.data[flat].real();
    t.columns[c++][flat] = grid.data[flat].imag();
  }
  emit_dat(t, o.out);
  out << "evaluated " << r.size() << " points\n";
  return kOk;
}

int do_report(const ReportOptions& o, std::ostream& out) {
  const BarycentricModel model = load_model(o.model);
  const SampleGrid grid = load_grid(o.input);
  std::optional<SampleGrid> val;
  if (!o.validation.empty()) val = load_grid(o.validation);
  if (grid.order() != model.order() || (val && val->order() != model.order())) {
    throw Error(ErrorCode::kDimensionMismatch, "model and grid have different variable counts");
  }
  const ErrorRecord rec = trace_errors(model, grid, val ? &*val : nullptr);

  DatTable t;
  t.schema = "lraaa-errors/1";
  t.names = {"set", "linearized_ls", "nonlinear_ls", "max_error"};
  t.columns.assign(4, {});
  auto add = [&](double set, const ErrorMetrics& m) {
    t.columns[0].push_back(set);
    t.columns[1].push_back(m.linearized_ls);
    t.columns[2].push_back(m.nonlinear_ls);
    t.columns[3].push_back(m.max_error);
    out << (set == 0.0 ? "sample" : "validation") << ": linearized " << m.linearized_ls << ", nonlinear "
        << m.nonlinear_ls << ", max " << m.max_error << "\n";
  };
  add(0.0, rec.sample);
  if (rec.validation) add(1.0, *rec.validation);
  emit_dat(t, o.out);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multivariate rational approximation on tensor grids (p-AAA and low-rank p-AAA)", "lraaa"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Write a benchmark sample grid");
  g->add_option("--model", gen.model, "Benchmark")->required()->check(CLI::IsMember({"trig3", "trig5", "msd", "blockk", "separable"}));
  g->add_option("--out", gen.out, "Output grid (JSON)")->required();
  g->add_option("--points", gen.points, "Points per axis (0 keeps the benchmark layout)");
  g->add_option("--masses", gen.masses, "msd: number of masses (multiple of 4)");
  g->add_option("--mass", gen.mass, "msd: mass of every body");
  g->add_option("--damping", gen.damping, "msd: damping of every body");
  g->add_option("--block-sizes", gen.block_sizes, "blockk: m1,m2")->delimiter(',')->expected(2);
  g->add_option("--block-rank", gen.block_rank, "blockk: rank of the off-diagonal blocks");
  g->add_option("--order", gen.order, "separable: number of variables");
  g->add_option("--seed", gen.seed, "blockk: random seed");

  FitOptions fo;
  auto* f = app.add_subcommand("fit", "Fit a barycentric rational model to a grid");
  f->add_option("--input", fo.input, "Sample grid (JSON)")->required();
  f->add_option("--out", fo.out, "Output model (JSON)")->required();
  f->add_option("--algorithm", fo.algorithm, "paaa or lr-paaa")->check(CLI::IsMember({"paaa", "lr-paaa"}));
  f->add_option("--rank", fo.rank, "CP rank r")->check(CLI::PositiveNumber);
  f->add_flag("--rank-follows-order", fo.rank_follows_order, "Use r = min_j n_j in every iteration");
  f->add_option("--tol", fo.tol, "Relative max-error target")->check(CLI::PositiveNumber);
  f->add_option("--max-iter", fo.max_iter, "Outer iteration cap")->check(CLI::PositiveNumber);
  f->add_option("--als-tol", fo.als_tol, "ALS relative-change tolerance")->check(CLI::Range(0.0, 1.0));
  f->add_option("--als-max-sweeps", fo.als_max_sweeps, "ALS sweep cap")->check(CLI::PositiveNumber);
  f->add_option("--max-order", fo.max_order, "Per-variable caps n1,...,nd")->delimiter(',');
  f->add_option("--seed", fo.seed, "Seed for re-initialized CP columns");
  f->add_option("--memory-budget", fo.memory_budget, "Entry cap for the dense Loewner matrix (default: $LRAAA_MEMORY_BUDGET or 2e8)");
  f->add_option("--trace", fo.trace, "Per-iteration trace (.dat)");

  EvalOptions eo;
  auto* e = app.add_subcommand("eval", "Evaluate a model on a grid");
  e->add_option("--model", eo.model, "Model (JSON)")->required();
  e->add_option("--input", eo.input, "Grid (JSON)")->required();
  e->add_option("--out", eo.out, "Values (.dat)")->required();

  ReportOptions ro;
  auto* r = app.add_subcommand("report", "Error metrics of a model on sample and validation grids");
  r->add_option("--model", ro.model, "Model (JSON)")->required();
  r->add_option("--input", ro.input, "Sample grid (JSON)")->required();
  r->add_option("--validation", ro.validation, "Validation grid (JSON)");
  r->add_option("--out", ro.out, "Errors (.dat)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "lraaa: " << ex.what() << "\n";
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  try {
    if (*g) return do_generate(gen, out);
    if (*f) return do_fit(fo, out);
    if (*e) return do_eval(eo, out);
    if (*r) return do_report(ro, out);
  } catch (const MemoryBudgetError& ex) {
    err << "lraaa: memory budget: " << ex.what() << "\n";
    return kNumerical;
  } catch (const Error& ex) {
    err << "lraaa: " << to_string(ex.code()) << ": " << ex.what() << "\n";
    return exit_code_for(ex.code());
  } catch (const std::bad_alloc&) {
    err << "lraaa: out of memory\n";
    return kNumerical;
  }
  return kUsage;
}

}  // namespace lraaa::cli
