#include "lraaa/driver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lraaa/solvers.hpp"

namespace lraaa {

namespace {

std::string with_iteration(std::size_t it, const char* what) {
  std::ostringstream os;
  os << "iteration " << it << ": " << what;
  return os.str();
}

SaturationMask build_mask(const SampleGrid& grid, const std::vector<std::vector<std::size_t>>& idx,
                          const std::vector<std::size_t>& caps) {
  SaturationMask mask(grid.order());
  for (std::size_t j = 0; j < grid.order(); ++j) {
    const bool capped = !caps.empty() && idx[j].size() >= caps[j];
    mask[j].assign(grid.axes[j].size(), capped);
    for (auto i : idx[j]) mask[j][i] = true;
  }
  return mask;
}

DenseTensor alpha_from_vector(const Vector& x, const Shape& shape) {
  std::vector<Complex> v(x.data(), x.data() + x.size());
  return DenseTensor(shape, std::move(v));
}

}  // namespace

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kTolerance: return "tolerance";
    case StopReason::kMaxIterations: return "max-iterations";
    case StopReason::kInterpolated: return "interpolated";
    case StopReason::kCannotGrow: return "cannot-grow";
    case StopReason::kCallback: return "callback";
  }
  return "unknown";
}

void FitConfig::validate(std::size_t order) const {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  if (algorithm == Algorithm::kLowRank && rank < 1 && !rank_follows_order) {
    throw Error(ErrorCode::kInvalidArgument, "rank must be at least 1");
  }
  if (max_iterations < 1) throw Error(ErrorCode::kInvalidArgument, "max_iterations must be at least 1");
  if (!max_order.empty()) {
    if (max_order.size() != order) throw Error(ErrorCode::kDimensionMismatch, "one order cap per variable required");
    for (auto c : max_order)
      if (c < 1) throw Error(ErrorCode::kInvalidArgument, "order caps must be at least 1");
  }
  if (!(memory_budget > 0.0)) throw Error(ErrorCode::kInvalidArgument, "memory budget must be positive");
  als.validate();
}

DenseTensor constant_approximation(const DenseTensor& data) {
  Complex sum{0.0, 0.0};
  for (const auto& v : data.values()) sum += v;
  const Complex mean = data.size() ? sum / static_cast<double>(data.size()) : Complex{};
  return DenseTensor(data.shape(), mean);
}

std::optional<MultiIndex> greedy_select(const DenseTensor& approx, const DenseTensor& data, const SaturationMask* mask) {
  if (approx.shape() != data.shape()) throw Error(ErrorCode::kShapeMismatch, "approximation and data shapes differ");
  const Shape& s = data.shape();
  const std::size_t d = s.size();
  if (mask && mask->size() != d) throw Error(ErrorCode::kDimensionMismatch, "mask order does not match the data");

  MultiIndex idx(d, 0);
  double best = 0.0;
  std::size_t best_flat = data.size();
  for (std::size_t flat = 0; flat < data.size(); ++flat) {
    bool eligible = true;
    if (mask) {
      eligible = false;
      for (std::size_t j = 0; j < d; ++j) {
        if (!(*mask)[j][idx[j]]) {
          eligible = true;
          break;
        }
      }
    }
    if (eligible) {
      const double e = std::abs(approx[flat] - data[flat]);
      if (e > best) {
        best = e;
        best_flat = flat;
      }
    }
    for (std::size_t j = d; j-- > 0;) {
      if (++idx[j] < s[j]) break;
      idx[j] = 0;
    }
  }
  if (best_flat == data.size()) return std::nullopt;
  return data.unravel(best_flat);
}

std::optional<MultiIndex> greedy_select(const BarycentricModel& model, const SampleGrid& grid) {
  return greedy_select(evaluate_grid(model, grid), grid.data);
}

NodeUpdate update_nodes(const std::vector<std::vector<std::size_t>>& node_indices, const MultiIndex& selected,
                        const std::vector<std::size_t>& max_order) {
  if (selected.size() != node_indices.size()) throw Error(ErrorCode::kDimensionMismatch, "selected tuple has the wrong order");
  NodeUpdate out{node_indices, std::vector<bool>(node_indices.size(), false)};
  for (std::size_t j = 0; j < selected.size(); ++j) {
    auto& list = out.node_indices[j];
    if (std::find(list.begin(), list.end(), selected[j]) != list.end()) continue;
    if (!max_order.empty() && list.size() >= max_order[j]) continue;
    list.push_back(selected[j]);
    out.grew[j] = true;
  }
  return out;
}

ErrorMetrics compute_errors(const BarycentricModel& model, const SampleGrid& grid) {
  const GridEvaluation parts = evaluate_grid_parts(model, grid.axes);
  ErrorMetrics m;
  m.linearized_ls = relative_linearized_ls_error(parts, grid.data);
  m.nonlinear_ls = relative_ls_error(parts.values, grid.data);
  m.max_error = relative_max_error(parts.values, grid.data);
  return m;
}

ErrorRecord trace_errors(const BarycentricModel& model, const SampleGrid& grid, const SampleGrid* validation) {
  ErrorRecord rec;
  rec.sample = compute_errors(model, grid);
  if (validation) rec.validation = compute_errors(model, *validation);
  return rec;
}

FitReport fit(const SampleGrid& grid, const FitConfig& cfg) {
  grid.validate();
  const std::size_t d = grid.order();
  cfg.validate(d);
  for (const auto& ax : grid.axes)
    if (ax.size() < 2) throw Error(ErrorCode::kInvalidArgument, "every axis needs at least two points");

  FitReport report;
  std::vector<std::vector<std::size_t>> idx(d);
  // At most N_j - 1 nodes per variable. Once every sample of a variable is a node the LS problem
  // splits into independent slices and the minimizer leaves all but one of them zero, which puts
  // exact poles on the grid.
  std::vector<std::size_t> caps(d);
  for (std::size_t j = 0; j < d; ++j) {
    caps[j] = grid.axes[j].size() - 1;
    if (!cfg.max_order.empty()) caps[j] = std::min(caps[j], cfg.max_order[j]);
  }

  std::mt19937_64 rng(cfg.als.rng_seed);
  std::optional<CPFactors> factors;
  DenseTensor approx = constant_approximation(grid.data);
  bool have_model = false;

  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    const SaturationMask mask = build_mask(grid, idx, caps);
    const auto sel = greedy_select(approx, grid.data, &mask);
    if (!sel) {
      // Either the data is reproduced exactly at every eligible point, or nothing can grow.
      bool any_free = false;
      for (std::size_t j = 0; j < d && !any_free; ++j)
        any_free = std::find(mask[j].begin(), mask[j].end(), false) != mask[j].end();
      report.stop_reason = any_free ? StopReason::kInterpolated : StopReason::kCannotGrow;
      break;
    }
    NodeUpdate upd = update_nodes(idx, *sel, caps);
    idx = std::move(upd.node_indices);

    IterationRecord rec;
    rec.iteration = it;
    rec.selected = *sel;
    for (const auto& l : idx) rec.orders.push_back(l.size());

    try {
      LoewnerContext ctx(grid, idx);
      BarycentricModel model;
      model.nodes = ctx.nodes();
      model.interpolated = ctx.interpolated();

      if (cfg.algorithm == Algorithm::kFull) {
        const auto sol = solve_full(build_full(ctx, cfg.memory_budget));
        model.coeffs = alpha_from_vector(sol.solution, ctx.node_shape());
        rec.objective = sol.objective;
      } else {
        CPFactors init;
        if (!factors) {
          std::vector<Matrix> ones(d, Matrix::Ones(1, 1));
          init = CPFactors(std::move(ones));
        } else {
          init = warm_start(*factors, upd.grew);
        }
        std::size_t target = cfg.rank;
        if (cfg.rank_follows_order) target = *std::min_element(rec.orders.begin(), rec.orders.end());
        init = restore_rank(init, target, rng);
        AlsResult als = als_solve(ctx, init, cfg.als);
        rec.objective = als.objective;
        rec.initial_objective = als.initial_objective;
        rec.als_sweeps = als.sweeps;
        rec.truncated = als.truncated;
        rec.rank = als.factors.rank();
        factors = als.factors;
        model.coeffs = std::move(als.factors);
      }

      GridEvaluation parts = evaluate_grid_parts(model, grid.axes);
      rec.linearized_ls = relative_linearized_ls_error(parts, grid.data);
      rec.nonlinear_ls = relative_ls_error(parts.values, grid.data);
      rec.max_error = relative_max_error(parts.values, grid.data);
      approx = std::move(parts.values);
      report.model = std::move(model);
      have_model = true;
    } catch (const MemoryBudgetError&) {
      throw;
    } catch (const PoleError& e) {
      throw PoleError(e.point(), with_iteration(it, e.what()));
    } catch (const Error& e) {
      throw Error(e.code(), with_iteration(it, e.what()));
    }

    report.iterations.push_back(rec);
    if (rec.max_error <= cfg.tol) {
      report.stop_reason = StopReason::kTolerance;
      if (cfg.on_iteration) cfg.on_iteration(rec);
      break;
    }
    if (cfg.on_iteration && !cfg.on_iteration(rec)) {
      report.stop_reason = StopReason::kCallback;
      break;
    }
    if (it == cfg.max_iterations) report.stop_reason = StopReason::kMaxIterations;
  }

  if (!have_model) {
    // Constant data: a single node per variable reproduces it exactly.
    std::vector<std::vector<std::size_t>> first(d, std::vector<std::size_t>{0});
    LoewnerContext ctx(grid, first);
    report.model.nodes = ctx.nodes();
    report.model.interpolated = ctx.interpolated();
    report.model.coeffs = DenseTensor(ctx.node_shape(), Complex{1.0, 0.0});
  }
  return report;
}

}  // namespace lraaa
