#pragma once

#include <functional>
#include <optional>

#include "lraaa/als.hpp"
#include "lraaa/barycentric.hpp"
#include "lraaa/loewner.hpp"

namespace lraaa {

enum class Algorithm { kFull, kLowRank };

struct IterationRecord;

struct FitConfig {
  Algorithm algorithm = Algorithm::kLowRank;
  std::size_t rank = 1;
  // Use r = min_j n_j in every iteration instead of `rank` (makes d=2 equivalent to full p-AAA).
  bool rank_follows_order = false;
  double tol = 1e-3;
  std::size_t max_iterations = 100;
  // Per-variable node caps; empty means none. fit() never exceeds N_j - 1 nodes regardless.
  std::vector<std::size_t> max_order;
  AlsConfig als;
  double memory_budget = kDefaultMemoryBudget;
  // Called after each outer iteration; returning false stops the fit (StopReason::kCallback).
  std::function<bool(const IterationRecord&)> on_iteration;

  void validate(std::size_t order) const;
};

enum class StopReason { kTolerance, kMaxIterations, kInterpolated, kCannotGrow, kCallback };
const char* to_string(StopReason reason);

struct IterationRecord {
  std::size_t iteration = 0;
  MultiIndex selected;                // grid multi-index of the chosen tuple
  std::vector<std::size_t> orders;    // n_j after the update
  double objective = 0.0;             // ||L_d vec(alpha)||^2, ||alpha||_F = 1
  double initial_objective = 0.0;     // low-rank: objective of the warm start
  double linearized_ls = 0.0;
  double nonlinear_ls = 0.0;
  double max_error = 0.0;
  std::size_t als_sweeps = 0;
  std::size_t rank = 0;               // CP rank after ALS (0 for the full path)
  bool truncated = false;
};

struct FitReport {
  std::vector<IterationRecord> iterations;
  StopReason stop_reason = StopReason::kMaxIterations;
  BarycentricModel model;
};

/// Per-variable markers of grid indices that cannot add a node (already a node, or the variable is capped).
using SaturationMask = std::vector<std::vector<bool>>;

/// Lexicographically first argmax of |approx - data| over points that can still add a node.
///
/// Returns nullopt when every eligible error is zero or no point is eligible.
std::optional<MultiIndex> greedy_select(const DenseTensor& approx, const DenseTensor& data,
                                        const SaturationMask* mask = nullptr);
std::optional<MultiIndex> greedy_select(const BarycentricModel& model, const SampleGrid& grid);

/// Constant initializer r = mean(D).
DenseTensor constant_approximation(const DenseTensor& data);

struct NodeUpdate {
  std::vector<std::vector<std::size_t>> node_indices;
  std::vector<bool> grew;
};

NodeUpdate update_nodes(const std::vector<std::vector<std::size_t>>& node_indices, const MultiIndex& selected,
                        const std::vector<std::size_t>& max_order = {});

FitReport fit(const SampleGrid& grid, const FitConfig& cfg);

struct ErrorMetrics {
  double linearized_ls = 0.0;
  double nonlinear_ls = 0.0;
  double max_error = 0.0;
};

struct ErrorRecord {
  ErrorMetrics sample;
  std::optional<ErrorMetrics> validation;
};

ErrorMetrics compute_errors(const BarycentricModel& model, const SampleGrid& grid);
ErrorRecord trace_errors(const BarycentricModel& model, const SampleGrid& grid,
                         const SampleGrid* validation = nullptr);

}  // namespace lraaa
