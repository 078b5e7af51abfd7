#pragma once

#include <cstdint>
#include <random>

#include "lraaa/loewner.hpp"
#include "lraaa/tensor.hpp"

namespace lraaa {

struct AlsConfig {
  double epsilon = 1e-2;         // relative objective change that stops the sweeps
  std::size_t max_sweeps = 100;
  double truncation_tol = 1e-12;
  std::uint64_t rng_seed = 0;    // columns added back after a rank truncation

  void validate() const;
};

struct AlsResult {
  CPFactors factors;                  // unit Frobenius norm, column scales absorbed into factor 1
  double objective = 0.0;             // ||L_d vec(alpha)||^2 after the last sweep
  double initial_objective = 0.0;     // objective of the (normalized) initial guess
  std::size_t sweeps = 0;
  std::vector<double> objective_trace;  // one entry per sweep
  std::vector<double> mode_objectives;  // one entry per single-mode update
  bool truncated = false;             // a rank truncation happened during the solve
};

/// Appends a zero row to every factor whose variable gained a node.
CPFactors warm_start(const CPFactors& prev, const std::vector<bool>& new_node_flags);

/// Grows the CP rank back to `target` after a truncation.
///
/// New columns are real uniform on [-1,1] in every factor except the first, where they are zero,
/// so the materialized tensor is unchanged.
CPFactors restore_rank(const CPFactors& factors, std::size_t target, std::mt19937_64& rng);

/// |prev - cur| <= epsilon * cur, or cur == 0.
bool stopping_check(double prev_objective, double cur_objective, double epsilon);

/// Alternating least squares over the CP factors of the barycentric coefficients.
AlsResult als_solve(const LoewnerContext& ctx, const CPFactors& init, const AlsConfig& cfg);

}  // namespace lraaa
