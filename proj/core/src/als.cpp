#include "lraaa/als.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lraaa/solvers.hpp"

namespace lraaa {

namespace {

// Upper-triangular factor of J^(j) in the column-stacked ordering: kron(R_K, I_{n_j}).
Matrix constraint_factor(const CPFactors& f, std::size_t mode) {
  const Matrix rk = triangular_factor(off_mode_khatri_rao(f, mode));
  const auto nj = f.factor(mode).rows();
  const auto r = rk.rows();
  Matrix out = Matrix::Zero(nj * r, nj * r);
  for (Eigen::Index k = 0; k < r; ++k)
    for (Eigen::Index l = k; l < r; ++l) out.block(k * nj, l * nj, nj, nj).diagonal().setConstant(rk(k, l));
  return out;
}

}  // namespace

void AlsConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::kInvalidArgument, "ALS epsilon must lie in (0, 1)");
  if (max_sweeps < 1) throw Error(ErrorCode::kInvalidArgument, "ALS needs at least one sweep");
  if (!(truncation_tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "truncation tolerance must be positive");
}

CPFactors warm_start(const CPFactors& prev, const std::vector<bool>& new_node_flags) {
  if (new_node_flags.size() != prev.order()) throw Error(ErrorCode::kDimensionMismatch, "one flag per variable required");
  std::vector<Matrix> out(prev.factors());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (!new_node_flags[j]) continue;
    out[j].conservativeResize(out[j].rows() + 1, Eigen::NoChange);
    out[j].row(out[j].rows() - 1).setZero();
  }
  return CPFactors(std::move(out));
}

CPFactors restore_rank(const CPFactors& factors, std::size_t target, std::mt19937_64& rng) {
  const auto r = static_cast<Eigen::Index>(factors.rank());
  const auto t = static_cast<Eigen::Index>(target);
  if (t <= r) return factors;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Matrix> out(factors.factors());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j].conservativeResize(Eigen::NoChange, t);
    for (Eigen::Index c = r; c < t; ++c) {
      for (Eigen::Index i = 0; i < out[j].rows(); ++i) {
        out[j](i, c) = j == 0 ? Complex{0.0, 0.0} : Complex{uni(rng), 0.0};
      }
    }
  }
  return CPFactors(std::move(out));
}

bool stopping_check(double prev_objective, double cur_objective, double epsilon) {
  if (cur_objective == 0.0) return true;
  return std::abs(prev_objective - cur_objective) <= epsilon * cur_objective;
}

AlsResult als_solve(const LoewnerContext& ctx, const CPFactors& init, const AlsConfig& cfg) {
  cfg.validate();
  if (init.order() != ctx.order() || init.shape() != ctx.node_shape()) {
    throw Error(ErrorCode::kDimensionMismatch, "initial CP factors do not match the Loewner context");
  }
  const std::size_t d = ctx.order();
  AlsResult res;
  CPFactors f = init;

  const double init_norm = cp_frobenius_norm(f);
  if (init_norm == 0.0 || !std::isfinite(init_norm)) {
    throw Error(ErrorCode::kInvalidArgument, "initial CP factors represent a zero tensor");
  }
  f.factor(0) /= init_norm;

  Eigen::VectorXd mu;
  double prev = std::numeric_limits<double>::infinity();
  bool have_initial = false;
  for (std::size_t sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    double obj = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      auto tr = truncate_rank_checked(f, j, cfg.truncation_tol);
      if (tr.truncated) {
        f = std::move(tr.factors);
        res.truncated = true;
      }
      const Matrix rl = contracted_factor(ctx, f, j);
      if (!have_initial) {
        const Vector x0 = stack_columns(f.factor(j));
        res.initial_objective = (rl * x0).squaredNorm() / std::pow(cp_frobenius_norm(f), 2);
        prev = res.initial_objective;
        have_initial = true;
        if (res.initial_objective == 0.0) {
          res.factors = f;
          res.factors.factor(0) /= cp_frobenius_norm(f);
          return res;
        }
      }
      ConstrainedLsSolution sol;
      try {
        sol = solve_constrained_factored(rl, constraint_factor(f, j), f.rank());
      } catch (const Error& e) {
        std::ostringstream os;
        os << "ALS sweep " << sweep << ", mode " << j + 1 << ": " << e.what();
        throw Error(e.code(), os.str());
      }
      const auto nj = f.factor(j).rows();
      const auto r = static_cast<Eigen::Index>(f.rank());
      f.factor(j) = unstack_columns(sol.solution, nj, r);
      obj = sol.objective;
      res.mode_objectives.push_back(obj);

      mu = f.factor(j).colwise().norm().transpose();
      for (Eigen::Index k = 0; k < r; ++k) {
        if (mu(k) == 0.0) mu(k) = 1.0;
        f.factor(j).col(k) /= mu(k);
      }
    }
    res.objective_trace.push_back(obj);
    res.sweeps = sweep;
    res.objective = obj;
    if (stopping_check(prev, obj, cfg.epsilon)) break;
    prev = obj;
  }

  // Undo the last normalization so alpha equals the last solve's minimizer.
  for (Eigen::Index k = 0; k < mu.size(); ++k) f.factor(0).col(k) *= mu(k);
  f.factor(0) /= cp_frobenius_norm(f);
  res.factors = std::move(f);
  return res;
}

}  // namespace lraaa
