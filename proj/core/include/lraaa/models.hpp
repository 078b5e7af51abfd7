#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "lraaa/barycentric.hpp"

namespace lraaa {

/// (z_1 + ... + z_d) / (2d + cos z_1 + ... + cos z_d)
Complex trig_f(std::span<const Complex> z);

/// Chain of n masses; spring t joins masses t and t+1, the last spring ties mass n to the wall.
/// Springs are split into four consecutive quarters carrying k1..k4.
struct MsdSpec {
  std::size_t masses = 40;
  double mass = 4.0;
  double damping = 1.0;

  void validate() const;
};

using Stiffness = std::array<double, 4>;

/// Velocity of mass 1 under a unit force on mass 1: c^T (sI - A(k))^{-1} b, dense first-order solve.
Complex msd_transfer(const MsdSpec& spec, Complex s, const Stiffness& k);

/// Same transfer function from the tridiagonal second-order form (s^2 M + s C + K) q = e_1, H = s q_1.
Complex msd_transfer_tridiagonal(const MsdSpec& spec, Complex s, const Stiffness& k);

/// f(z) = c^T K(z)^{-1} b with K(z) = [z1 K11, K12; K21, z2 K22].
struct BlockKSpec {
  Matrix k11, k22, k12, k21;
  Vector b, c;

  std::size_t m1() const { return static_cast<std::size_t>(k11.rows()); }
  std::size_t m2() const { return static_cast<std::size_t>(k22.rows()); }
  void validate() const;
};

/// Diagonal blocks I + 0.1 * noise, off-diagonal blocks a sum of `rho` scaled outer products.
BlockKSpec make_blockk_spec(std::size_t m1, std::size_t m2, std::size_t rho, std::uint64_t seed);

Complex blockk_f(const BlockKSpec& spec, Complex z1, Complex z2);

/// D_{i1..id} = delta1_{i1} * ... * deltad_{id}
struct SeparableDataSpec {
  std::vector<Vector> deltas;
};

DenseTensor separable_data(const SeparableDataSpec& spec);

PointList linspace(double lo, double hi, std::size_t n);

/// Samples f over the tensor grid of `axes` (row-major).
template <class F>
SampleGrid sample_grid(std::vector<PointList> axes, F&& f) {
  Shape shape;
  for (const auto& a : axes) shape.push_back(a.size());
  DenseTensor data(shape);
  std::vector<Complex> z(axes.size());
  for (std::size_t flat = 0; flat < data.size(); ++flat) {
    const MultiIndex idx = data.unravel(flat);
    for (std::size_t j = 0; j < axes.size(); ++j) z[j] = axes[j][idx[j]];
    data[flat] = f(std::span<const Complex>(z));
  }
  return SampleGrid{std::move(axes), std::move(data)};
}

enum class Benchmark { kTrig3, kTrig5, kMsd, kBlockK, kSeparable };

struct GridParams {
  std::size_t points = 0;  // per-axis override; 0 keeps the benchmark layout
  MsdSpec msd;
  std::size_t block_m1 = 4;
  std::size_t block_m2 = 4;
  std::size_t block_rank = 1;
  std::size_t separable_order = 3;
  std::uint64_t seed = 1;
};

/// trig3: 100 points on [-10,10]^3; trig5: 30 points on [-4,4]^5;
/// msd: 50 points s in [0.1,2]i, then 25 points in [0.5,1] for each of k1..k4;
/// blockk: 10 x 10 on [1,2]^2; separable: 8 points per axis on [0,1], delta_j = 1/(z + c_j).
SampleGrid make_grid(Benchmark kind, const GridParams& params = {});

/// MSD grid with the tridiagonal evaluator (the dense form is kept for cross-checks).
SampleGrid msd_grid(const MsdSpec& spec, std::size_t s_points = 50, std::size_t k_points = 25);

}  // namespace lraaa
