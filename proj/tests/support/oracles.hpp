// Loop-based reference implementations. Deliberately naive: no mode products, no factorizations
// shared with the library, so agreement is meaningful.
#pragma once

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "lraaa/barycentric.hpp"
#include "lraaa/loewner.hpp"

namespace oracle {

using namespace lraaa;

inline Complex cauchy_entry(const PointList& nodes, std::size_t i, Complex z) {
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k] == z) return k == i ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  }
  return 1.0 / (z - nodes[i]);
}

inline Matrix cauchy(const PointList& nodes, const PointList& pts) {
  Matrix c(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t k = 0; k < pts.size(); ++k) c(i, k) = cauchy_entry(nodes, i, pts[k]);
  return c;
}

// Product of Cauchy entries for node multi-index `ni` at point z.
inline Complex kernel(const std::vector<PointList>& nodes, const MultiIndex& ni, std::span<const Complex> z) {
  Complex v{1.0, 0.0};
  for (std::size_t j = 0; j < nodes.size(); ++j) v *= cauchy_entry(nodes[j], ni[j], z[j]);
  return v;
}

struct NumDen {
  Complex num, den;
};

inline NumDen num_den(const BarycentricModel& m, std::span<const Complex> z) {
  const DenseTensor alpha = m.coefficient_tensor();
  NumDen out{{0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t flat = 0; flat < alpha.size(); ++flat) {
    const MultiIndex ni = alpha.unravel(flat);
    const Complex k = kernel(m.nodes, ni, z);
    out.den += alpha[flat] * k;
    out.num += alpha[flat] * m.interpolated[flat] * k;
  }
  return out;
}

inline Complex evaluate(const BarycentricModel& m, std::span<const Complex> z) {
  const auto nd = num_den(m, z);
  return nd.num / nd.den;
}

// L_d entry (z, lambda) = C(lambda, z) (D(z) - H(lambda)).
inline Matrix loewner(const SampleGrid& g, const std::vector<std::vector<std::size_t>>& idx) {
  const std::size_t d = g.order();
  std::vector<PointList> nodes(d);
  Shape ns;
  for (std::size_t j = 0; j < d; ++j) {
    for (auto i : idx[j]) nodes[j].push_back(g.axes[j][i]);
    ns.push_back(idx[j].size());
  }
  DenseTensor nodes_t(ns);
  Matrix l(static_cast<Eigen::Index>(g.data.size()), static_cast<Eigen::Index>(nodes_t.size()));
  std::vector<Complex> z(d);
  MultiIndex gi(d);
  for (std::size_t row = 0; row < g.data.size(); ++row) {
    const MultiIndex zi = g.data.unravel(row);
    for (std::size_t j = 0; j < d; ++j) z[j] = g.axes[j][zi[j]];
    for (std::size_t col = 0; col < nodes_t.size(); ++col) {
      const MultiIndex ni = nodes_t.unravel(col);
      for (std::size_t j = 0; j < d; ++j) gi[j] = idx[j][ni[j]];
      l(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          kernel(nodes, ni, z) * (g.data[row] - g.data.at(gi));
    }
  }
  return l;
}

// sum_z |d(z) f(z) - n(z)|^2 by explicit loops.
inline double linearized_sum(const BarycentricModel& m, const SampleGrid& g) {
  double s = 0.0;
  std::vector<Complex> z(g.order());
  for (std::size_t flat = 0; flat < g.data.size(); ++flat) {
    const MultiIndex zi = g.data.unravel(flat);
    for (std::size_t j = 0; j < g.order(); ++j) z[j] = g.axes[j][zi[j]];
    const auto nd = num_den(m, z);
    s += std::norm(nd.den * g.data[flat] - nd.num);
  }
  return s;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = Complex{n(rng), n(rng)};
  return m;
}

inline PointList random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PointList p;
  for (std::size_t i = 0; i < n; ++i) p.emplace_back(u(rng), u(rng));
  return p;
}

inline SampleGrid random_grid(std::mt19937_64& rng, const Shape& shape) {
  std::vector<PointList> axes;
  for (auto n : shape) axes.push_back(random_points(rng, n));
  DenseTensor data(shape);
  std::normal_distribution<double> nd;
  for (auto& v : data.values()) v = Complex{nd(rng), nd(rng)};
  return SampleGrid{std::move(axes), std::move(data)};
}

// Random rational data: sum of `terms` products of simple poles, one per variable.
inline SampleGrid random_rational_grid(std::mt19937_64& rng, const Shape& shape, std::size_t terms) {
  std::vector<PointList> axes;
  for (auto n : shape) axes.push_back(random_points(rng, n));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<Complex>> poles(terms, std::vector<Complex>(shape.size()));
  for (auto& t : poles)
    for (auto& p : t) p = Complex{u(rng), 1.5 + u(rng) * 0.5};  // away from the sample region
  DenseTensor data(shape);
  for (std::size_t flat = 0; flat < data.size(); ++flat) {
    const MultiIndex zi = data.unravel(flat);
    Complex v{0.0, 0.0};
    for (const auto& t : poles) {
      Complex prod{1.0, 0.0};
      for (std::size_t j = 0; j < shape.size(); ++j) prod /= axes[j][zi[j]] - t[j];
      v += prod;
    }
    data[flat] = v;
  }
  return SampleGrid{std::move(axes), std::move(data)};
}

// Smallest generalized eigenvalue of (A^H A, G): the minimum of ||A x||^2 subject to x^H G x = 1.
inline double generalized_min(const Matrix& a, const Matrix& g) {
  const Matrix aha = a.adjoint() * a;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(aha, g);
  return es.eigenvalues().minCoeff();
}

// Rounding-level floor for ||L x||^2 with ||x|| = 1: a backward-stable solve is only accurate to ~eps ||L||.
inline double noise_floor(const Matrix& l) {
  const double e = 64.0 * std::numeric_limits<double>::epsilon() * l.norm();
  return e * e;
}

// |a - b| <= tol * max(a, b) + floor
inline bool objectives_agree(double a, double b, double tol, double floor) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + floor;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace oracle
