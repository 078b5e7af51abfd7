#include "lraaa/barycentric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace lraaa {

namespace {

struct ComplexHash {
  std::size_t operator()(const Complex& c) const noexcept {
    const auto h1 = std::hash<double>{}(c.real());
    const auto h2 = std::hash<double>{}(c.imag());
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

bool has_duplicates(std::span<const Complex> pts) {
  std::unordered_map<Complex, std::size_t, ComplexHash> seen;
  seen.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!seen.emplace(pts[i], i).second) return true;
  }
  return false;
}

// Position of every point in `nodes`, or -1 if it is not a node.
std::vector<long> node_positions(std::span<const Complex> nodes, std::span<const Complex> points) {
  std::unordered_map<Complex, long, ComplexHash> lookup;
  for (std::size_t i = 0; i < nodes.size(); ++i) lookup.emplace(nodes[i], static_cast<long>(i));
  std::vector<long> pos(points.size(), -1);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (auto it = lookup.find(points[k]); it != lookup.end()) pos[k] = it->second;
  }
  return pos;
}

std::string format_point(std::span<const Complex> z) {
  std::ostringstream os;
  os << "(";
  for (std::size_t j = 0; j < z.size(); ++j) os << (j ? ", " : "") << z[j];
  os << ")";
  return os.str();
}

// Contracts every mode of `t` against the matching vector, leaving a scalar.
Complex contract_all(const DenseTensor& t, const std::vector<Vector>& vecs) {
  DenseTensor acc = t;
  for (std::size_t j = t.order(); j-- > 0;) {
    acc = mode_product(acc, vecs[j].transpose(), j);
  }
  return acc[0];
}

}  // namespace

Shape SampleGrid::shape() const {
  Shape s;
  for (const auto& a : axes) s.push_back(a.size());
  return s;
}

void SampleGrid::validate() const {
  if (axes.empty() || axes.size() > kMaxOrder) {
    throw Error(ErrorCode::kShapeMismatch, "grid must have between 1 and " + std::to_string(kMaxOrder) + " axes");
  }
  for (std::size_t j = 0; j < axes.size(); ++j) {
    if (axes[j].empty()) throw Error(ErrorCode::kShapeMismatch, "grid axis " + std::to_string(j) + " is empty");
    if (has_duplicates(axes[j])) {
      throw Error(ErrorCode::kDuplicatePoint, "grid axis " + std::to_string(j) + " contains a duplicate point");
    }
  }
  if (data.shape() != shape()) throw Error(ErrorCode::kShapeMismatch, "data shape does not match the axis lengths");
}

Shape BarycentricModel::node_shape() const {
  Shape s;
  for (const auto& n : nodes) s.push_back(n.size());
  return s;
}

DenseTensor BarycentricModel::coefficient_tensor() const {
  if (const auto* full = std::get_if<DenseTensor>(&coeffs)) return *full;
  return materialize_cp(std::get<CPFactors>(coeffs));
}

void BarycentricModel::validate() const {
  if (nodes.empty() || nodes.size() > kMaxOrder) throw Error(ErrorCode::kShapeMismatch, "model order out of range");
  for (const auto& n : nodes) {
    if (n.empty()) throw Error(ErrorCode::kShapeMismatch, "model has an empty node list");
    if (has_duplicates(n)) throw Error(ErrorCode::kDuplicateNodes, "model node list contains duplicates");
  }
  const Shape s = node_shape();
  if (interpolated.shape() != s) throw Error(ErrorCode::kShapeMismatch, "interpolated data shape does not match nodes");
  if (const auto* full = std::get_if<DenseTensor>(&coeffs)) {
    if (full->shape() != s) throw Error(ErrorCode::kShapeMismatch, "coefficient tensor shape does not match nodes");
  } else if (std::get<CPFactors>(coeffs).shape() != s) {
    throw Error(ErrorCode::kShapeMismatch, "CP factor shapes do not match nodes");
  }
}

std::optional<std::size_t> find_exact(std::span<const Complex> points, Complex value) {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] == value) return i;
  return std::nullopt;
}

Matrix modified_cauchy(std::span<const Complex> nodes, std::span<const Complex> points) {
  if (has_duplicates(nodes)) throw Error(ErrorCode::kDuplicateNodes, "modified_cauchy: duplicate nodes");
  if (has_duplicates(points)) throw Error(ErrorCode::kDuplicateNodes, "modified_cauchy: duplicate points");
  const auto pos = node_positions(nodes, points);
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Matrix c = Matrix::Zero(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    if (pos[k] >= 0) {
      c(pos[k], col) = 1.0;
      continue;
    }
    for (Eigen::Index i = 0; i < n; ++i) c(i, col) = 1.0 / (points[k] - nodes[static_cast<std::size_t>(i)]);
  }
  return c;
}

Complex evaluate(const BarycentricModel& model, std::span<const Complex> z) {
  const std::size_t d = model.order();
  if (z.size() != d) throw Error(ErrorCode::kDimensionMismatch, "evaluation point has the wrong number of variables");

  MultiIndex node_index(d);
  bool at_node = true;
  std::vector<Vector> c(d);
  for (std::size_t j = 0; j < d; ++j) {
    c[j] = modified_cauchy(model.nodes[j], z.subspan(j, 1)).col(0);
    if (auto hit = find_exact(model.nodes[j], z[j])) {
      node_index[j] = *hit;
    } else {
      at_node = false;
    }
  }
  if (at_node) return model.interpolated.at(node_index);

  Complex num{0.0, 0.0};
  Complex den{0.0, 0.0};
  if (const auto* cp = std::get_if<CPFactors>(&model.coeffs)) {
    std::vector<Vector> w(d);
    for (std::size_t k = 0; k < cp->rank(); ++k) {
      Complex term{1.0, 0.0};
      for (std::size_t j = 0; j < d; ++j) {
        const auto col = cp->factor(j).col(static_cast<Eigen::Index>(k));
        term *= c[j].cwiseProduct(col).sum();
        w[j] = c[j].cwiseProduct(col);
      }
      den += term;
      num += contract_all(model.interpolated, w);
    }
  } else {
    const auto& alpha = std::get<DenseTensor>(model.coeffs);
    DenseTensor weighted = alpha;
    for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] *= model.interpolated[i];
    num = contract_all(weighted, c);
    den = contract_all(alpha, c);
  }
  if (den == Complex{0.0, 0.0}) {
    throw PoleError({z.begin(), z.end()}, "denominator vanishes at non-node point " + format_point(z));
  }
  return num / den;
}

GridEvaluation evaluate_grid_parts(const BarycentricModel& model, std::span<const PointList> axes) {
  const std::size_t d = model.order();
  if (axes.size() != d) throw Error(ErrorCode::kDimensionMismatch, "grid order does not match the model");

  std::vector<Matrix> ct(d);
  Shape grid_shape(d);
  for (std::size_t j = 0; j < d; ++j) {
    ct[j] = modified_cauchy(model.nodes[j], axes[j]).transpose();
    grid_shape[j] = axes[j].size();
  }

  DenseTensor alpha = model.coefficient_tensor();
  DenseTensor num = alpha;
  for (std::size_t i = 0; i < num.size(); ++i) num[i] *= model.interpolated[i];
  for (std::size_t j = 0; j < d; ++j) num = mode_product(num, ct[j], j);

  DenseTensor den;
  if (const auto* cp = std::get_if<CPFactors>(&model.coeffs)) {
    den = DenseTensor(grid_shape);
    Eigen::Map<Vector> acc(den.data(), static_cast<Eigen::Index>(den.size()));
    std::vector<Vector> parts(d);
    for (std::size_t k = 0; k < cp->rank(); ++k) {
      for (std::size_t j = 0; j < d; ++j) parts[j] = ct[j] * cp->factor(j).col(static_cast<Eigen::Index>(k));
      acc += kron(parts);
    }
  } else {
    den = std::move(alpha);
    for (std::size_t j = 0; j < d; ++j) den = mode_product(den, ct[j], j);
  }

  // Node tuples are written from H directly so interpolation is exact.
  std::vector<std::vector<long>> pos(d);
  for (std::size_t j = 0; j < d; ++j) pos[j] = node_positions(model.nodes[j], axes[j]);

  DenseTensor values(grid_shape);
  MultiIndex idx(d, 0);
  MultiIndex node_idx(d, 0);
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    bool at_node = true;
    for (std::size_t j = 0; j < d && at_node; ++j) {
      if (pos[j][idx[j]] < 0) at_node = false;
      else node_idx[j] = static_cast<std::size_t>(pos[j][idx[j]]);
    }
    if (at_node) {
      values[flat] = model.interpolated.at(node_idx);
    } else if (den[flat] == Complex{0.0, 0.0}) {
      std::vector<Complex> z(d);
      for (std::size_t j = 0; j < d; ++j) z[j] = axes[j][idx[j]];
      throw PoleError(z, "denominator vanishes at grid point " + format_point(z));
    } else {
      values[flat] = num[flat] / den[flat];
    }
    for (std::size_t j = d; j-- > 0;) {
      if (++idx[j] < grid_shape[j]) break;
      idx[j] = 0;
    }
  }
  return {std::move(num), std::move(den), std::move(values)};
}

DenseTensor evaluate_grid(const BarycentricModel& model, std::span<const PointList> axes) {
  return evaluate_grid_parts(model, axes).values;
}

DenseTensor evaluate_grid(const BarycentricModel& model, const SampleGrid& grid) {
  return evaluate_grid(model, grid.axes);
}

double relative_max_error(const DenseTensor& approx, const DenseTensor& data) {
  if (approx.shape() != data.shape()) throw Error(ErrorCode::kDimensionMismatch, "relative_max_error: shape mismatch");
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    worst = std::max(worst, std::abs(data[i] - approx[i]));
    scale = std::max(scale, std::abs(data[i]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double relative_ls_error(const DenseTensor& approx, const DenseTensor& data) {
  if (approx.shape() != data.shape()) throw Error(ErrorCode::kDimensionMismatch, "relative_ls_error: shape mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    num += std::norm(data[i] - approx[i]);
    den += std::norm(data[i]);
  }
  if (den == 0.0) return squared_norm(approx.values());
  return num / den;
}

double relative_linearized_ls_error(const GridEvaluation& parts, const DenseTensor& data) {
  if (parts.denominator.shape() != data.shape()) {
    throw Error(ErrorCode::kDimensionMismatch, "relative_linearized_ls_error: shape mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    num += std::norm(parts.denominator[i] * data[i] - parts.numerator[i]);
    den += std::norm(data[i]);
  }
  if (den == 0.0) throw Error(ErrorCode::kInvalidArgument, "linearized error undefined for all-zero data");
  return num / den;
}

double relative_linearized_ls_error(const BarycentricModel& model, const SampleGrid& grid) {
  return relative_linearized_ls_error(evaluate_grid_parts(model, grid.axes), grid.data);
}

}  // namespace lraaa
