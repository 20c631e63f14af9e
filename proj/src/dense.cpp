#include "tracekit/dense.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "tracekit/errors.hpp"

namespace tracekit {

namespace {

// Symmetry tolerance relative to the largest entry magnitude.
constexpr double kAsymmetryTol = 1e-12;

}  // namespace

DenseSymmetric DenseSymmetric::from_dense(const std::vector<std::vector<double>>& entries) {
  const std::size_t m = entries.size();
  if (m == 0) throw NonSquareError("from_dense: matrix must have at least one row");
  std::vector<double> flat;
  flat.reserve(m * m);
  for (const auto& row : entries) {
    if (row.size() != m) throw NonSquareError("from_dense: matrix is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return from_flat(m, std::move(flat));
}

DenseSymmetric DenseSymmetric::from_flat(std::size_t dim, std::vector<double> entries) {
  if (dim == 0) throw NonSquareError("from_flat: dim must be >= 1");
  if (entries.size() != dim * dim) throw NonSquareError("from_flat: entry count does not match dim*dim");

  double max_abs = 0.0;
  for (double x : entries) max_abs = std::max(max_abs, std::abs(x));
  double worst = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      worst = std::max(worst, std::abs(entries[i * dim + j] - entries[j * dim + i]));
    }
  }
  if (worst > kAsymmetryTol * max_abs) {
    throw AsymmetricError("from_flat: transpose mismatch " + std::to_string(worst) +
                          " exceeds tolerance");
  }
  // Symmetrize the two triangles by averaging.
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double v = 0.5 * (entries[i * dim + j] + entries[j * dim + i]);
      entries[i * dim + j] = v;
      entries[j * dim + i] = v;
    }
  }
  return DenseSymmetric(dim, std::move(entries));
}

DenseSymmetric DenseSymmetric::identity(std::size_t dim) {
  if (dim == 0) throw NonSquareError("identity: dim must be >= 1");
  std::vector<double> flat(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) flat[i * dim + i] = 1.0;
  return DenseSymmetric(dim, std::move(flat));
}

double DenseSymmetric::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += a_[i * dim_ + i];
  return t;
}

std::vector<double> DenseSymmetric::apply(std::span<const double> v) const {
  if (v.size() != dim_) {
    throw DimensionMismatchError("apply: vector length " + std::to_string(v.size()) +
                                 " does not match dim " + std::to_string(dim_));
  }
  std::vector<double> out(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double* row = a_.data() + i * dim_;
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

double DenseSymmetric::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace tracekit
