#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tracekit {

/// Dense symmetric matrix with full row-major storage.
///
/// Construction goes through from_dense / from_flat, which reject non-square
/// input, reject asymmetry beyond 1e-12 * max|entry|, and symmetrize the rest
/// by averaging the two triangles. Instances are immutable afterwards.
class DenseSymmetric {
 public:
  static DenseSymmetric from_dense(const std::vector<std::vector<double>>& entries);

  /// Same validation as from_dense, entries given row-major.
  static DenseSymmetric from_flat(std::size_t dim, std::vector<double> entries);

  static DenseSymmetric identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  double at(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  /// Exact trace: the diagonal sum.
  double trace() const;

  /// A * v. Throws DimensionMismatchError.
  std::vector<double> apply(std::span<const double> v) const;

  /// Row-major entries.
  std::span<const double> entries() const { return a_; }

  double max_abs() const;

 private:
  DenseSymmetric(std::size_t dim, std::vector<double> entries)
      : dim_(dim), a_(std::move(entries)) {}

  std::size_t dim_ = 0;
  std::vector<double> a_;
};

}  // namespace tracekit
