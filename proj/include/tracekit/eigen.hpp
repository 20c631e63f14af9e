#pragma once

#include <cstddef>
#include <vector>

#include "tracekit/dense.hpp"

namespace tracekit {

/// A = B^T diag(lambda) B with orthonormal B; row i of B is the eigenvector
/// for lambda[i]. Eigenvalues are sorted descending.
struct EigenDecomposition {
  std::size_t dim = 0;
  std::vector<double> lambda;
  std::vector<double> b;  // row-major

  double b_at(std::size_t i, std::size_t j) const { return b[i * dim + j]; }
  double lambda_sum() const;

  /// max |B^T B - I| entry.
  double orthonormality_defect() const;
  /// max |B^T diag(lambda) B - A| entry.
  double reconstruction_defect(const DenseSymmetric& a) const;
};

struct JacobiOptions {
  std::size_t dense_cap = 2048;  // largest dim accepted
  int max_sweeps = 100;
  double tol = 1e-12;  // stop when off-diagonal Frobenius mass <= tol * |A|_F
};

/// Cyclic Jacobi eigendecomposition; a small-scale oracle, not a performance
/// path. Throws CapExceededError above the cap and NoConvergenceError if the
/// sweep limit is hit.
EigenDecomposition eigenvalues(const DenseSymmetric& a, const JacobiOptions& options = {});

/// Numerical rank: eigenvalues above 1e-9 * max|lambda|.
std::size_t numerical_rank(const EigenDecomposition& eig);

/// Dense PSD validation within the cap: min eigenvalue >= -1e-9 * max|lambda|.
/// Operators beyond the cap get the probe in operator.hpp instead.
bool is_psd(const DenseSymmetric& a, const JacobiOptions& options = {});

}  // namespace tracekit
