#include "tracekit/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tracekit/errors.hpp"

namespace tracekit {

double EigenDecomposition::lambda_sum() const {
  return std::accumulate(lambda.begin(), lambda.end(), 0.0);
}

double EigenDecomposition::orthonormality_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k) acc += b[k * dim + i] * b[k * dim + j];
      worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double EigenDecomposition::reconstruction_defect(const DenseSymmetric& a) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k) acc += b[k * dim + i] * lambda[k] * b[k * dim + j];
      worst = std::max(worst, std::abs(acc - a.at(i, j)));
    }
  }
  return worst;
}

namespace {

double off_diagonal_frobenius(const std::vector<double>& a, std::size_t m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) acc += a[i * m + j] * a[i * m + j];
    }
  }
  return std::sqrt(acc);
}

}  // namespace

EigenDecomposition eigenvalues(const DenseSymmetric& input, const JacobiOptions& options) {
  const std::size_t m = input.dim();
  if (m > options.dense_cap) {
    throw CapExceededError("eigenvalues: dim " + std::to_string(m) + " exceeds dense cap " +
                           std::to_string(options.dense_cap));
  }
  std::vector<double> a(input.entries().begin(), input.entries().end());
  std::vector<double> v(m * m, 0.0);  // accumulated rotations, columns are eigenvectors
  for (std::size_t i = 0; i < m; ++i) v[i * m + i] = 1.0;

  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  const double target = options.tol * frob;

  bool converged = off_diagonal_frobenius(a, m) <= target;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double apq = a[p * m + q];
        if (apq == 0.0) continue;
        // Symmetric Schur rotation zeroing a[p][q].
        const double tau = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < m; ++k) {
          const double akp = a[k * m + p];
          const double akq = a[k * m + q];
          a[k * m + p] = c * akp - s * akq;
          a[k * m + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double apk = a[p * m + k];
          const double aqk = a[q * m + k];
          a[p * m + k] = c * apk - s * aqk;
          a[q * m + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double vkp = v[k * m + p];
          const double vkq = v[k * m + q];
          v[k * m + p] = c * vkp - s * vkq;
          v[k * m + q] = s * vkp + c * vkq;
        }
      }
    }
    converged = off_diagonal_frobenius(a, m) <= target;
  }
  if (!converged) {
    throw NoConvergenceError("eigenvalues: Jacobi did not converge within " +
                             std::to_string(options.max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a[i * m + i] > a[j * m + j]; });

  EigenDecomposition eig;
  eig.dim = m;
  eig.lambda.resize(m);
  eig.b.resize(m * m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t col = order[r];
    eig.lambda[r] = a[col * m + col];
    // Column `col` of V becomes row r of B.
    for (std::size_t k = 0; k < m; ++k) eig.b[r * m + k] = v[k * m + col];
  }
  return eig;
}

bool is_psd(const DenseSymmetric& a, const JacobiOptions& options) {
  const auto eig = eigenvalues(a, options);
  double max_abs = 0.0;
  for (double l : eig.lambda) max_abs = std::max(max_abs, std::abs(l));
  return eig.lambda.empty() || eig.lambda.back() >= -1e-9 * max_abs;
}

std::size_t numerical_rank(const EigenDecomposition& eig) {
  double max_abs = 0.0;
  for (double l : eig.lambda) max_abs = std::max(max_abs, std::abs(l));
  if (max_abs == 0.0) return 0;
  std::size_t rank = 0;
  for (double l : eig.lambda) {
    if (l > 1e-9 * max_abs) ++rank;
  }
  return rank;
}

}  // namespace tracekit
