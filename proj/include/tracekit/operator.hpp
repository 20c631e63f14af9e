#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tracekit/dense.hpp"

namespace tracekit {

/// Matrix-free access to a symmetric operator: a dimension plus an apply
/// callback. The callback must be deterministic and safe to call from many
/// threads at once.
///
/// trace_hint carries a known trace for matrix-free operators so relative
/// errors can still be measured; without it, relative-error paths refuse to
/// guess.
class SymmetricOperator {
 public:
  using ApplyFn = std::function<std::vector<double>(std::span<const double>)>;

  SymmetricOperator(std::size_t dim, ApplyFn apply,
                    std::optional<double> trace_hint = std::nullopt);

  std::size_t dim() const { return dim_; }
  const std::optional<double>& trace_hint() const { return trace_hint_; }

  /// A * v. Throws DimensionMismatchError.
  std::vector<double> apply(std::span<const double> v) const;

 private:
  std::size_t dim_ = 0;
  ApplyFn apply_;
  std::optional<double> trace_hint_;
};

/// Wraps a dense matrix as a matrix-free operator; the matrix is moved into
/// the closure and the exact trace becomes the hint.
SymmetricOperator as_operator(DenseSymmetric a);

/// Randomized symmetry probe: checks |u^T(Av) - v^T(Au)| against
/// 1e-9 * |u||v| * (operator norm estimate) for `probes` random pairs.
bool symmetry_probe(const SymmetricOperator& op, std::uint64_t seed, int probes = 8);

/// Randomized positive-semidefiniteness probe for operators too large for a
/// dense eigendecomposition: requires z^T A z >= -1e-9 * |z|^2 * (diagonal max)
/// for `probes` random sign vectors. A false result is a warning, not a proof.
bool psd_probe(const SymmetricOperator& op, std::uint64_t seed, int probes = 20);

}  // namespace tracekit
