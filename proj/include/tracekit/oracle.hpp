#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tracekit/dense.hpp"

namespace tracekit {

struct OracleOptions {
  std::size_t cap = 20;  // largest dim the enumerator accepts
  unsigned threads = 0;  // 0 = hardware count
};

enum class TailSide { two_sided, upper, lower };

/// Quadratic forms z^T A z over one representative of each +-z pair, in the
/// enumeration order reproduced by representative_sign_vector. Each value
/// carries weight 2^-(m-1).
///
/// The walk fixes the top sign bits per subcube and runs an independent
/// Gray-code walk per subcube: a bit flip updates z^T A z in constant work
/// given A z, and A z in O(m), for O(2^(m-1) m) total.
std::vector<double> enumerate_quadratic_forms(const DenseSymmetric& a,
                                              const OracleOptions& options = {});

/// Sign pattern of representative `ordinal` in enumeration order
/// (coordinate m-1 is always +1).
std::vector<double> representative_sign_vector(std::size_t m, std::uint64_t ordinal);

/// Full distribution of the one-shot estimator over the sign cube, stored
/// unnormalized so one enumeration serves trace, moments, tails, and MGF.
class ExactErrorDistribution {
 public:
  static ExactErrorDistribution build(const DenseSymmetric& a, const OracleOptions& options = {});

  std::size_t dim() const { return m_; }
  double trace() const { return trace_; }
  std::span<const double> values() const { return values_; }

  /// Weighted mean of the stored quadratic forms.
  double mean() const;

  /// E|err|^d where err = value/trace - 1 (the d-th norm is the d-th root).
  double abs_moment(int d) const;

  /// Exact probability of |err| >= eps (or the one-sided variants).
  double tail(double eps, TailSide side) const;

  /// E exp(t err), max-shifted for stability.
  double mgf(double t) const;

 private:
  ExactErrorDistribution(std::size_t m, double trace, std::vector<double> values)
      : m_(m), trace_(trace), values_(std::move(values)) {}

  std::size_t m_ = 0;
  double trace_ = 0.0;
  std::vector<double> values_;
};

inline ExactErrorDistribution exact_distribution(const DenseSymmetric& a,
                                                 const OracleOptions& options = {}) {
  return ExactErrorDistribution::build(a, options);
}

/// CSV dump `value,weight` (one representative per row) for external analysis.
void write_distribution_csv(const ExactErrorDistribution& dist, std::ostream& out);

/// Closed-form variance of z^T A z: 2 sum_{i != j} A_ij^2. Independent
/// cross-check for the enumerated second moment.
double variance_formula(const DenseSymmetric& a);

/// Zero-diagonal quadratic chaos sum_{j<j'} c_{j,j'} z_j z_{j'} with symmetric
/// weights.
class ChaosPolynomial {
 public:
  explicit ChaosPolynomial(std::size_t m);

  /// Standard-normal coefficients.
  static ChaosPolynomial random(std::size_t m, std::uint64_t seed);

  std::size_t dim() const { return m_; }
  double coefficient(std::size_t j, std::size_t j_prime) const;
  void set_coefficient(std::size_t j, std::size_t j_prime, double value);

  /// |F|_2 in closed form: sqrt(sum of squared coefficients).
  double norm2() const;

  /// Exact |F|_d = (E|F|^d)^(1/d) by exhaustive enumeration.
  double exact_norm(int d, const OracleOptions& options = {}) const;

  double evaluate(std::span<const double> z) const;

 private:
  std::size_t index(std::size_t j, std::size_t j_prime) const;

  std::size_t m_ = 0;
  std::vector<double> coeff_;  // pairs (j, j') with j < j'
};

inline double chaos_exact_norm(const ChaosPolynomial& chaos, int d,
                               const OracleOptions& options = {}) {
  return chaos.exact_norm(d, options);
}

}  // namespace tracekit
