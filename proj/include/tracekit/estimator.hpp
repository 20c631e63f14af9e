#pragma once

#include <cstdint>
#include <span>

#include <json.hpp>

#include "tracekit/operator.hpp"

namespace tracekit {

/// Result of the n-sample estimator.
struct TraceEstimate {
  std::uint64_t n = 0;
  double mean = 0.0;             // trace estimate
  double sample_variance = 0.0;  // unbiased variance of the n quadratic forms, 0 when n = 1
  double min_q = 0.0;            // smallest per-sample quadratic form
  double max_q = 0.0;            // largest per-sample quadratic form
  std::uint64_t seed = 0;
};

/// {"n","estimate","sample_variance","seed","min_q","max_q"}.
nlohmann::json to_json(const TraceEstimate& est);

struct ErrorMeasurement {
  double estimate = 0.0;
  double true_trace = 0.0;
  double relative_error = 0.0;
};

/// z^T (A z) with one apply call and one dot product.
double quadratic_form(const SymmetricOperator& op, std::span<const double> z);

/// Mean of quadratic forms over sign vectors sampled at stream indexes
/// first_index .. first_index+n-1. Accumulation follows a pairwise-reduction
/// tree fixed by n alone, so the result is bit-identical for any number of
/// worker threads (threads = 0 picks the hardware count).
TraceEstimate estimate_trace(const SymmetricOperator& op, std::uint64_t n, std::uint64_t seed,
                             unsigned threads = 0, std::uint64_t first_index = 0);

/// estimate / true_trace - 1. Throws NonPositiveTraceError when
/// true_trace <= 0.
double relative_error(double estimate, double true_trace);

ErrorMeasurement measure_error(double estimate, double true_trace);

}  // namespace tracekit
