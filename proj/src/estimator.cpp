#include "tracekit/estimator.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "tracekit/errors.hpp"
#include "tracekit/sampler.hpp"

namespace tracekit {

double quadratic_form(const SymmetricOperator& op, std::span<const double> z) {
  const auto az = op.apply(z);
  double q = 0.0;
  for (std::size_t j = 0; j < az.size(); ++j) q += z[j] * az[j];
  return q;
}

namespace {

struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations
  double min_v = 0.0;
  double max_v = 0.0;
};

RunningStats leaf(double q) { return {1, q, 0.0, q, q}; }

// Chan-style merge; the lone floating-point path shared by every tree node.
RunningStats merge(const RunningStats& a, const RunningStats& b) {
  RunningStats out;
  out.n = a.n + b.n;
  const double total = static_cast<double>(out.n);
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * (static_cast<double>(b.n) / total);
  out.m2 = a.m2 + b.m2 + delta * delta * (static_cast<double>(a.n) * static_cast<double>(b.n) / total);
  out.min_v = std::min(a.min_v, b.min_v);
  out.max_v = std::max(a.max_v, b.max_v);
  return out;
}

constexpr std::uint64_t kMinParallelRange = 64;

struct Job {
  const SymmetricOperator* op;
  std::uint64_t seed;
  std::uint64_t first_index;
};

// The tree over [lo, hi) splits at the midpoint down to single samples; only
// the execution (not the arithmetic) depends on the worker budget.
RunningStats reduce(const Job& job, std::uint64_t lo, std::uint64_t hi, unsigned budget) {
  if (hi - lo == 1) {
    const auto z = rademacher(job.op->dim(), job.seed, job.first_index + lo);
    return leaf(quadratic_form(*job.op, z));
  }
  const std::uint64_t mid = lo + (hi - lo) / 2;
  if (budget > 1 && hi - lo >= kMinParallelRange) {
    const unsigned left_budget = budget / 2;
    auto left = std::async(std::launch::async, [&job, lo, mid, left_budget] {
      return reduce(job, lo, mid, left_budget);
    });
    const RunningStats right = reduce(job, mid, hi, budget - left_budget);
    return merge(left.get(), right);
  }
  return merge(reduce(job, lo, mid, 1), reduce(job, mid, hi, 1));
}

}  // namespace

TraceEstimate estimate_trace(const SymmetricOperator& op, std::uint64_t n, std::uint64_t seed,
                             unsigned threads, std::uint64_t first_index) {
  if (n == 0) throw DomainError("estimate_trace: n must be >= 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const Job job{&op, seed, first_index};
  const RunningStats stats = reduce(job, 0, n, threads);
  TraceEstimate est;
  est.n = n;
  est.mean = stats.mean;
  est.sample_variance = n >= 2 ? stats.m2 / static_cast<double>(n - 1) : 0.0;
  est.min_q = stats.min_v;
  est.max_q = stats.max_v;
  est.seed = seed;
  return est;
}

nlohmann::json to_json(const TraceEstimate& est) {
  return nlohmann::json{{"n", est.n},
                        {"estimate", est.mean},
                        {"sample_variance", est.sample_variance},
                        {"seed", est.seed},
                        {"min_q", est.min_q},
                        {"max_q", est.max_q}};
}

double relative_error(double estimate, double true_trace) {
  if (!(true_trace > 0.0)) {
    throw NonPositiveTraceError("relative_error: true trace must be positive, got " +
                                std::to_string(true_trace));
  }
  return estimate / true_trace - 1.0;
}

ErrorMeasurement measure_error(double estimate, double true_trace) {
  return {estimate, true_trace, relative_error(estimate, true_trace)};
}

}  // namespace tracekit
