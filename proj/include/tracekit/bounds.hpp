#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace tracekit {

/// Sub-gamma parameter pair: variance factor v and scale c. A random variable
/// belongs to this class when its log-MGF is dominated by v t^2 / (2 (1 - c t)).
struct SubGamma {
  double v = 0.0;
  double c = 0.0;
};

/// Inputs to the bound and planner formulas.
struct BoundQuery {
  double eps = 0.0;       // relative error target
  double delta = 0.0;     // failure probability
  std::uint64_t n = 1;    // sample count
  int d = 2;              // moment order
  std::uint64_t rank = 1; // matrix rank, used by the avron planners
};

/// d-th norm bound for the one-shot relative error: d - 1 (d >= 2).
double moment_bound(int d);

/// v t^2 / (2 (1 - c t)) on 0 <= t < 1/c (any t >= 0 when c = 0).
double mgf_envelope(SubGamma sg, double t);

/// exp(-eps^2 / (v + c eps)); 1 at eps = 0. The degenerate v = c = 0 pair
/// returns 0 for eps > 0 as the limit convention.
double tail_lemma(SubGamma sg, double eps);

/// exp(-n eps^2 / (2 (1 - (8/3) eps))) on 0 < eps < 3/8; n = 1 is the
/// one-shot tail.
double tail_theorem(double eps, std::uint64_t n);

/// Independent-sum composition: (sum of v, max of c).
SubGamma subgamma_sum(std::span<const SubGamma> parts);

/// MGF substitution t -> a t: (a^2 v, a c) for a > 0.
SubGamma subgamma_scale(SubGamma sg, double a);

enum class PlannerMethod { this_work, roosta, avron_table, avron_fig };

/// Stable identifiers: "this-work", "roosta", "avron-table", "avron-fig".
PlannerMethod planner_from_name(std::string_view name);
std::string_view planner_name(PlannerMethod method);

/// Smallest sample count the chosen bound certifies for (eps, delta):
///   this-work   2 (1 - (8/3) eps) log(1/delta) / eps^2     (0 < eps < 3/8)
///   roosta      6 log(2/delta) / eps^2
///   avron-table (6 log(2/delta) + 6 rank) / eps^2
///   avron-fig   (6 log(1/delta) + 6 log(rank)) / eps^2
/// Values round up, floor 1. avron-table and avron-fig differ on purpose:
/// the first follows the published table, the second the published plot; see
/// the README.
std::uint64_t sample_size(const BoundQuery& q, PlannerMethod method);

/// Taylor coefficient a_d = (d-1)^d / d! of the MGF majorant series.
struct EnvelopeSeries {
  int order = 2;
  double coefficient = 0.5;
};

EnvelopeSeries envelope_term(int d);

/// Successive-coefficient ratio a_{d+1}/a_d = d^{d+1} / ((d-1)^d (d+1)).
/// Exact double arithmetic for small d, log-space beyond, so scans to d=10^4
/// cannot overflow.
double taylor_ratio(int d);

/// Partial sum 1 + sum_{d=2..terms} t^d (d-1)^d / d!, terms in log-space.
/// Throws OverflowError when a term leaves the double range.
double mgf_series_partial(double t, int terms);

}  // namespace tracekit
