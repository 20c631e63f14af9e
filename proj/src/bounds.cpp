#include "tracekit/bounds.hpp"

#include <cmath>
#include <limits>

#include "tracekit/errors.hpp"

namespace tracekit {

namespace {

constexpr double kEpsUpper = 3.0 / 8.0;
constexpr double kScale = 8.0 / 3.0;

void check_probability(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("delta must lie in (0,1), got " + std::to_string(delta));
  }
}

std::uint64_t ceil_to_count(double value) {
  if (!std::isfinite(value)) throw DomainError("sample size formula did not evaluate to a finite value");
  const double up = std::ceil(value);
  if (up <= 1.0) return 1;
  return static_cast<std::uint64_t>(up);
}

}  // namespace

double moment_bound(int d) {
  if (d < 2) throw DomainError("moment_bound: d must be >= 2, got " + std::to_string(d));
  return static_cast<double>(d - 1);
}

double mgf_envelope(SubGamma sg, double t) {
  if (sg.v < 0.0 || sg.c < 0.0) throw DomainError("mgf_envelope: v and c must be nonnegative");
  if (t < 0.0) throw DomainError("mgf_envelope: t must be >= 0");
  if (sg.c > 0.0 && t >= 1.0 / sg.c) {
    throw DomainError("mgf_envelope: t=" + std::to_string(t) + " is outside [0, 1/c)");
  }
  return sg.v * t * t / (2.0 * (1.0 - sg.c * t));
}

double tail_lemma(SubGamma sg, double eps) {
  if (sg.v < 0.0 || sg.c < 0.0) throw DomainError("tail_lemma: v and c must be nonnegative");
  if (eps < 0.0) throw DomainError("tail_lemma: eps must be >= 0");
  if (eps == 0.0) return 1.0;
  const double denom = sg.v + sg.c * eps;
  if (denom == 0.0) return 0.0;  // degenerate limit
  return std::exp(-eps * eps / denom);
}

double tail_theorem(double eps, std::uint64_t n) {
  if (!(eps > 0.0 && eps < kEpsUpper)) {
    throw DomainError("tail_theorem: eps must lie in (0, 3/8), got " + std::to_string(eps));
  }
  if (n == 0) throw DomainError("tail_theorem: n must be >= 1");
  return std::exp(-static_cast<double>(n) * eps * eps / (2.0 * (1.0 - kScale * eps)));
}

SubGamma subgamma_sum(std::span<const SubGamma> parts) {
  if (parts.empty()) throw EmptyListError("subgamma_sum: needs at least one part");
  SubGamma out{0.0, 0.0};
  for (const SubGamma& p : parts) {
    if (p.v < 0.0 || p.c < 0.0) throw DomainError("subgamma_sum: v and c must be nonnegative");
    out.v += p.v;
    out.c = std::max(out.c, p.c);
  }
  return out;
}

SubGamma subgamma_scale(SubGamma sg, double a) {
  if (!(a > 0.0)) throw DomainError("subgamma_scale: a must be > 0");
  if (sg.v < 0.0 || sg.c < 0.0) throw DomainError("subgamma_scale: v and c must be nonnegative");
  return {a * a * sg.v, a * sg.c};
}

PlannerMethod planner_from_name(std::string_view name) {
  if (name == "this-work") return PlannerMethod::this_work;
  if (name == "roosta") return PlannerMethod::roosta;
  if (name == "avron-table") return PlannerMethod::avron_table;
  if (name == "avron-fig") return PlannerMethod::avron_fig;
  throw DomainError("unknown planner method '" + std::string(name) + "'");
}

std::string_view planner_name(PlannerMethod method) {
  switch (method) {
    case PlannerMethod::this_work: return "this-work";
    case PlannerMethod::roosta: return "roosta";
    case PlannerMethod::avron_table: return "avron-table";
    case PlannerMethod::avron_fig: return "avron-fig";
  }
  throw DomainError("unknown planner method");
}

std::uint64_t sample_size(const BoundQuery& q, PlannerMethod method) {
  check_probability(q.delta);
  switch (method) {
    case PlannerMethod::this_work:
      if (!(q.eps > 0.0 && q.eps < kEpsUpper)) {
        throw DomainError("sample_size(this-work): eps must lie in (0, 3/8), got " +
                          std::to_string(q.eps));
      }
      return ceil_to_count(2.0 * (1.0 - kScale * q.eps) * std::log(1.0 / q.delta) / (q.eps * q.eps));
    case PlannerMethod::roosta:
      if (!(q.eps > 0.0)) throw DomainError("sample_size(roosta): eps must be > 0");
      return ceil_to_count(6.0 * std::log(2.0 / q.delta) / (q.eps * q.eps));
    case PlannerMethod::avron_table:
      if (!(q.eps > 0.0)) throw DomainError("sample_size(avron-table): eps must be > 0");
      if (q.rank < 1) throw DomainError("sample_size(avron-table): rank must be >= 1");
      return ceil_to_count((6.0 * std::log(2.0 / q.delta) + 6.0 * static_cast<double>(q.rank)) /
                           (q.eps * q.eps));
    case PlannerMethod::avron_fig:
      if (!(q.eps > 0.0)) throw DomainError("sample_size(avron-fig): eps must be > 0");
      if (q.rank < 1) throw DomainError("sample_size(avron-fig): rank must be >= 1");
      return ceil_to_count(
          (6.0 * std::log(1.0 / q.delta) + 6.0 * std::log(static_cast<double>(q.rank))) /
          (q.eps * q.eps));
  }
  throw DomainError("unknown planner method");
}

EnvelopeSeries envelope_term(int d) {
  if (d < 2) throw DomainError("envelope_term: d must be >= 2");
  double coeff;
  if (d <= 13) {
    // Exact in double arithmetic: every intermediate stays below 2^53.
    double num = 1.0, den = 1.0;
    for (int i = 0; i < d; ++i) num *= static_cast<double>(d - 1);
    for (int i = 2; i <= d; ++i) den *= static_cast<double>(i);
    coeff = num / den;
  } else {
    coeff = std::exp(d * std::log(static_cast<double>(d - 1)) - std::lgamma(d + 1.0));
  }
  return {d, coeff};
}

double taylor_ratio(int d) {
  if (d < 2) throw DomainError("taylor_ratio: d must be >= 2");
  if (d <= 13) {
    double num = 1.0, den = static_cast<double>(d + 1);
    for (int i = 0; i <= d; ++i) num *= static_cast<double>(d);
    for (int i = 0; i < d; ++i) den *= static_cast<double>(d - 1);
    return num / den;
  }
  const double dd = static_cast<double>(d);
  return std::exp((dd + 1.0) * std::log(dd) - dd * std::log(dd - 1.0) - std::log(dd + 1.0));
}

double mgf_series_partial(double t, int terms) {
  if (t < 0.0) throw DomainError("mgf_series_partial: t must be >= 0");
  if (terms < 2) throw DomainError("mgf_series_partial: need at least the d=2 term");
  if (t == 0.0) return 1.0;
  const double log_max = std::log(std::numeric_limits<double>::max());
  const double log_t = std::log(t);
  double sum = 1.0;
  for (int d = 2; d <= terms; ++d) {
    const double log_term = d * log_t + d * std::log(static_cast<double>(d - 1)) - std::lgamma(d + 1.0);
    if (log_term > log_max) {
      throw OverflowError("mgf_series_partial: term d=" + std::to_string(d) +
                          " exceeds the double range");
    }
    sum += std::exp(log_term);
  }
  return sum;
}

}  // namespace tracekit
