#include "tracekit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "tracekit/errors.hpp"
#include "tracekit/estimator.hpp"
#include "tracekit/sampler.hpp"
#include "tracekit/version.hpp"

namespace tracekit {

namespace {

constexpr double kViolationTol = 1e-12;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

const char* side_name(TailSide side) {
  switch (side) {
    case TailSide::two_sided: return "two_sided";
    case TailSide::upper: return "upper";
    case TailSide::lower: return "lower";
  }
  return "?";
}

}  // namespace

AuditCase make_case(std::string suite, std::string input, double quantity, double bound) {
  AuditCase c;
  c.suite = std::move(suite);
  c.input = std::move(input);
  c.quantity = quantity;
  c.bound = bound;
  c.holds = quantity <= bound + kViolationTol * std::max(1.0, std::abs(bound));
  c.margin = bound - quantity;
  return c;
}

std::size_t AuditReport::passed() const {
  return static_cast<std::size_t>(
      std::count_if(cases.begin(), cases.end(), [](const AuditCase& c) { return c.holds; }));
}

std::size_t AuditReport::failed() const { return cases.size() - passed(); }

const AuditCase* AuditReport::first_violation() const {
  for (const AuditCase& c : cases) {
    if (!c.holds) return &c;
  }
  return nullptr;
}

nlohmann::json to_json(const AuditReport& report) {
  nlohmann::json cases = nlohmann::json::array();
  for (const AuditCase& c : report.cases) {
    cases.push_back({{"suite", c.suite},
                     {"input", c.input},
                     {"quantity", c.quantity},
                     {"bound", c.bound},
                     {"holds", c.holds},
                     {"margin", c.margin}});
  }
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"suite", report.suite},
                        {"seed", report.seed},
                        {"rng", kRngId},
                        {"config", report.config},
                        {"counts", {{"passed", report.passed()}, {"failed", report.failed()}}},
                        {"cases", std::move(cases)}};
}

void write_csv(const AuditReport& report, std::ostream& out) {
  out << "suite,input,quantity,bound,holds,margin\n";
  for (const AuditCase& c : report.cases) {
    out << c.suite << "," << c.input << "," << format_double(c.quantity) << ","
        << format_double(c.bound) << "," << (c.holds ? "true" : "false") << ","
        << format_double(c.margin) << "\n";
  }
}

std::vector<SuiteMatrix> standard_suite(std::uint64_t base_seed, std::size_t count) {
  constexpr std::size_t kDim = 10;
  constexpr std::size_t kDegrees[] = {2, 10, 50};
  std::vector<SuiteMatrix> suite;
  suite.reserve(count + 2);
  for (std::size_t i = 0; i < count; ++i) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::wishart;
    spec.dim = kDim;
    spec.rank = kDegrees[i % 3];
    spec.seed = base_seed + i;
    suite.push_back({spec.to_string(), generate(spec)});
  }
  suite.push_back({"identity:10", DenseSymmetric::identity(kDim)});
  GeneratorSpec diag;
  diag.kind = GeneratorKind::diagonal_uniform;
  diag.dim = kDim;
  diag.seed = base_seed;
  suite.push_back({diag.to_string(), generate(diag)});
  return suite;
}

DenseSymmetric witness_matrix() {
  return DenseSymmetric::from_dense({{1.0, 0.5}, {0.5, 1.0}});
}

AuditReport audit_moments(std::span<const SuiteMatrix> suite, int d_max,
                          const OracleOptions& options) {
  if (d_max < 2) throw DomainError("audit_moments: d_max must be >= 2");
  AuditReport report;
  report.suite = "moments";
  report.config = "d=2.." + std::to_string(d_max);
  for (const SuiteMatrix& entry : suite) {
    const auto dist = exact_distribution(entry.matrix, options);
    for (int d = 2; d <= d_max; ++d) {
      const double norm = std::pow(dist.abs_moment(d), 1.0 / static_cast<double>(d));
      report.cases.push_back(
          make_case("moments", entry.name + " d=" + std::to_string(d), norm, moment_bound(d)));
    }
  }
  return report;
}

AuditReport audit_tails(std::span<const SuiteMatrix> suite, std::span<const double> eps_grid,
                        std::span<const TailSide> sides, bool include_witness,
                        const OracleOptions& options) {
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps < 3.0 / 8.0)) {
      throw DomainError("audit_tails: eps grid must lie in (0, 3/8)");
    }
  }
  const SubGamma one_shot{1.0, 8.0 / 3.0};
  AuditReport report;
  report.suite = "tails";
  std::ostringstream config;
  config << "forms=theorem,lemma eps={";
  for (std::size_t i = 0; i < eps_grid.size(); ++i) config << (i ? "," : "") << format_short(eps_grid[i]);
  config << "} witness=" << (include_witness ? "on" : "off");
  report.config = config.str();

  auto add_cases = [&](const std::string& name, const ExactErrorDistribution& dist, double eps,
                       TailSide side) {
    const double exact = dist.tail(eps, side);
    const std::string base = name + " eps=" + format_short(eps) + " side=" + side_name(side);
    report.cases.push_back(
        make_case("tails", base + " form=theorem", exact, tail_theorem(eps, 1)));
    report.cases.push_back(
        make_case("tails", base + " form=lemma", exact, tail_lemma(one_shot, eps)));
  };

  for (const SuiteMatrix& entry : suite) {
    const auto dist = exact_distribution(entry.matrix, options);
    for (double eps : eps_grid) {
      for (TailSide side : sides) add_cases(entry.name, dist, eps, side);
    }
  }
  if (include_witness) {
    const auto dist = exact_distribution(witness_matrix(), options);
    for (TailSide side : {TailSide::two_sided, TailSide::upper, TailSide::lower}) {
      const double eps = 0.3;
      const double exact = dist.tail(eps, side);
      const std::string base =
          std::string("witness-2x2 eps=") + format_short(eps) + " side=" + side_name(side);
      report.cases.push_back(
          make_case("tails", base + " form=theorem", exact, tail_theorem(eps, 1)));
    }
  }
  return report;
}

AuditReport audit_mgf(std::span<const SuiteMatrix> suite, std::span<const double> t_grid,
                      const OracleOptions& options) {
  for (double t : t_grid) {
    if (!(t > 0.0 && t < 3.0 / 8.0)) throw DomainError("audit_mgf: t grid must lie in (0, 3/8)");
  }
  const SubGamma one_shot{1.0, 8.0 / 3.0};
  AuditReport report;
  report.suite = "mgf";
  report.config = "signs=+- envelope=(1,8/3)";
  for (const SuiteMatrix& entry : suite) {
    const auto dist = exact_distribution(entry.matrix, options);
    for (double t : t_grid) {
      const double bound = mgf_envelope(one_shot, t);
      report.cases.push_back(make_case("mgf", entry.name + " t=+" + format_short(t),
                                       std::log(dist.mgf(t)), bound));
      report.cases.push_back(make_case("mgf", entry.name + " t=-" + format_short(t),
                                       std::log(dist.mgf(-t)), bound));
    }
  }
  return report;
}

AuditReport audit_hypercontractivity(int num_random, std::size_t m, int d_max, std::uint64_t seed,
                                     const OracleOptions& options) {
  if (num_random < 0) throw DomainError("audit_hypercontractivity: num_random must be >= 0");
  if (d_max < 3) throw DomainError("audit_hypercontractivity: d_max must be >= 3");
  AuditReport report;
  report.suite = "hyper";
  report.seed = seed;
  report.config = "m=" + std::to_string(m) + " chaoses=" + std::to_string(num_random) +
                  " d=3.." + std::to_string(d_max);
  for (int i = 0; i < num_random; ++i) {
    const auto chaos = ChaosPolynomial::random(m, seed + static_cast<std::uint64_t>(i));
    const double n2 = chaos.exact_norm(2, options);
    for (int d = 3; d <= d_max; ++d) {
      const double nd = chaos.exact_norm(d, options);
      report.cases.push_back(make_case(
          "hyper",
          "chaos m=" + std::to_string(m) + " seed=" + std::to_string(seed + i) + " d=" +
              std::to_string(d),
          nd, (d - 1) * n2));
    }
  }
  return report;
}

AuditReport audit_coverage(const GeneratorSpec& spec, double eps, double delta, int reps,
                           std::uint64_t seed, PlannerMethod method, unsigned threads) {
  if (reps < 0) throw DomainError("audit_coverage: reps must be >= 0");
  BoundQuery query;
  query.eps = eps;
  query.delta = delta;
  query.rank = spec.dim;  // conservative stand-in when the planner wants a rank
  const std::uint64_t n = sample_size(query, method);

  AuditReport report;
  report.suite = "coverage";
  report.seed = seed;
  report.config = "spec=" + spec.to_string() + " eps=" + format_short(eps) + " delta=" +
                  format_short(delta) + " reps=" + std::to_string(reps) + " n=" +
                  std::to_string(n) + " method=" + std::string(planner_name(method));
  if (reps == 0) return report;

  const auto op = as_operator(generate(spec));
  const double true_trace = *op.trace_hint();
  std::vector<double> errors(static_cast<std::size_t>(reps));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));
  std::vector<std::future<void>> work;
  work.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    work.push_back(std::async(std::launch::async, [&, w] {
      for (int r = static_cast<int>(w); r < reps; r += static_cast<int>(threads)) {
        const auto est =
            estimate_trace(op, n, seed, 1, static_cast<std::uint64_t>(r) * n);
        errors[static_cast<std::size_t>(r)] = relative_error(est.mean, true_trace);
      }
    }));
  }
  for (auto& f : work) f.get();

  int misses = 0;
  for (double err : errors) {
    if (std::abs(err) > eps) ++misses;
  }
  const double miss_rate = static_cast<double>(misses) / static_cast<double>(reps);
  report.cases.push_back(make_case("coverage",
                                   spec.to_string() + " eps=" + format_short(eps) + " n=" +
                                       std::to_string(n) + " reps=" + std::to_string(reps),
                                   miss_rate, delta));
  return report;
}

AuditReport audit_ratio(int d_max) {
  if (d_max < 3) throw DomainError("audit_ratio: d_max must be >= 3");
  const double cap = 8.0 / 3.0;
  AuditReport report;
  report.suite = "ratio";
  double sup = 0.0;
  int sup_at = 2;
  double min_v = std::numeric_limits<double>::infinity();
  int min_at = 2;
  int first_exceed = 0;
  double prev = 0.0;
  for (int d = 2; d <= d_max; ++d) {
    const double r = taylor_ratio(d);
    report.cases.push_back(make_case("ratio", "d=" + std::to_string(d), r, cap));
    if (d > 2) {
      // Non-increasing steps hold the claimed monotone decrease.
      report.cases.push_back(make_case("ratio-monotone",
                                       "step d=" + std::to_string(d - 1) + "->" +
                                           std::to_string(d),
                                       r - prev, 0.0));
    }
    if (r > sup) {
      sup = r;
      sup_at = d;
    }
    if (r < min_v) {
      min_v = r;
      min_at = d;
    }
    if (first_exceed == 0 && r > cap * (1.0 + kViolationTol)) first_exceed = d;
    prev = r;
  }
  report.cases.push_back(make_case("ratio", "sup d=2.." + std::to_string(d_max), sup, cap));
  std::ostringstream config;
  config << "d_max=" << d_max << " first_exceed=" << first_exceed << " min_at=" << min_at
         << " min=" << format_short(min_v) << " sup_at=" << sup_at;
  report.config = config.str();
  return report;
}

}  // namespace tracekit
