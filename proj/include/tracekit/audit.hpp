#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracekit/bounds.hpp"
#include "tracekit/dense.hpp"
#include "tracekit/generator.hpp"
#include "tracekit/oracle.hpp"

namespace tracekit {

/// One measured-quantity-versus-claimed-bound comparison. `input` carries the
/// matrix or chaos descriptor plus every parameter needed to reproduce the
/// case with a single oracle call.
struct AuditCase {
  std::string suite;
  std::string input;
  double quantity = 0.0;
  double bound = 0.0;
  bool holds = false;  // quantity <= bound + 1e-12 * max(1, |bound|)
  double margin = 0.0;  // bound - quantity
};

AuditCase make_case(std::string suite, std::string input, double quantity, double bound);

struct AuditReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::string config;
  std::vector<AuditCase> cases;

  std::size_t passed() const;
  std::size_t failed() const;
  const AuditCase* first_violation() const;
};

nlohmann::json to_json(const AuditReport& report);

/// One case per row: suite, input, quantity, bound, holds, margin.
void write_csv(const AuditReport& report, std::ostream& out);

/// Named matrix for audit suites.
struct SuiteMatrix {
  std::string name;
  DenseSymmetric matrix;
};

/// Default desk-scale suite: `count` Wishart matrices (m=10, degrees cycling
/// through {2, 10, 50}, seeds base_seed..base_seed+count-1) plus the identity
/// and a random diagonal.
std::vector<SuiteMatrix> standard_suite(std::uint64_t base_seed = 0, std::size_t count = 20);

/// The 2x2 matrix [[1, 1/2], [1/2, 1]] whose error is +-1/2 with equal
/// probability; the standing counterexample for two-sided tail claims.
DenseSymmetric witness_matrix();

/// Exact d-th error norms against the d-1 moment bound, d = 2..d_max.
AuditReport audit_moments(std::span<const SuiteMatrix> suite, int d_max,
                          const OracleOptions& options = {});

/// Exact tails against both closed tail forms ("theorem":
/// exp(-eps^2/(2(1-(8/3)eps))) and "lemma": the sub-gamma tail at (1, 8/3)),
/// per side. include_witness adds the 2x2 witness at eps = 0.3, the one case
/// expected to violate the two-sided reading.
AuditReport audit_tails(std::span<const SuiteMatrix> suite, std::span<const double> eps_grid,
                        std::span<const TailSide> sides, bool include_witness = false,
                        const OracleOptions& options = {});

/// log of the exact MGF of the signed error at +-t against the sub-gamma
/// envelope at (1, 8/3).
AuditReport audit_mgf(std::span<const SuiteMatrix> suite, std::span<const double> t_grid,
                      const OracleOptions& options = {});

/// Exhaustive chaos norms |F|_d vs (d-1)|F|_2 for random off-diagonal
/// chaoses, d = 3..d_max.
AuditReport audit_hypercontractivity(int num_random, std::size_t m, int d_max, std::uint64_t seed,
                                     const OracleOptions& options = {});

/// Plans n for (eps, delta), runs `reps` independent estimates, and compares
/// the empirical miss rate against delta. Rep r draws samples at stream
/// indexes [r*n, (r+1)*n) of the one seed.
AuditReport audit_coverage(const GeneratorSpec& spec, double eps, double delta, int reps,
                           std::uint64_t seed, PlannerMethod method = PlannerMethod::this_work,
                           unsigned threads = 0);

/// Scans the Taylor coefficient ratio for d = 2..d_max against the 8/3 cap,
/// flags monotonicity breaks, and reports the observed supremum. The config
/// string records the first index exceeding 8/3 and the location of the
/// minimum.
AuditReport audit_ratio(int d_max);

}  // namespace tracekit
