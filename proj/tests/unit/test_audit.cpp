#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "tracekit/audit.hpp"
#include "tracekit/errors.hpp"

using namespace tracekit;

namespace {

std::vector<SuiteMatrix> identity_suite() {
  std::vector<SuiteMatrix> suite;
  suite.push_back({"identity:4", DenseSymmetric::identity(4)});
  return suite;
}

std::vector<SuiteMatrix> witness_suite() {
  std::vector<SuiteMatrix> suite;
  suite.push_back({"witness-2x2", witness_matrix()});
  return suite;
}

}  // namespace

TEST_CASE("case bookkeeping") {
  const auto ok = make_case("s", "x", 1.0, 2.0);
  CHECK(ok.holds);
  CHECK(ok.margin == 1.0);
  const auto tight = make_case("s", "x", 2.0, 2.0);
  CHECK(tight.holds);
  const auto bad = make_case("s", "x", 2.1, 2.0);
  CHECK_FALSE(bad.holds);

  AuditReport report;
  report.cases = {ok, tight, bad};
  CHECK(report.passed() == 2);
  CHECK(report.failed() == 1);
  REQUIRE(report.first_violation() != nullptr);
  CHECK(report.first_violation()->quantity == 2.1);
}

TEST_CASE("standard suite composition") {
  const auto suite = standard_suite();
  REQUIRE(suite.size() == 22);
  CHECK(suite[0].name == "wishart:10:2:0");
  CHECK(suite[1].name == "wishart:10:10:1");
  CHECK(suite[2].name == "wishart:10:50:2");
  CHECK(suite[20].name == "identity:10");
  CHECK(suite[21].name == "diag-uniform:10:0");
  for (const auto& entry : suite) CHECK(entry.matrix.dim() == 10);
}

TEST_CASE("moment audit on known inputs") {
  const auto id_report = audit_moments(identity_suite(), 4);
  CHECK(id_report.cases.size() == 3);
  CHECK(id_report.failed() == 0);
  for (const auto& c : id_report.cases) CHECK(c.quantity == 0.0);

  const auto w_report = audit_moments(witness_suite(), 3);
  REQUIRE(w_report.cases.size() == 2);
  CHECK(w_report.cases[1].input == "witness-2x2 d=3");
  CHECK(w_report.cases[1].quantity == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w_report.cases[1].bound == 2.0);
  CHECK(w_report.failed() == 0);

  const auto empty = audit_moments({}, 8);
  CHECK(empty.cases.empty());
  CHECK(empty.passed() == 0);
  CHECK(empty.failed() == 0);
}

TEST_CASE("moment audit flags true violations instead of suppressing them") {
  // Uniform rank-one projector: ||err||_2 = sqrt(1.8) > 1, an exact
  // counterexample to the d-1 bound at d=2.
  const std::size_t m = 10;
  std::vector<SuiteMatrix> suite;
  suite.push_back({"uniform-rank1:10",
                   DenseSymmetric::from_flat(m, std::vector<double>(m * m, 0.1))});
  const auto report = audit_moments(suite, 4);
  CHECK(report.failed() == 1);
  REQUIRE(report.first_violation() != nullptr);
  CHECK(report.first_violation()->input == "uniform-rank1:10 d=2");
  CHECK(report.first_violation()->quantity == doctest::Approx(1.3416407864998738).epsilon(1e-13));

  // The same matrix also pierces the sub-gamma MGF envelope at small t;
  // binomial closed form gives 0.0023765634789189 against 0.0014423076923077.
  const std::vector<double> grid{0.05};
  const auto mgf_report = audit_mgf(suite, grid);
  REQUIRE(mgf_report.cases.size() == 2);
  CHECK(mgf_report.cases[0].quantity == doctest::Approx(0.002376563478918938).epsilon(1e-12));
  CHECK(mgf_report.cases[1].quantity == doctest::Approx(0.002135982371324961).epsilon(1e-12));
  CHECK(mgf_report.cases[0].bound == doctest::Approx(0.001442307692307692).epsilon(1e-12));
  CHECK(mgf_report.failed() == 2);  // both signed directions pierce it
}

TEST_CASE("moment audit regression on the standard suite") {
  // Two of the degrees-of-freedom-2 Wishart draws exceed the d-1 bound at
  // d=2; the audit reports them rather than papering over them.
  const auto report = audit_moments(standard_suite(), 8);
  CHECK(report.cases.size() == 154);
  CHECK(report.failed() == 2);
  for (const auto& c : report.cases) {
    if (!c.holds) {
      CHECK(c.input.find("wishart:10:2:") != std::string::npos);
      CHECK(c.input.find("d=2") != std::string::npos);
      CHECK(c.quantity < std::sqrt(2.0));
    }
  }
}

TEST_CASE("tail audit flags the two-sided witness violation only") {
  const std::vector<double> eps{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35};
  const std::vector<TailSide> sides{TailSide::upper, TailSide::lower};
  const auto report = audit_tails(standard_suite(), eps, sides, true);

  std::size_t two_sided_violations = 0;
  for (const auto& c : report.cases) {
    if (c.input.find("side=two_sided") != std::string::npos && !c.holds) {
      ++two_sided_violations;
      CHECK(c.input.find("witness-2x2") != std::string::npos);
      CHECK(c.quantity == 1.0);
      CHECK(c.bound == doctest::Approx(0.7985162187593770).epsilon(1e-12));
    }
  }
  CHECK(two_sided_violations == 1);

  // The one-sided witness companions pass.
  for (const auto& c : report.cases) {
    if (c.input.find("witness-2x2") != std::string::npos &&
        c.input.find("side=upper") != std::string::npos) {
      CHECK(c.quantity == 0.5);
      CHECK(c.holds);
    }
  }
}

TEST_CASE("tail audit passes trivially on the identity") {
  const std::vector<double> eps{0.05, 0.35};
  const std::vector<TailSide> sides{TailSide::two_sided, TailSide::upper, TailSide::lower};
  const auto report = audit_tails(identity_suite(), eps, sides, false);
  CHECK(report.cases.size() == 12);  // 2 eps x 3 sides x 2 bound forms
  CHECK(report.failed() == 0);
  for (const auto& c : report.cases) CHECK(c.quantity == 0.0);
}

TEST_CASE("tail audit rejects out-of-domain grids") {
  const std::vector<double> eps{0.5};
  const std::vector<TailSide> sides{TailSide::upper};
  CHECK_THROWS_AS(audit_tails(identity_suite(), eps, sides, false), DomainError);
}

TEST_CASE("mgf audit on known inputs") {
  const std::vector<double> grid{0.2};
  const auto id_report = audit_mgf(identity_suite(), grid);
  CHECK(id_report.cases.size() == 2);
  CHECK(id_report.failed() == 0);
  for (const auto& c : id_report.cases) CHECK(std::abs(c.quantity) <= 1e-14);

  const auto w_report = audit_mgf(witness_suite(), grid);
  REQUIRE(w_report.cases.size() == 2);
  for (const auto& c : w_report.cases) {
    CHECK(c.quantity == doctest::Approx(std::log(std::cosh(0.1))).epsilon(1e-12));
    CHECK(c.bound == doctest::Approx(0.04285714285714286).epsilon(1e-12));
    CHECK(c.holds);
  }

  const std::vector<double> bad{0.0};
  CHECK_THROWS_AS(audit_mgf(identity_suite(), bad), DomainError);
}

TEST_CASE("hypercontractivity audit") {
  const auto empty = audit_hypercontractivity(0, 8, 4, 0);
  CHECK(empty.cases.empty());

  const auto report = audit_hypercontractivity(10, 8, 4, 0);
  CHECK(report.cases.size() == 20);  // d in {3,4} per chaos
  CHECK(report.failed() == 0);
}

TEST_CASE("coverage audit is exact on diagonal matrices") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::diagonal_uniform;
  spec.dim = 16;
  spec.seed = 4;
  const auto report = audit_coverage(spec, 0.1, 0.05, 50, 9);
  REQUIRE(report.cases.size() == 1);
  CHECK(report.cases[0].quantity == 0.0);
  CHECK(report.cases[0].holds);
  CHECK(report.config.find("n=440") != std::string::npos);

  const auto empty = audit_coverage(spec, 0.1, 0.05, 0, 9);
  CHECK(empty.cases.empty());
}

TEST_CASE("ratio audit reports the crossover and the monotonicity break") {
  CHECK_THROWS_AS(audit_ratio(2), DomainError);

  const auto small = audit_ratio(10);
  for (const auto& c : small.cases) {
    if (c.suite == "ratio") CHECK(c.holds);  // all ratios <= 8/3 up to d=10
  }
  CHECK(small.config.find("first_exceed=0") != std::string::npos);
  CHECK(small.config.find("min_at=4") != std::string::npos);

  const auto big = audit_ratio(100);
  CHECK(big.config.find("first_exceed=25") != std::string::npos);
  int first_ratio_violation = 0;
  for (const auto& c : big.cases) {
    if (c.suite == "ratio" && !c.holds && c.input.rfind("d=", 0) == 0) {
      first_ratio_violation = std::stoi(c.input.substr(2));
      break;
    }
  }
  CHECK(first_ratio_violation == 25);
}

TEST_CASE("reports are deterministic and serialize faithfully") {
  const std::vector<double> grid{0.1, 0.2};
  const auto a = audit_mgf(witness_suite(), grid);
  const auto b = audit_mgf(witness_suite(), grid);
  CHECK(to_json(a).dump() == to_json(b).dump());

  const auto j = to_json(a);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("suite") == "mgf");
  CHECK(j.at("counts").at("passed").get<std::size_t>() == a.passed());
  CHECK(j.at("cases").size() == a.cases.size());
  CHECK(j.at("cases")[0].contains("margin"));

  std::ostringstream csv;
  write_csv(a, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("suite,input,quantity,bound,holds,margin\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + static_cast<long>(a.cases.size()));
}
