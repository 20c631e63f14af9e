#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracekit/audit.hpp"
#include "tracekit/bounds.hpp"
#include "tracekit/eigen.hpp"
#include "tracekit/errors.hpp"
#include "tracekit/estimator.hpp"
#include "tracekit/generator.hpp"
#include "tracekit/matrix_market.hpp"
#include "tracekit/oracle.hpp"
#include "tracekit/sampler.hpp"
#include "tracekit/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitIo = 3;
constexpr int kExitStrict = 4;

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(text, &used, 0);  // decimal or 0x-hex
    if (used != text.size()) throw tracekit::DomainError("trailing characters in seed '" + text + "'");
    return v;
  } catch (const tracekit::DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw tracekit::DomainError("cannot parse seed '" + text + "'");
  }
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct EpsRange {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;

  static EpsRange parse(const std::string& text) {
    EpsRange r;
    std::istringstream in(text);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 3) {
      throw tracekit::DomainError("eps range must be start:stop:count, got '" + text + "'");
    }
    try {
      r.start = std::stod(parts[0]);
      r.stop = std::stod(parts[1]);
      r.count = std::stoi(parts[2]);
    } catch (const std::exception&) {
      throw tracekit::DomainError("cannot parse eps range '" + text + "'");
    }
    if (r.count < 1) throw tracekit::DomainError("eps range count must be >= 1");
    if (r.stop < r.start) throw tracekit::DomainError("eps range stop must be >= start");
    return r;
  }

  std::vector<double> grid() const {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      values.push_back(count == 1 ? start
                                  : start + (stop - start) * static_cast<double>(i) /
                                                static_cast<double>(count - 1));
    }
    return values;
  }
};

struct PlanArgs {
  double eps = 0.0;
  double delta = 0.0;
  std::string method = "this-work";
  std::uint64_t rank = 0;
  std::string format = "text";
};

int run_plan(const PlanArgs& args) {
  const auto method = tracekit::planner_from_name(args.method);
  const bool needs_rank = method == tracekit::PlannerMethod::avron_table ||
                          method == tracekit::PlannerMethod::avron_fig;
  if (needs_rank && args.rank == 0) {
    throw tracekit::DomainError("method '" + args.method + "' needs --rank >= 1");
  }
  tracekit::BoundQuery query;
  query.eps = args.eps;
  query.delta = args.delta;
  query.rank = args.rank;
  const std::uint64_t n = tracekit::sample_size(query, method);
  if (args.format == "json") {
    json out{{"schema_version", tracekit::kSchemaVersion},
             {"method", args.method},
             {"eps", args.eps},
             {"delta", args.delta},
             {"n", n}};
    if (needs_rank) out["rank"] = args.rank;
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "method: " << args.method << "\n";
    std::cout << "eps: " << format_short(args.eps) << "\n";
    std::cout << "delta: " << format_short(args.delta) << "\n";
    if (needs_rank) std::cout << "rank: " << args.rank << "\n";
    std::cout << "n: " << n << "\n";
  }
  return kExitOk;
}

struct CompareArgs {
  std::string eps_range;
  double delta = 0.0;
  std::uint64_t rank = 0;
  std::string out_path;
};

int run_compare(const CompareArgs& args) {
  const auto grid = EpsRange::parse(args.eps_range).grid();
  std::ostringstream csv;
  csv << "eps,this_work,roosta,avron_fig,avron_table\n";
  for (double eps : grid) {
    tracekit::BoundQuery q;
    q.eps = eps;
    q.delta = args.delta;
    q.rank = args.rank;
    csv << format_short(eps) << ","
        << tracekit::sample_size(q, tracekit::PlannerMethod::this_work) << ","
        << tracekit::sample_size(q, tracekit::PlannerMethod::roosta) << ","
        << tracekit::sample_size(q, tracekit::PlannerMethod::avron_fig) << ","
        << tracekit::sample_size(q, tracekit::PlannerMethod::avron_table) << "\n";
  }
  if (args.out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(args.out_path);
    if (!out) throw tracekit::ParseError(args.out_path + ": cannot open for writing");
    out << csv.str();
    if (!out.flush()) throw tracekit::ParseError(args.out_path + ": write failed");
  }
  return kExitOk;
}

struct EstimateArgs {
  std::string gen_spec;
  std::string matrix_path;
  std::uint64_t n = 0;
  double eps = 0.0;
  double delta = 0.0;
  std::string seed_text = "0";
  unsigned threads = 0;
  std::string format = "text";
};

int run_estimate(const EstimateArgs& args) {
  if (args.gen_spec.empty() == args.matrix_path.empty()) {
    throw tracekit::DomainError("estimate needs exactly one of --gen or --matrix-market");
  }
  if ((args.n > 0) == (args.eps > 0.0 || args.delta > 0.0)) {
    throw tracekit::DomainError("estimate needs either --n or the pair --eps/--delta");
  }
  const std::uint64_t seed = parse_seed(args.seed_text);

  std::string matrix_name;
  std::optional<tracekit::DenseSymmetric> dense;
  if (!args.gen_spec.empty()) {
    const auto spec = tracekit::GeneratorSpec::parse(args.gen_spec);
    dense = tracekit::generate(spec);
    matrix_name = spec.to_string();
  } else {
    dense = tracekit::load_matrix_market(args.matrix_path);
    matrix_name = args.matrix_path;
  }

  std::uint64_t n = args.n;
  if (n == 0) {
    if (!(args.eps > 0.0) || !(args.delta > 0.0)) {
      throw tracekit::DomainError("estimate needs both --eps and --delta to plan n");
    }
    tracekit::BoundQuery q;
    q.eps = args.eps;
    q.delta = args.delta;
    n = tracekit::sample_size(q, tracekit::PlannerMethod::this_work);
  }

  const auto op = tracekit::as_operator(std::move(*dense));
  if (!tracekit::psd_probe(op, seed, 8)) {
    std::cerr << "warning: " << matrix_name << " looks indefinite; tail guarantees assume PSD\n";
  }
  const auto est = tracekit::estimate_trace(op, n, seed, args.threads);

  std::optional<tracekit::ErrorMeasurement> err;
  if (op.trace_hint() && *op.trace_hint() > 0.0) {
    err = tracekit::measure_error(est.mean, *op.trace_hint());
  }

  if (args.format == "json") {
    json out = tracekit::to_json(est);
    out["schema_version"] = tracekit::kSchemaVersion;
    out["matrix"] = matrix_name;
    out["rng"] = tracekit::kRngId;
    if (err) {
      out["true_trace"] = err->true_trace;
      out["relative_error"] = err->relative_error;
    }
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "matrix: " << matrix_name << " (dim " << op.dim() << ")\n";
    std::cout << "n: " << est.n << "  seed: " << est.seed << "  rng: " << tracekit::kRngId
              << "\n";
    std::cout << "estimate: " << format_g(est.mean) << "\n";
    std::cout << "sample_variance: " << format_g(est.sample_variance) << "\n";
    std::cout << "min_q: " << format_g(est.min_q) << "  max_q: " << format_g(est.max_q) << "\n";
    if (err) {
      std::cout << "true_trace: " << format_g(err->true_trace)
                << "  relative_error: " << format_g(err->relative_error) << "\n";
    }
  }
  return kExitOk;
}

struct GenArgs {
  std::string spec_text;
  std::string out_path;
};

int run_gen(const GenArgs& args) {
  const auto spec = tracekit::GeneratorSpec::parse(args.spec_text);
  const auto matrix = tracekit::generate(spec);
  tracekit::save_matrix_market(matrix, args.out_path);
  std::cout << "wrote: " << args.out_path << "\n";
  std::cout << "dim: " << matrix.dim() << "\n";
  std::cout << "trace: " << format_g(matrix.trace()) << "\n";
  const tracekit::JacobiOptions jacobi;
  if (matrix.dim() <= jacobi.dense_cap) {
    std::cout << "rank: " << tracekit::numerical_rank(tracekit::eigenvalues(matrix, jacobi))
              << "\n";
  }
  return kExitOk;
}

struct AuditArgs {
  std::string suite;
  int dmax = 0;     // 0 = per-suite default
  int reps = -1;    // -1 = per-suite default
  bool witness = false;
  std::string suite_seed_text = "0";
  std::string seed_text = "0";
  double eps = 0.1;
  double delta = 0.05;
  std::string gen_spec = "wishart:256:256:0";
  std::string method = "this-work";
  unsigned threads = 0;
  std::string out_prefix = "audit";
  bool strict = false;
};

void write_report_files(const tracekit::AuditReport& report, const std::string& prefix) {
  const std::string json_path = prefix + "-" + report.suite + ".json";
  const std::string csv_path = prefix + "-" + report.suite + ".csv";
  std::ofstream json_out(json_path);
  if (!json_out) throw tracekit::ParseError(json_path + ": cannot open for writing");
  json_out << tracekit::to_json(report).dump(2) << "\n";
  if (!json_out.flush()) throw tracekit::ParseError(json_path + ": write failed");
  std::ofstream csv_out(csv_path);
  if (!csv_out) throw tracekit::ParseError(csv_path + ": cannot open for writing");
  tracekit::write_csv(report, csv_out);
  if (!csv_out.flush()) throw tracekit::ParseError(csv_path + ": write failed");
  std::cout << report.suite << ": " << report.cases.size() << " cases, " << report.passed()
            << " passed, " << report.failed() << " failed  [" << json_path << ", " << csv_path
            << "]\n";
  if (const auto* v = report.first_violation()) {
    std::cout << "  first violation: " << v->input << " quantity=" << format_g(v->quantity)
              << " bound=" << format_g(v->bound) << "\n";
  }
}

int run_audit(const AuditArgs& args) {
  const std::uint64_t suite_seed = parse_seed(args.suite_seed_text);
  const std::uint64_t seed = parse_seed(args.seed_text);
  const std::vector<double> grid = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35};
  const std::vector<tracekit::TailSide> sides = {tracekit::TailSide::upper,
                                                 tracekit::TailSide::lower};
  const auto method = tracekit::planner_from_name(args.method);
  tracekit::OracleOptions oracle;
  oracle.threads = args.threads;

  std::vector<tracekit::AuditReport> reports;
  auto want = [&](const char* name) { return args.suite == name || args.suite == "all"; };

  if (want("moments") || want("tails") || want("mgf")) {
    const auto suite = tracekit::standard_suite(suite_seed);
    if (want("moments")) {
      reports.push_back(tracekit::audit_moments(suite, args.dmax > 0 ? args.dmax : 8, oracle));
    }
    if (want("tails")) {
      const bool witness = args.witness || args.suite == "all";
      reports.push_back(tracekit::audit_tails(suite, grid, sides, witness, oracle));
    }
    if (want("mgf")) {
      reports.push_back(tracekit::audit_mgf(suite, grid, oracle));
    }
  }
  if (want("hyper")) {
    reports.push_back(tracekit::audit_hypercontractivity(args.reps >= 0 ? args.reps : 100, 8,
                                                         args.dmax > 0 ? args.dmax : 6, seed,
                                                         oracle));
  }
  if (want("coverage")) {
    const auto spec = tracekit::GeneratorSpec::parse(args.gen_spec);
    reports.push_back(tracekit::audit_coverage(spec, args.eps, args.delta,
                                               args.reps >= 0 ? args.reps : 2000, seed, method,
                                               args.threads));
  }
  if (want("ratio")) {
    reports.push_back(tracekit::audit_ratio(args.dmax > 0 ? args.dmax : 100));
  }
  if (reports.empty()) {
    throw tracekit::DomainError("unknown audit suite '" + args.suite + "'");
  }

  bool any_failed = false;
  for (const auto& report : reports) {
    write_report_files(report, args.out_prefix);
    any_failed = any_failed || report.failed() > 0;
  }
  return (args.strict && any_failed) ? kExitStrict : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-free stochastic trace estimation toolkit"};
  app.require_subcommand(1);

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Sample size certified for a target accuracy");
  plan_cmd->add_option("--eps", plan.eps, "Relative error target")->required();
  plan_cmd->add_option("--delta", plan.delta, "Failure probability")->required();
  plan_cmd->add_option("--method", plan.method, "this-work|roosta|avron-table|avron-fig");
  plan_cmd->add_option("--rank", plan.rank, "Matrix rank (avron methods)");
  plan_cmd->add_option("--format", plan.format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "Planner comparison CSV over an eps grid");
  compare_cmd->add_option("--eps", compare.eps_range, "Grid start:stop:count")->required();
  compare_cmd->add_option("--delta", compare.delta, "Failure probability")->required();
  compare_cmd->add_option("--rank", compare.rank, "Matrix rank for the avron columns")
      ->required();
  compare_cmd->add_option("--out", compare.out_path, "Output file (default stdout)");

  EstimateArgs estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "Run the randomized trace estimator");
  estimate_cmd->add_option("--gen", estimate.gen_spec, "Generator spec kind:m[:k][:seed]");
  estimate_cmd->add_option("--matrix-market", estimate.matrix_path, "Matrix Market file");
  estimate_cmd->add_option("--n", estimate.n, "Sample count");
  estimate_cmd->add_option("--eps", estimate.eps, "Relative error target (plans n)");
  estimate_cmd->add_option("--delta", estimate.delta, "Failure probability (plans n)");
  estimate_cmd->add_option("--seed", estimate.seed_text, "Stream seed, decimal or 0x-hex");
  estimate_cmd->add_option("--threads", estimate.threads, "Worker cap (0 = hardware)");
  estimate_cmd->add_option("--format", estimate.format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic matrix as Matrix Market");
  gen_cmd->add_option("spec", gen.spec_text, "Generator spec kind:m[:k][:seed]")->required();
  gen_cmd->add_option("--out", gen.out_path, "Output path")->required();

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Check the closed-form bounds against the oracle");
  audit_cmd->add_option("suite", audit.suite, "moments|tails|mgf|hyper|coverage|ratio|all")
      ->required()
      ->check(CLI::IsMember({"moments", "tails", "mgf", "hyper", "coverage", "ratio", "all"}));
  audit_cmd->add_option("--dmax", audit.dmax, "Largest moment order / ratio index");
  audit_cmd->add_option("--reps", audit.reps, "Repetitions (coverage) or chaoses (hyper)");
  audit_cmd->add_flag("--witness", audit.witness, "Add the 2x2 witness tail cases");
  audit_cmd->add_option("--suite-seed", audit.suite_seed_text, "Base seed of the matrix suite");
  audit_cmd->add_option("--seed", audit.seed_text, "Seed for randomized audits");
  audit_cmd->add_option("--eps", audit.eps, "Coverage accuracy target");
  audit_cmd->add_option("--delta", audit.delta, "Coverage failure probability");
  audit_cmd->add_option("--gen", audit.gen_spec, "Coverage matrix spec");
  audit_cmd->add_option("--method", audit.method, "Coverage planner method");
  audit_cmd->add_option("--threads", audit.threads, "Worker cap (0 = hardware)");
  audit_cmd->add_option("--out", audit.out_prefix, "Report file prefix");
  audit_cmd->add_flag("--strict", audit.strict, "Exit 4 when any case is violated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitDomain;
  }

  try {
    if (plan_cmd->parsed()) return run_plan(plan);
    if (compare_cmd->parsed()) return run_compare(compare);
    if (estimate_cmd->parsed()) return run_estimate(estimate);
    if (gen_cmd->parsed()) return run_gen(gen);
    if (audit_cmd->parsed()) return run_audit(audit);
  } catch (const tracekit::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const tracekit::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
