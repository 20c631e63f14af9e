#include <doctest.h>

#include <cmath>
#include <vector>

#include "tracekit/dense.hpp"
#include "tracekit/eigen.hpp"
#include "tracekit/errors.hpp"
#include "tracekit/generator.hpp"
#include "tracekit/operator.hpp"

using namespace tracekit;

TEST_CASE("from_dense accepts symmetric input") {
  const auto id = DenseSymmetric::from_dense({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(id.dim() == 2);
  CHECK(id.at(0, 0) == 1.0);
  const auto w = DenseSymmetric::from_dense({{1.0, 0.5}, {0.5, 1.0}});
  CHECK(w.at(0, 1) == 0.5);
}

TEST_CASE("from_dense rejects bad shapes and asymmetry") {
  CHECK_THROWS_AS(DenseSymmetric::from_dense({{1.0, 2.0}, {0.0, 1.0}}), AsymmetricError);
  CHECK_THROWS_AS(DenseSymmetric::from_dense({{1.0, 2.0}}), NonSquareError);
  CHECK_THROWS_AS(DenseSymmetric::from_dense({}), NonSquareError);
}

TEST_CASE("from_dense symmetrizes within tolerance") {
  const double nudge = 1e-13;
  const auto a = DenseSymmetric::from_dense({{1.0, 0.5 + nudge}, {0.5, 1.0}});
  CHECK(a.at(0, 1) == a.at(1, 0));
  CHECK(a.at(0, 1) == doctest::Approx(0.5 + nudge / 2).epsilon(1e-15));
}

TEST_CASE("apply matches direct multiplication") {
  const auto id = DenseSymmetric::identity(3);
  const std::vector<double> v{4.0, 5.0, 6.0};
  CHECK(id.apply(v) == v);

  const auto diag = DenseSymmetric::from_dense({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
  CHECK(diag.apply(std::vector<double>{1.0, 1.0, 1.0}) == std::vector<double>{1.0, 2.0, 3.0});

  const auto w = DenseSymmetric::from_dense({{1.0, 0.5}, {0.5, 1.0}});
  CHECK(w.apply(std::vector<double>{1.0, 1.0}) == std::vector<double>{1.5, 1.5});

  CHECK_THROWS_AS(w.apply(std::vector<double>{1.0}), DimensionMismatchError);
}

TEST_CASE("apply on basis vectors reproduces columns exactly") {
  const auto a = generate(GeneratorSpec::parse("wishart:7:7:11"));
  for (std::size_t j = 0; j < a.dim(); ++j) {
    std::vector<double> e(a.dim(), 0.0);
    e[j] = 1.0;
    const auto col = a.apply(e);
    for (std::size_t i = 0; i < a.dim(); ++i) CHECK(col[i] == a.at(i, j));
  }
}

TEST_CASE("exact trace is the diagonal sum") {
  CHECK(DenseSymmetric::identity(7).trace() == 7.0);
  CHECK(DenseSymmetric::from_dense({{1.0, 0.5}, {0.5, 1.0}}).trace() == 2.0);

  std::vector<double> flat(7840 * 7840, 0.0);
  for (std::size_t i = 0; i < 7840; ++i) flat[i * 7840 + i] = 0.25;
  CHECK(DenseSymmetric::from_flat(7840, std::move(flat)).trace() == 1960.0);
}

TEST_CASE("generator specs parse and print") {
  const auto spec = GeneratorSpec::parse("wishart:256:256:3");
  CHECK(spec.kind == GeneratorKind::wishart);
  CHECK(spec.dim == 256);
  CHECK(spec.rank == 256);
  CHECK(spec.seed == 3);
  CHECK(spec.to_string() == "wishart:256:256:3");

  CHECK(GeneratorSpec::parse("identity:5").dim == 5);
  CHECK(GeneratorSpec::parse("diag-uniform:100:7").seed == 7);
  CHECK(GeneratorSpec::parse("rank:8:3:11").rank == 3);

  CHECK_THROWS_AS(GeneratorSpec::parse("rank:8:9"), InvalidSpecError);
  CHECK_THROWS_AS(GeneratorSpec::parse("wishart:8:0"), InvalidSpecError);
  CHECK_THROWS_AS(GeneratorSpec::parse("identity:0"), InvalidSpecError);
  CHECK_THROWS_AS(GeneratorSpec::parse("pumpkin:8"), InvalidSpecError);
  CHECK_THROWS_AS(GeneratorSpec::parse("identity"), InvalidSpecError);
}

TEST_CASE("generated matrices have the promised spectra") {
  CHECK(generate(GeneratorSpec::parse("identity:5")).trace() == 5.0);

  const auto proj = generate(GeneratorSpec::parse("rank:8:3:11"));
  CHECK(proj.trace() == doctest::Approx(3.0).epsilon(1e-12));
  const auto eig = eigenvalues(proj);
  for (int i = 0; i < 3; ++i) CHECK(eig.lambda[i] == doctest::Approx(1.0).epsilon(1e-10));
  for (int i = 3; i < 8; ++i) CHECK(std::abs(eig.lambda[i]) < 1e-10);

  const auto wish = generate(GeneratorSpec::parse("wishart:6:6:0"));
  const auto weig = eigenvalues(wish);
  for (double l : weig.lambda) CHECK(l >= -1e-10);
}

TEST_CASE("generated PSD matrices stay PSD across kinds and seeds") {
  for (const char* spec : {"wishart:10:2:4", "wishart:12:30:5", "rank:9:4:2", "diag-uniform:11:3"}) {
    const auto a = generate(GeneratorSpec::parse(spec));
    const auto eig = eigenvalues(a);
    double max_l = 0.0;
    for (double l : eig.lambda) max_l = std::max(max_l, std::abs(l));
    for (double l : eig.lambda) CHECK(l >= -1e-9 * max_l);
  }
}

TEST_CASE("jacobi matches known spectra") {
  const auto id_eig = eigenvalues(DenseSymmetric::identity(3));
  for (double l : id_eig.lambda) CHECK(l == 1.0);

  const auto w_eig = eigenvalues(DenseSymmetric::from_dense({{1.0, 0.5}, {0.5, 1.0}}));
  CHECK(w_eig.lambda[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(w_eig.lambda[1] == doctest::Approx(0.5).epsilon(1e-12));

  // vv^T with v = (1,2,2) has the single eigenvalue |v|^2 = 9.
  const std::vector<double> v{1.0, 2.0, 2.0};
  std::vector<std::vector<double>> outer(3, std::vector<double>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) outer[i][j] = v[i] * v[j];
  const auto r_eig = eigenvalues(DenseSymmetric::from_dense(outer));
  CHECK(r_eig.lambda[0] == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(std::abs(r_eig.lambda[1]) < 1e-9);
  CHECK(std::abs(r_eig.lambda[2]) < 1e-9);
}

TEST_CASE("jacobi satisfies the decomposition invariants") {
  for (const char* spec : {"wishart:10:10:1", "rank:12:5:9", "diag-uniform:8:2"}) {
    const auto a = generate(GeneratorSpec::parse(spec));
    const auto eig = eigenvalues(a);
    CHECK(eig.orthonormality_defect() <= 1e-10);
    CHECK(eig.reconstruction_defect(a) <= 1e-9 * std::max(a.max_abs(), 1.0));
    CHECK(eig.lambda_sum() == doctest::Approx(a.trace()).epsilon(1e-10));
    for (std::size_t i = 0; i + 1 < eig.lambda.size(); ++i) {
      CHECK(eig.lambda[i] >= eig.lambda[i + 1]);
    }
  }
}

TEST_CASE("jacobi honors the dense cap") {
  JacobiOptions opts;
  opts.dense_cap = 4;
  CHECK_THROWS_AS(eigenvalues(DenseSymmetric::identity(5), opts), CapExceededError);
}

TEST_CASE("jacobi reports non-convergence at the sweep limit") {
  JacobiOptions opts;
  opts.max_sweeps = 0;
  const auto w = DenseSymmetric::from_dense({{1.0, 0.5}, {0.5, 1.0}});
  CHECK_THROWS_AS(eigenvalues(w, opts), NoConvergenceError);
  // Already-diagonal input needs no sweeps at all.
  CHECK(eigenvalues(DenseSymmetric::identity(3), opts).lambda_sum() == 3.0);
}

TEST_CASE("numerical rank counts significant eigenvalues") {
  CHECK(numerical_rank(eigenvalues(generate(GeneratorSpec::parse("rank:8:3:11")))) == 3);
  CHECK(numerical_rank(eigenvalues(DenseSymmetric::identity(6))) == 6);
}

TEST_CASE("operators pass the symmetry probe") {
  const auto op = as_operator(generate(GeneratorSpec::parse("wishart:20:20:3")));
  CHECK(symmetry_probe(op, 0));
  CHECK(op.trace_hint().has_value());

  // A deliberately asymmetric apply is caught.
  const SymmetricOperator crooked(2, [](std::span<const double> v) {
    return std::vector<double>{v[0] + 2.0 * v[1], v[0]};
  });
  CHECK_FALSE(symmetry_probe(crooked, 0));
  CHECK_FALSE(crooked.trace_hint().has_value());
}

TEST_CASE("psd probe flags indefinite operators") {
  CHECK(psd_probe(as_operator(generate(GeneratorSpec::parse("wishart:16:16:1"))), 5));
  const auto indefinite = as_operator(DenseSymmetric::from_dense({{1.0, 0.0}, {0.0, -5.0}}));
  CHECK_FALSE(psd_probe(indefinite, 5));
}

TEST_CASE("dense psd validation") {
  CHECK(is_psd(generate(GeneratorSpec::parse("wishart:8:2:3"))));
  CHECK(is_psd(DenseSymmetric::identity(4)));
  CHECK_FALSE(is_psd(DenseSymmetric::from_dense({{1.0, 0.0}, {0.0, -5.0}})));
  JacobiOptions tiny;
  tiny.dense_cap = 2;
  CHECK_THROWS_AS(is_psd(DenseSymmetric::identity(3), tiny), CapExceededError);
}
