#include "tracekit/generator.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "tracekit/errors.hpp"
#include "tracekit/sampler.hpp"

namespace tracekit {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used, 0);
    if (used != text.size()) throw InvalidSpecError(std::string("trailing characters in ") + what);
    return v;
  } catch (const InvalidSpecError&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidSpecError(std::string("cannot parse ") + what + " from '" + text + "'");
  }
}

DenseSymmetric diagonal_uniform(std::size_t m, std::uint64_t seed) {
  const auto d = uniform01(m, seed, 0);
  std::vector<double> flat(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) flat[i * m + i] = d[i];
  return DenseSymmetric::from_flat(m, std::move(flat));
}

DenseSymmetric wishart(std::size_t m, std::size_t k, std::uint64_t seed) {
  // Row i of G holds k standard normals; A = G G^T / k.
  const auto g = gaussian(m * k, seed, 0);
  std::vector<double> flat(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < k; ++r) acc += g[i * k + r] * g[j * k + r];
      const double v = acc / static_cast<double>(k);
      flat[i * m + j] = v;
      flat[j * m + i] = v;
    }
  }
  return DenseSymmetric::from_flat(m, std::move(flat));
}

DenseSymmetric rank_projector(std::size_t m, std::size_t k, std::uint64_t seed) {
  // Orthonormalize k gaussian columns (modified Gram-Schmidt with one
  // re-orthogonalization pass), then sum the rank-one projectors.
  std::vector<std::vector<double>> q;
  q.reserve(k);
  std::uint64_t draw = 0;
  while (q.size() < k) {
    auto v = gaussian(m, seed, draw++);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : q) {
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += u[i] * v[i];
        for (std::size_t i = 0; i < m; ++i) v[i] -= proj * u[i];
      }
    }
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm < 1e-8) continue;  // degenerate draw, take the next one
    for (double& x : v) x /= nrm;
    q.push_back(std::move(v));
  }
  std::vector<double> flat(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double acc = 0.0;
      for (const auto& u : q) acc += u[i] * u[j];
      flat[i * m + j] = acc;
      flat[j * m + i] = acc;
    }
  }
  return DenseSymmetric::from_flat(m, std::move(flat));
}

}  // namespace

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() < 2) throw InvalidSpecError("generator spec needs kind:m[:k][:seed]: '" + text + "'");
  GeneratorSpec spec;
  const std::string& kind = parts[0];
  std::size_t expect_min = 2, expect_max = 2;
  if (kind == "identity") {
    spec.kind = GeneratorKind::identity;
  } else if (kind == "diag-uniform") {
    spec.kind = GeneratorKind::diagonal_uniform;
    expect_max = 3;
  } else if (kind == "wishart") {
    spec.kind = GeneratorKind::wishart;
    expect_min = 3;
    expect_max = 4;
  } else if (kind == "rank") {
    spec.kind = GeneratorKind::rank_projector;
    expect_min = 3;
    expect_max = 4;
  } else {
    throw InvalidSpecError("unknown generator kind '" + kind + "'");
  }
  if (parts.size() < expect_min || parts.size() > expect_max) {
    throw InvalidSpecError("wrong number of fields for generator '" + text + "'");
  }
  spec.dim = parse_u64(parts[1], "dim");
  std::size_t next = 2;
  if (spec.kind == GeneratorKind::wishart || spec.kind == GeneratorKind::rank_projector) {
    spec.rank = parse_u64(parts[next++], "rank");
  }
  if (next < parts.size()) spec.seed = parse_u64(parts[next], "seed");
  if (spec.dim == 0) throw InvalidSpecError("generator dim must be >= 1");
  if (spec.rank == 0) throw InvalidSpecError("generator rank must be >= 1");
  if (spec.kind == GeneratorKind::rank_projector && spec.rank > spec.dim) {
    throw InvalidSpecError("rank projector needs k <= m");
  }
  return spec;
}

std::string GeneratorSpec::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case GeneratorKind::identity:
      out << "identity:" << dim;
      break;
    case GeneratorKind::diagonal_uniform:
      out << "diag-uniform:" << dim << ":" << seed;
      break;
    case GeneratorKind::wishart:
      out << "wishart:" << dim << ":" << rank << ":" << seed;
      break;
    case GeneratorKind::rank_projector:
      out << "rank:" << dim << ":" << rank << ":" << seed;
      break;
  }
  return out.str();
}

DenseSymmetric generate(const GeneratorSpec& spec) {
  if (spec.dim == 0) throw InvalidSpecError("generator dim must be >= 1");
  if (spec.rank == 0) throw InvalidSpecError("generator rank must be >= 1");
  switch (spec.kind) {
    case GeneratorKind::identity:
      return DenseSymmetric::identity(spec.dim);
    case GeneratorKind::diagonal_uniform:
      return diagonal_uniform(spec.dim, spec.seed);
    case GeneratorKind::wishart:
      return wishart(spec.dim, spec.rank, spec.seed);
    case GeneratorKind::rank_projector:
      if (spec.rank > spec.dim) throw InvalidSpecError("rank projector needs k <= m");
      return rank_projector(spec.dim, spec.rank, spec.seed);
  }
  throw InvalidSpecError("unreachable generator kind");
}

}  // namespace tracekit
