#pragma once

#include <cstdint>
#include <string>

#include "tracekit/dense.hpp"

namespace tracekit {

enum class GeneratorKind { identity, diagonal_uniform, wishart, rank_projector };

/// Synthetic PSD matrix recipe. The CLI grammar is kind:m[:k][:seed] with
/// kinds identity, diag-uniform, wishart, rank; k is the Wishart degrees of
/// freedom or the projector rank.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::identity;
  std::size_t dim = 1;
  std::size_t rank = 1;
  std::uint64_t seed = 0;

  static GeneratorSpec parse(const std::string& text);
  std::string to_string() const;
};

/// Materializes a GeneratorSpec. All outputs are PSD up to rounding:
/// identity -> I_m; diag-uniform -> diag of uniform[0,1) draws;
/// wishart -> G G^T / k with G an m-by-k standard normal matrix;
/// rank -> sum of k orthonormal rank-one projectors.
DenseSymmetric generate(const GeneratorSpec& spec);

}  // namespace tracekit
