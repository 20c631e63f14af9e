#pragma once

#include <iosfwd>
#include <string>

#include "tracekit/dense.hpp"

namespace tracekit {

/// Reads a real-valued Matrix Market file (coordinate or array format,
/// general or symmetric qualifier). Symmetric files expand the stored
/// triangle; general files pass through the usual symmetry validation.
/// Throws ParseError for malformed input or missing files,
/// UnsupportedFieldError for complex/pattern data, and AsymmetricError when a
/// general file is not symmetric within tolerance.
DenseSymmetric load_matrix_market(const std::string& path);
DenseSymmetric read_matrix_market(std::istream& in, const std::string& origin = "<stream>");

/// Writes coordinate/symmetric format with 17 significant digits, which
/// round-trips doubles exactly.
void save_matrix_market(const DenseSymmetric& a, const std::string& path);
void write_matrix_market(const DenseSymmetric& a, std::ostream& out);

}  // namespace tracekit
