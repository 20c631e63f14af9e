#include "tracekit/operator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "tracekit/errors.hpp"
#include "tracekit/sampler.hpp"

namespace tracekit {

SymmetricOperator::SymmetricOperator(std::size_t dim, ApplyFn apply,
                                     std::optional<double> trace_hint)
    : dim_(dim), apply_(std::move(apply)), trace_hint_(trace_hint) {
  if (dim_ == 0) throw DomainError("SymmetricOperator: dim must be >= 1");
  if (!apply_) throw DomainError("SymmetricOperator: apply callback is empty");
}

std::vector<double> SymmetricOperator::apply(std::span<const double> v) const {
  if (v.size() != dim_) {
    throw DimensionMismatchError("apply: vector length " + std::to_string(v.size()) +
                                 " does not match dim " + std::to_string(dim_));
  }
  return apply_(v);
}

SymmetricOperator as_operator(DenseSymmetric a) {
  auto shared = std::make_shared<const DenseSymmetric>(std::move(a));
  const std::size_t dim = shared->dim();
  const double trace = shared->trace();
  return SymmetricOperator(
      dim, [shared](std::span<const double> v) { return shared->apply(v); }, trace);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

bool symmetry_probe(const SymmetricOperator& op, std::uint64_t seed, int probes) {
  const std::size_t m = op.dim();
  double opnorm_est = 0.0;
  for (int p = 0; p < probes; ++p) {
    const auto uv = gaussian(2 * m, seed, static_cast<std::uint64_t>(p));
    const std::span<const double> u(uv.data(), m);
    const std::span<const double> v(uv.data() + m, m);
    const auto au = op.apply(u);
    const auto av = op.apply(v);
    const double nu = norm(u), nv = norm(v);
    if (nu > 0.0) opnorm_est = std::max(opnorm_est, norm(au) / nu);
    if (nv > 0.0) opnorm_est = std::max(opnorm_est, norm(av) / nv);
    const double mismatch = std::abs(dot(u, av) - dot(v, au));
    if (mismatch > 1e-9 * nu * nv * std::max(opnorm_est, 1e-300)) return false;
  }
  return true;
}

bool psd_probe(const SymmetricOperator& op, std::uint64_t seed, int probes) {
  const std::size_t m = op.dim();
  // Diagonal magnitude estimate from a spread of coordinate probes.
  const std::size_t diag_probes = std::min<std::size_t>(m, static_cast<std::size_t>(probes));
  double diag_max = 0.0;
  std::vector<double> e(m, 0.0);
  for (std::size_t p = 0; p < diag_probes; ++p) {
    const std::size_t i = p * m / diag_probes;
    e[i] = 1.0;
    diag_max = std::max(diag_max, std::abs(op.apply(e)[i]));
    e[i] = 0.0;
  }
  const double floor = -1e-9 * static_cast<double>(m) * std::max(diag_max, 1e-300);
  for (int p = 0; p < probes; ++p) {
    const auto z = rademacher(m, seed, static_cast<std::uint64_t>(p));
    const auto az = op.apply(z);
    if (dot(z, az) < floor) return false;
  }
  return true;
}

}  // namespace tracekit
