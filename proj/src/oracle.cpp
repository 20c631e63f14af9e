#include "tracekit/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>
#include <thread>

#include "tracekit/errors.hpp"
#include "tracekit/sampler.hpp"

namespace tracekit {

namespace {

// Subcube walks are capped at 2^12 steps, bounding the incremental-update
// drift of any single value well below the 1e-12 oracle tolerances.
constexpr int kMaxWalkBits = 12;

int walk_bits_for(std::size_t m) {
  const int free_bits = static_cast<int>(m) - 1;
  return std::min(free_bits, kMaxWalkBits);
}

// Accurate summation with a fixed tree, independent of thread count.
double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <typename Fn>
double pairwise_mean(std::span<const double> xs, Fn&& fn) {
  std::vector<double> mapped(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) mapped[i] = fn(xs[i]);
  return pairwise_sum(mapped) / static_cast<double>(mapped.size());
}

// One Gray-code walk over the low `walk_bits` coordinates, prefix bits fixed.
void walk_subcube(const DenseSymmetric& a, std::uint64_t prefix, int walk_bits,
                  std::span<double> out) {
  const std::size_t m = a.dim();
  std::vector<double> z(m, 1.0);
  for (int i = 0; walk_bits + i < static_cast<int>(m) - 1; ++i) {
    if ((prefix >> i) & 1u) z[walk_bits + i] = -1.0;
  }
  std::vector<double> w = a.apply(z);
  double q = 0.0;
  for (std::size_t j = 0; j < m; ++j) q += z[j] * w[j];
  out[0] = q;

  const std::uint64_t steps = std::uint64_t{1} << walk_bits;
  for (std::uint64_t t = 1; t < steps; ++t) {
    const int k = std::countr_zero(t);  // bit flipped between g(t-1) and g(t)
    q += -4.0 * z[k] * w[k] + 4.0 * a.at(k, k);
    const double step = -2.0 * z[k];
    const std::size_t row = static_cast<std::size_t>(k);
    for (std::size_t j = 0; j < m; ++j) w[j] += step * a.at(row, j);  // column k by symmetry
    z[k] = -z[k];
    out[t] = q;
  }
}

}  // namespace

std::vector<double> enumerate_quadratic_forms(const DenseSymmetric& a,
                                              const OracleOptions& options) {
  const std::size_t m = a.dim();
  if (m > options.cap) {
    throw CapExceededError("enumerate_quadratic_forms: dim " + std::to_string(m) +
                           " exceeds cap " + std::to_string(options.cap));
  }
  const int walk_bits = walk_bits_for(m);
  const std::uint64_t steps = std::uint64_t{1} << walk_bits;
  const std::uint64_t subcubes = std::uint64_t{1} << (m - 1 - walk_bits);
  std::vector<double> values(std::uint64_t{1} << (m - 1));

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, subcubes));
  if (threads <= 1) {
    for (std::uint64_t p = 0; p < subcubes; ++p) {
      walk_subcube(a, p, walk_bits, std::span<double>(values).subspan(p * steps, steps));
    }
    return values;
  }
  std::vector<std::future<void>> work;
  work.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    work.push_back(std::async(std::launch::async, [&, w] {
      for (std::uint64_t p = w; p < subcubes; p += threads) {
        walk_subcube(a, p, walk_bits, std::span<double>(values).subspan(p * steps, steps));
      }
    }));
  }
  for (auto& f : work) f.get();
  return values;
}

std::vector<double> representative_sign_vector(std::size_t m, std::uint64_t ordinal) {
  if (m == 0) throw DomainError("representative_sign_vector: m must be >= 1");
  if (ordinal >= (std::uint64_t{1} << (m - 1))) {
    throw DomainError("representative_sign_vector: ordinal out of range");
  }
  const int walk_bits = walk_bits_for(m);
  const std::uint64_t t = ordinal & ((std::uint64_t{1} << walk_bits) - 1);
  const std::uint64_t prefix = ordinal >> walk_bits;
  const std::uint64_t gray = t ^ (t >> 1);
  std::vector<double> z(m, 1.0);
  for (int j = 0; j < walk_bits; ++j) {
    if ((gray >> j) & 1u) z[j] = -1.0;
  }
  for (int i = 0; walk_bits + i < static_cast<int>(m) - 1; ++i) {
    if ((prefix >> i) & 1u) z[walk_bits + i] = -1.0;
  }
  return z;
}

ExactErrorDistribution ExactErrorDistribution::build(const DenseSymmetric& a,
                                                     const OracleOptions& options) {
  const double trace = a.trace();
  if (!(trace > 0.0)) {
    throw NonPositiveTraceError("exact_distribution: trace must be positive, got " +
                                std::to_string(trace));
  }
  return ExactErrorDistribution(a.dim(), trace, enumerate_quadratic_forms(a, options));
}

double ExactErrorDistribution::mean() const {
  return pairwise_sum(values_) / static_cast<double>(values_.size());
}

double ExactErrorDistribution::abs_moment(int d) const {
  if (d < 1) throw DomainError("abs_moment: d must be >= 1");
  const double inv_trace = 1.0 / trace_;
  return pairwise_mean(values_, [&](double v) {
    return std::pow(std::abs(v * inv_trace - 1.0), static_cast<double>(d));
  });
}

double ExactErrorDistribution::tail(double eps, TailSide side) const {
  if (eps < 0.0) throw DomainError("tail: eps must be >= 0");
  const double inv_trace = 1.0 / trace_;
  std::uint64_t hits = 0;
  for (double v : values_) {
    const double err = v * inv_trace - 1.0;
    switch (side) {
      case TailSide::two_sided:
        hits += std::abs(err) >= eps ? 1 : 0;
        break;
      case TailSide::upper:
        hits += err >= eps ? 1 : 0;
        break;
      case TailSide::lower:
        hits += err <= -eps ? 1 : 0;
        break;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(values_.size());
}

double ExactErrorDistribution::mgf(double t) const {
  const double inv_trace = 1.0 / trace_;
  double shift = -std::numeric_limits<double>::infinity();
  for (double v : values_) shift = std::max(shift, t * (v * inv_trace - 1.0));
  const double scaled =
      pairwise_mean(values_, [&](double v) { return std::exp(t * (v * inv_trace - 1.0) - shift); });
  return std::exp(shift) * scaled;
}

void write_distribution_csv(const ExactErrorDistribution& dist, std::ostream& out) {
  out << "value,weight\n";
  char buf[64];
  const double weight = 1.0 / static_cast<double>(dist.values().size());
  for (double v : dist.values()) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << ",";
    std::snprintf(buf, sizeof(buf), "%.17g", weight);
    out << buf << "\n";
  }
}

double variance_formula(const DenseSymmetric& a) {
  const std::size_t m = a.dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) acc += a.at(i, j) * a.at(i, j);
    }
  }
  return 2.0 * acc;
}

ChaosPolynomial::ChaosPolynomial(std::size_t m) : m_(m) {
  if (m < 2) throw DomainError("ChaosPolynomial: needs m >= 2");
  coeff_.assign(m * (m - 1) / 2, 0.0);
}

ChaosPolynomial ChaosPolynomial::random(std::size_t m, std::uint64_t seed) {
  ChaosPolynomial chaos(m);
  chaos.coeff_ = gaussian(m * (m - 1) / 2, seed, 0);
  return chaos;
}

std::size_t ChaosPolynomial::index(std::size_t j, std::size_t j_prime) const {
  if (j >= j_prime || j_prime >= m_) throw DomainError("ChaosPolynomial: need j < j' < m");
  return j_prime * (j_prime - 1) / 2 + j;
}

double ChaosPolynomial::coefficient(std::size_t j, std::size_t j_prime) const {
  return coeff_[index(j, j_prime)];
}

void ChaosPolynomial::set_coefficient(std::size_t j, std::size_t j_prime, double value) {
  coeff_[index(j, j_prime)] = value;
}

double ChaosPolynomial::norm2() const {
  double acc = 0.0;
  for (double c : coeff_) acc += c * c;
  return std::sqrt(acc);
}

double ChaosPolynomial::evaluate(std::span<const double> z) const {
  if (z.size() != m_) throw DimensionMismatchError("ChaosPolynomial: sign vector length mismatch");
  double acc = 0.0;
  for (std::size_t jp = 1; jp < m_; ++jp) {
    for (std::size_t j = 0; j < jp; ++j) {
      acc += coeff_[jp * (jp - 1) / 2 + j] * z[j] * z[jp];
    }
  }
  return acc;
}

double ChaosPolynomial::exact_norm(int d, const OracleOptions& options) const {
  if (d < 1) throw DomainError("exact_norm: d must be >= 1");
  // F(z) = z^T C z for the zero-diagonal kernel C with C_{j,j'} = c/2, and F
  // is even in z, so the representative enumeration covers the distribution.
  std::vector<double> flat(m_ * m_, 0.0);
  for (std::size_t jp = 1; jp < m_; ++jp) {
    for (std::size_t j = 0; j < jp; ++j) {
      const double half = 0.5 * coeff_[jp * (jp - 1) / 2 + j];
      flat[j * m_ + jp] = half;
      flat[jp * m_ + j] = half;
    }
  }
  const auto kernel = DenseSymmetric::from_flat(m_, std::move(flat));
  const auto values = enumerate_quadratic_forms(kernel, options);
  const double moment = pairwise_mean(
      values, [&](double v) { return std::pow(std::abs(v), static_cast<double>(d)); });
  return std::pow(moment, 1.0 / static_cast<double>(d));
}

}  // namespace tracekit
