#include "tracekit/sampler.hpp"

#include <cmath>

#include "tracekit/errors.hpp"

namespace tracekit {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> round_once(std::array<std::uint32_t, 4> x,
                                               const std::array<std::uint32_t, 2>& key) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mul_hi_lo(kPhiloxM0, x[0], hi0, lo0);
  mul_hi_lo(kPhiloxM1, x[2], hi1, lo1);
  return {hi1 ^ x[1] ^ key[0], lo1, hi0 ^ x[3] ^ key[1], lo0};
}

// Stream domains keep the Rademacher, uniform, and gaussian draws for one
// seed disjoint.
enum : std::uint32_t { kDomainRademacher = 0, kDomainUniform = 1, kDomainGaussian = 2 };

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t index,
                                          std::uint32_t block_index, std::uint32_t domain) {
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(index),
                                            static_cast<std::uint32_t>(index >> 32),
                                            block_index, domain};
  return philox4x32(ctr, key);
}

inline std::uint64_t to_u64(std::uint32_t lo, std::uint32_t hi) {
  return static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
}

inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    counter = round_once(counter, key);
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return counter;
}

std::vector<double> rademacher(std::size_t m, std::uint64_t seed, std::uint64_t index) {
  if (m == 0) throw DomainError("rademacher: m must be >= 1");
  std::vector<double> z(m);
  const std::size_t blocks = (m + 127) / 128;
  std::size_t j = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto out = block(seed, index, static_cast<std::uint32_t>(b), kDomainRademacher);
    for (int word = 0; word < 4 && j < m; ++word) {
      std::uint32_t bits = out[word];
      for (int bit = 0; bit < 32 && j < m; ++bit, ++j) {
        z[j] = (bits & 1u) ? 1.0 : -1.0;
        bits >>= 1;
      }
    }
  }
  return z;
}

std::vector<double> uniform01(std::size_t count, std::uint64_t seed, std::uint64_t index) {
  std::vector<double> u(count);
  const std::size_t blocks = (count + 1) / 2;
  std::size_t j = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto out = block(seed, index, static_cast<std::uint32_t>(b), kDomainUniform);
    u[j++] = to_unit(to_u64(out[0], out[1]));
    if (j < count) u[j++] = to_unit(to_u64(out[2], out[3]));
  }
  return u;
}

std::vector<double> gaussian(std::size_t count, std::uint64_t seed, std::uint64_t index) {
  std::vector<double> g(count);
  const std::size_t pairs = (count + 1) / 2;
  std::size_t j = 0;
  for (std::size_t p = 0; p < pairs; ++p) {
    const auto out = block(seed, index, static_cast<std::uint32_t>(p), kDomainGaussian);
    // 1-u1 lies in (0,1], keeping the log argument away from zero.
    const double u1 = 1.0 - to_unit(to_u64(out[0], out[1]));
    const double u2 = to_unit(to_u64(out[2], out[3]));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    g[j++] = r * std::cos(a);
    if (j < count) g[j++] = r * std::sin(a);
  }
  return g;
}

}  // namespace tracekit
