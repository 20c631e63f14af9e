#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace tracekit {

/// Identity of the keyed counter-mode stream, echoed in run metadata so
/// outputs from different implementations can be compared.
inline constexpr const char* kRngId = "philox4x32-10";

/// One Philox-4x32-10 block: 128 output bits per (counter, key) pair
/// (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Rademacher sign vector of length m, a pure function of (seed, index).
///
/// Block layout, fixed so other implementations can match bit-exactly:
///   key     = (seed_lo32, seed_hi32)
///   counter = (index_lo32, index_hi32, block, domain=0)
/// Entry j comes from block j/128, output word (j%128)/32, bit (j%128)%32;
/// bit 1 maps to +1, bit 0 to -1.
std::vector<double> rademacher(std::size_t m, std::uint64_t seed, std::uint64_t index);

/// Uniform [0,1) draws from the same keyed stream (domain=1); 53-bit mantissas.
std::vector<double> uniform01(std::size_t count, std::uint64_t seed, std::uint64_t index);

/// Standard normal draws via Box-Muller over the keyed stream (domain=2).
std::vector<double> gaussian(std::size_t count, std::uint64_t seed, std::uint64_t index);

}  // namespace tracekit
