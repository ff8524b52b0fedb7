#pragma once

#include <cstdint>
#include <random>

namespace snapsearch {

using Rng = std::mt19937_64;

// Independent, reproducible stream `stream` derived from a run seed. Distinct
// streams let one part of a run change its draws without perturbing another.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

// Uniform real in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Integer in [0, n) by multiply-shift; bias is below 2^-64 * n.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  __extension__ using Wide = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<Wide>(rng()) * n) >> 64);
}

inline bool bernoulli(Rng& rng, double p) { return uniform_unit(rng) < p; }

}  // namespace snapsearch
