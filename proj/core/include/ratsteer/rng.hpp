#pragma once

#include <cassert>
#include <cstdint>
#include <random>

namespace ratsteer {

// Purpose-tagged RNG streams derived from one master seed. Keeping channel,
// traffic and agent draws on separate engines means two runs that differ only
// in the steering algorithm still see identical arrivals and fading.
enum class RngStream : std::uint32_t {
  kTopology = 1,
  kShadowing = 2,
  kFading = 3,
  kTraffic = 4,
  kAgentInit = 5,
  kAgentExplore = 6,
  kAgentSample = 7,
};

inline std::mt19937_64 make_rng(std::uint64_t master_seed, RngStream stream) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(master_seed & 0xffffffffu),
      static_cast<std::uint32_t>(master_seed >> 32),
      static_cast<std::uint32_t>(stream),
  };
  return std::mt19937_64(seq);
}

// Uniform double in [0, 1) from the top 53 bits of one engine draw. Used
// instead of std::uniform_real_distribution so the consumed draw sequence is
// pinned by this code, not by the standard library implementation.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling on raw engine output; unlike
// std::uniform_int_distribution the consumed draw sequence is pinned here, so
// results do not depend on the standard library implementation.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  assert(n > 0);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % n;
}

}  // namespace ratsteer
