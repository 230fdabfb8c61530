#pragma once

#include <cstdint>
#include <random>

namespace qvol {

using Rng = std::mt19937_64;

/// Independent stream for (seed, stream_index). Workers and Monte Carlo chunks each
/// derive their own stream so results never depend on scheduling.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32), 0x71766f6cU};
  return Rng(seq);
}

}  // namespace qvol
