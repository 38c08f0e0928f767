#pragma once

#include <cstdint>
#include <random>

namespace fiid {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. A bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Seed for the index-th independent substream of `master_seed`.
///
/// Computed as mix64(mix64(master_seed) + index * 0x9E3779B97F4A7C15).
/// The golden-ratio multiplier is odd, so the inner sum is injective in
/// `index` and the outer bijection keeps it that way: for a fixed master no
/// two indices collide.
std::uint64_t derive_substream(std::uint64_t master_seed, std::uint64_t index);

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Uniform draw from [0, 1).
inline double uniform01(Rng &rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Fresh seed from the system entropy source.
std::uint64_t entropy_seed();

} // namespace fiid
