#pragma once

#include <cstdint>
#include <random>

namespace tsdantzig {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent seed streams.
std::uint64_t mix_seed(std::uint64_t value) noexcept;

/// Seed for replicate `index` of a run seeded with `base`. Streams for
/// different (base, stream, index) triples do not overlap in practice.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) noexcept;

}  // namespace tsdantzig
