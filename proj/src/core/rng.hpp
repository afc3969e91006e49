#pragma once

#include <cstdint>
#include <random>

namespace at {

/// Mixes a base seed with a stream index into an independent 64-bit seed.
/// Monte Carlo loops that split work into fixed-size chunks derive the chunk
/// generator as `make_rng(derive_seed(seed, chunk_index))`, so results do not
/// depend on how chunks are distributed over workers.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer applied to (seed, stream)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

} // namespace at
