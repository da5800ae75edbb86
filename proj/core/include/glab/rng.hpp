#pragma once

#include <cstdint>
#include <random>

namespace glab {

// splitmix64: mixes (master seed, stream index) into an independent stream seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_rng(uint64_t seed, uint64_t stream = 0) { return Rng(mix_seed(seed, stream)); }

}  // namespace glab
