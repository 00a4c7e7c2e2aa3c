#pragma once

#include <cstdint>
#include <random>

namespace zerosum {

/// Seed for trial `index` of stream `stream`; trials are independent of
/// scheduling, so any job count reproduces the same draws.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
    std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ULL) ^ (index * 0xD1B54A32D192ED03ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
    return std::mt19937_64(trial_seed(seed, stream, index));
}

/// Uniform integer in [lo, hi].
inline int uniform(std::mt19937_64 & rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

} // namespace zerosum
