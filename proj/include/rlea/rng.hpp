#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace rlea {

/// Every run, episode and controller draws from one of these. The sampling
/// helpers below avoid std distributions so streams are identical across
/// standard library implementations.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the independent stream `stream` derived from an experiment seed.
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream);

inline Rng make_rng(std::uint64_t base, std::uint64_t stream = 0) {
    return Rng(stream_seed(base, stream));
}

/// Uniform in [0, 1).
double uniform01(Rng& rng);

/// Uniform in [lo, hi).
double uniform(Rng& rng, double lo, double hi);

/// Standard normal (Box-Muller, no cached second value).
double normal(Rng& rng);

inline double normal(Rng& rng, double mean, double stddev) { return mean + stddev * normal(rng); }

/// Uniform integer in [0, n). n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

} // namespace rlea
