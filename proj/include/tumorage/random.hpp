#pragma once

#include <cstdint>
#include <random>

namespace tumorage {

// Every random-consuming routine takes one of these by reference; each worker owns its own.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for stream `index` of a run seeded with `seed`:
// splitmix64(splitmix64(seed) ^ (index + 1) * 0x9E3779B97F4A7C15).
// Streams depend only on (seed, index), never on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Uniform on the open interval (0, 1) using the top 53 bits of one draw.
// Implemented by hand so sequences are identical across standard libraries.
double uniform_open01(Rng& rng);

// Standard normal by inversion of one uniform.
double standard_normal(Rng& rng);

}  // namespace tumorage
