#pragma once

#include <atomic>
#include <cstdint>

namespace smallgen {

inline constexpr const char* kVersion = "0.1.0";

// Seed for the equal-degree splitting stage of polynomial factorization
// over prime fields.  Fixed so that runs are bit-reproducible; it is
// copied into result metadata.
inline constexpr std::uint64_t kFactorSeed = 0x5eed00d5eed00d5eULL;

// Default seed for everything else that draws random bits (probable-prime
// witnesses above 2^64, samplers).  Overridable per run via --seed.
inline constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ULL;

inline std::atomic<std::uint64_t>& global_seed_ref() {
    static std::atomic<std::uint64_t> seed{kDefaultSeed};
    return seed;
}

inline std::uint64_t global_seed() { return global_seed_ref().load(); }
inline void set_global_seed(std::uint64_t s) { global_seed_ref().store(s); }

}  // namespace smallgen
