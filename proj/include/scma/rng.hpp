#pragma once

#include <cstdint>
#include <random>

namespace scma {

// SplitMix64 finalizer. Good enough to decorrelate engine seeds derived
// from (master seed, stream index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic substream for trial `stream` of a Monte Carlo run. Trials
// seeded this way can execute in any order or on any thread and still
// reproduce the same draws.
inline std::mt19937_64 make_substream(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t s = splitmix64(master_seed ^ splitmix64(stream));
    return std::mt19937_64(s);
}

}  // namespace scma
