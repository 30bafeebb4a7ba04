#pragma once

#include <cstdint>

namespace nomafair {

// Counter-based splittable generator (splitmix64). Every stream is a pure
// function of its seed, so per-block and per-user streams can be derived
// independently and reproduced bit-for-bit on any platform.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

// Derives an independent child seed from (seed, index) by one mixing round.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    SplitMix64 g(seed ^ (index * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
    return g.next();
}

}  // namespace nomafair
