#pragma once

#include <cstdint>
#include <initializer_list>

namespace starprune {

/// Deterministic cross-platform generator (splitmix64). Every seeded
/// quantity in the project (codebooks, mixer weights, synthetic targets,
/// random masks, test data) goes through this stream; std:: distributions
/// are avoided because their output is implementation-defined.
///
/// next():   s += 0x9E3779B97F4A7C15; z = s;
///           z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
///           z = (z ^ z>>27) * 0x94D049BB133111EB;
///           return z ^ z>>31;
/// next_double(): top 53 bits of next() scaled to [0, 1).
/// bounded(n):    Lemire multiply-shift reduction of next() into [0, n).
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    float uniform(float lo, float hi) {
        return lo + static_cast<float>(next_double()) * (hi - lo);
    }

    uint64_t bounded(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }
};

/// Derives an independent stream seed from a base seed and a path of
/// indices (e.g. clip, scale, iteration), so substreams never collide.
inline uint64_t derive_seed(uint64_t seed, std::initializer_list<uint64_t> path) {
    SplitMix64 g(seed);
    uint64_t out = g.next();
    for (uint64_t v : path) {
        g.state ^= v * 0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL;
        out = g.next();
    }
    return out;
}

}  // namespace starprune
