#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace qmp {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One fixed chain for deriving per-trial streams, so that reruns of a config
// reproduce every stream bit for bit.
inline uint64_t mix_seed(uint64_t base, uint64_t point, uint64_t trial) {
    uint64_t s = splitmix64(base);
    s = splitmix64(s ^ (point * 0x9e3779b97f4a7c15ULL));
    s = splitmix64(s ^ (trial * 0xc2b2ae3d27d4eb4fULL));
    return s;
}

using Rng = std::mt19937_64;

// Distribution objects are not bit-stable across standard libraries, so the
// few draws we need are spelled out.

// uniform in [0, 1), 53 bits
inline double runif(Rng& g) { return double(g() >> 11) * 0x1.0p-53; }

// unbiased uniform integer in [0, n)
inline uint64_t runif_index(Rng& g, uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
        uint64_t x = g();
        if (x >= threshold) return x % n;
    }
}

// standard normal via Box-Muller (single value per call)
inline double rnorm(Rng& g) {
    double u1;
    do { u1 = runif(g); } while (u1 <= 0.0);
    double u2 = runif(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

} // namespace qmp
