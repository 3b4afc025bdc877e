#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace speedsim {

// splitmix64 step; used to whiten seeds and derive per-replication streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Seedable, cross-platform-stable sampler. mt19937_64 output is pinned by the
// standard, and the samplers below avoid std::*_distribution (whose sequences
// are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        gen_.seed(splitmix64(s));
    }

    // [0, 1) with 53 random bits
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // inverse-CDF on a uniform draw
    double exponential(double mean) {
        return -mean * std::log1p(-uniform01());
    }

    // Knuth multiplication method; exact and deterministic for the moderate
    // means used here (underflows only near mean ~ 700).
    int poisson(double mean) {
        const double limit = std::exp(-mean);
        int k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace speedsim
