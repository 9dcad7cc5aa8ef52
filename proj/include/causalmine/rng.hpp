#pragma once

#include <cstdint>
#include <random>

namespace causalmine {

// splitmix64 finalizer; also used to combine seeds into independent streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

/// Deterministic random source. The samplers are spelled out instead of using
/// std distributions so that identical seeds give identical streams on every
/// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform integer in [0, n), n >= 1. Lemire's multiply-shift rejection.
    std::size_t index(std::size_t n) {
        const std::uint64_t bound = n;
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double real(double lo, double hi) { return lo + (hi - lo) * real(); }

    bool bernoulli(double p) { return real() < p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace causalmine
