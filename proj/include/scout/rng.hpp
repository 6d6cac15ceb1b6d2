#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace scout {

/// SplitMix64 finalizer. Used to derive independent sub-seeds from a master
/// seed; the exact function is part of the reproducibility contract.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Sub-seed for the index-th unit of work under a master seed.
/// sub_seed = splitmix64(splitmix64(seed) ^ (index + 1))
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ (index + 1));
}

/// Seeded generator with portable helpers. std::mt19937_64 output is fixed by
/// the standard; the helpers below avoid std distributions, whose streams are
/// not portable across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform double in [0, 1), 53 bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), unbiased via rejection. n must be >= 1.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t v = gen_();
            if (v >= threshold) return v % n;
        }
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace scout
