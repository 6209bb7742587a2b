#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace toxprof {

/// Deterministic RNG wrapper. std::mt19937_64 has a standard-mandated output
/// sequence; the variate draws below avoid std::*_distribution, whose output
/// is implementation-defined, so streams replay identically everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be > 0. Rejection sampling, unbiased.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform_below(n));
    }

    /// Uniform double in [lo, hi).
    double uniform_range(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

private:
    std::mt19937_64 gen_;
};

/// FNV-1a over a label, mixed with a root seed. Used to derive independent
/// named sub-streams (selection, per-group LDA, synthesis) from one run seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

/// FNV-1a content hash, used for provenance identifiers.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace toxprof
