#pragma once

#include <cstdint>

namespace burstgate {

// SplitMix64 (Steele, Lea, Vigna). Chosen over std engines because its output
// is fully specified, so identical seeds give identical streams on every
// platform and standard library.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double next_uniform(double lo, double hi) {
        return lo + next_double() * (hi - lo);
    }

private:
    std::uint64_t state_;
};

/// Deterministic seed splitting: sub-stream `index` of `base`.
///
/// Iteration i of a run uses mix_seed(master_seed, i); flow f within that
/// iteration uses mix_seed(iteration_seed, f). The derivation depends only on
/// the two indices, so adding flows or iterations never perturbs existing
/// streams. The mixer is the SplitMix64 finalizer over a golden-ratio offset.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace burstgate
