#pragma once

#include <cstdint>

namespace fvgrad {

/// SplitMix64 generator. The state walks the integers in steps of the golden
/// gamma, so positioning a generator at stream index k is a single addition;
/// this is what makes the perturbed-grid generator reproducible from the
/// (seed, vertex id) pair alone.
class SplitMix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(seed + stream * kGamma) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += kGamma);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

} // namespace fvgrad
