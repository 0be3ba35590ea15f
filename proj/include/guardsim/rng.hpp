#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace guardsim {

/// What a random stream is used for. Each (seed, cell, purpose) triple gets
/// its own generator so that changing one rate never shifts unrelated draws.
enum class StreamPurpose : std::uint64_t {
    Arrivals = 1,
    Durations = 2,
    Residence = 3,
    NeighborChoice = 4,
    HandoffArrivals = 5,
};

/// SplitMix64 finalizer, used to derive well-separated substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream. Draws are implemented on raw 64-bit output
/// rather than <random> distributions, whose algorithms are unspecified and
/// differ between standard libraries.
class RandomStream {
public:
    RandomStream() = default;

    RandomStream(std::uint64_t seed, std::uint64_t cell, StreamPurpose purpose)
        : gen_(mix64(mix64(mix64(seed) ^ cell) ^ static_cast<std::uint64_t>(purpose))) {}

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate (> 0).
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    /// Unbiased integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace guardsim
