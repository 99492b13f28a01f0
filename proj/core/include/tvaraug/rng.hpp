#pragma once

#include <cstdint>
#include <random>

namespace tvaraug {

/// SplitMix64 finaliser (Steele, Lea & Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/**
 * Seed of the independent stream used for sample `stream_index` of a batch
 * generated from `base_seed`:
 *
 *   splitmix64(splitmix64(base_seed) ^ (stream_index * 0xD1B54A32D192ED03))
 *
 * Part of the reproducibility contract; changing it changes every output.
 */
constexpr std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t stream_index) noexcept {
    return splitmix64(splitmix64(base_seed) ^ (stream_index * 0xD1B54A32D192ED03ULL));
}

/// Standard normal draws from a 64-bit Mersenne Twister.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double operator()() { return dist_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace tvaraug
