#pragma once

#include <cmath>
#include <cstdint>

namespace nrmlab {

/// Counter-style 64-bit generator (splitmix64, Steele/Lea/Flood).  One
/// instance per logical stream; streams are derived with mix_seed below so
/// that results do not depend on scheduling or worker count.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given rate (> 0).  The zero-probability draw
    /// u == 0 is rejected so inter-arrival gaps are strictly positive.
    double exponential(double rate) noexcept {
        double u = uniform01();
        while (u == 0.0) u = uniform01();
        return -std::log1p(-u) / rate;
    }

  private:
    std::uint64_t state_;
};

/// Deterministic stream derivation: one splitmix64 finalization of the
/// parent seed combined with a golden-ratio-scaled stream index.  Used to
/// split a base seed into per-sweep, per-path, per-class and per-policy
/// substreams; documented in README.md.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return mix_seed(mix_seed(seed, a), b);
}

/// Domain-separation tags so arrival streams and thinning streams derived
/// from the same path seed never collide.
namespace stream_tag {
inline constexpr std::uint64_t arrivals = 0x41525256ull;  // "ARRV"
inline constexpr std::uint64_t thinning = 0x5448494eull;  // "THIN"
}  // namespace stream_tag

}  // namespace nrmlab
