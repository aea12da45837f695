// Seeded deterministic randomness. One top-level seed expands into
// independent substreams (per-party setting draws, measurement sampling)
// through splitmix64, so a protocol transcript is a pure function of the
// configuration.

#pragma once

#include <cstdint>
#include <random>

namespace qkd3 {

/// splitmix64 step; used to whiten seeds and derive substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Substream n of a top-level seed; distinct n give independent streams.
    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed;
        splitmix64(s);
        s ^= 0x6a09e667f3bcc909ULL * (stream + 1);
        return Rng(splitmix64(s));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Unbiased uniform draw from {0, ..., n-1} by rejection.
    std::uint32_t uniform_below(std::uint32_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return static_cast<std::uint32_t>(x % n);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace qkd3
