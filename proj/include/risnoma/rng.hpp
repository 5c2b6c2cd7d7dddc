// Counter-seeded xoshiro256++ substreams; one stream per trial chunk so
// estimates are bit-identical regardless of how chunks map onto workers.
#pragma once

#include <cmath>
#include <cstdint>

namespace risnoma {

namespace detail {

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

} // namespace detail

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        detail::SplitMix64 sm{seed};
        for (auto& word : state_) {
            word = sm.next();
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw in (0, 1]; never returns 0, so -log stays finite.
    double next_u01() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_exponential() { return -std::log(next_u01()); }

    /// Magnitude of a standard complex Gaussian (Rayleigh with E|.|^2 = 1).
    double next_rayleigh() { return std::sqrt(next_exponential()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

/// Substream generator for chunk `chunk_index` of run `seed`.
inline Xoshiro256pp make_chunk_rng(std::uint64_t seed, std::uint64_t chunk_index) {
    detail::SplitMix64 sm{seed ^ (0xD1B54A32D192ED03ULL * (chunk_index + 1))};
    return Xoshiro256pp(sm.next());
}

/// Deterministic seed derivation for nested runs (one per sweep row).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    detail::SplitMix64 sm{seed};
    sm.state ^= 0x9E3779B97F4A7C15ULL * (a + 1);
    sm.next();
    sm.state ^= 0xBF58476D1CE4E5B9ULL * (b + 1);
    return sm.next();
}

} // namespace risnoma
