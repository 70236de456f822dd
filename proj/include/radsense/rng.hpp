#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace radsense {

/// SplitMix64 step: advances the state and returns the next output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives the seed of an independent substream from a base seed and a
/// stream index. Used to give every Monte Carlo run its own generator.
inline std::uint64_t derive_stream_seed(std::uint64_t seed,
                                        std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t t = splitmix64_next(s) + index;
    return splitmix64_next(t);
}

/// xoshiro256++ generator (Blackman and Vigna), seeded through SplitMix64.
/// The output sequence is fully specified by this header, so results
/// reproduce bit-for-bit across platforms and standard libraries.
class Xoshiro256PlusPlus {
public:
    explicit Xoshiro256PlusPlus(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) {
            word = splitmix64_next(sm);
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) {
            s_[0] = 1;  // the all-zero state is a fixed point
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in (0, 1]: 53 high bits, never zero, safe for log().
    double next_unit_positive() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform double in [0, 1).
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

struct NormalPair {
    double z0 = 0.0;
    double z1 = 0.0;
};

/// Basic-form Box-Muller transform. Consumes exactly two uniforms per pair,
/// which keeps the draw order of an ensemble fixed.
inline NormalPair box_muller(Xoshiro256PlusPlus& rng) {
    const double u1 = rng.next_unit_positive();
    const double u2 = rng.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace radsense
