#ifndef BLOSIM_RNG_HPP
#define BLOSIM_RNG_HPP

#include <cmath>
#include <cstdint>

#include "blosim/units.hpp"

namespace blosim {

/// splitmix64 (Steele, Lea, Flood). Used only to expand seeds.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// xoshiro256++ 1.0 (Blackman, Vigna), seeded through splitmix64.
///
/// Streams: stream k of a user seed is seeded from
/// splitmix64(seed ^ (0x9E3779B97F4A7C15 * (k + 1))), so independent
/// sub-streams (spectral noise, dark noise, per-block noise) are
/// reproducible and decoupled. The generator identity and the stream
/// construction are part of the reproducibility contract: a trace is
/// regenerated bit-for-bit from (parameters, seed).
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed, std::uint64_t stream = 0) {
        SplitMix64 sm(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
        for (auto& w : s_) w = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
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

    /// Uniform double in [0, 1), 53 mantissa bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

struct GaussianPair {
    double z0;
    double z1;
};

/// One Box-Muller draw: two independent standard normals. The trig form
/// is used (not rejection sampling) so the consumption of uniforms per
/// call is fixed, which keeps sub-stream layouts reproducible.
inline GaussianPair gaussian_pair(Xoshiro256pp& rng) {
    const double u1 = 1.0 - rng.uniform01(); // (0, 1]
    const double u2 = rng.uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    return {mag * std::cos(2.0 * kPi * u2), mag * std::sin(2.0 * kPi * u2)};
}

} // namespace blosim

#endif
