#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace maxsum {

// Deterministic random stream (xoshiro256++) with O(1) substream derivation.
//
// Replicate-level work runs in parallel by giving every unit of work its own
// stream keyed by (seed, key1, key2); results are then independent of the
// scheduling order and of the worker count. All samplers are hand-rolled so
// that output is identical across standard libraries and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = split_mix(x);
    }

    // Stream for the unit of work identified by (key1, key2) under `seed`.
    static Rng substream(std::uint64_t seed, std::uint64_t key1, std::uint64_t key2 = 0) {
        return Rng(derive_key(seed, key1, key2));
    }

    // Collapses (seed, key1, key2) into a single 64-bit stream seed.
    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t key1,
                                    std::uint64_t key2 = 0) {
        std::uint64_t h = mix(seed);
        h = mix(h ^ mix(key1 + 0x9e3779b97f4a7c15ULL));
        h = mix(h ^ mix(key2 + 0xc2b2ae3d27d4eb4fULL));
        return h;
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

    // Uniform on (0, 1]; never zero, so it is safe under log().
    double uniform01() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform01()));
        const double angle = k_two_pi * uniform01();
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // Uniform integer on [0, bound), unbiased via rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    static constexpr double k_two_pi = 6.283185307179586476925287;

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    // splitmix64 step: advances x and returns the next word.
    static std::uint64_t split_mix(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        return mix_body(x);
    }

    // splitmix64 finalizer as a pure hash.
    static std::uint64_t mix(std::uint64_t z) {
        return mix_body(z + 0x9e3779b97f4a7c15ULL);
    }

    static std::uint64_t mix_body(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Substream tags: fixed so that adding or removing a method from a campaign
// never shifts the draws consumed by another method.
namespace stream_tag {
inline constexpr std::uint64_t k_data = 1;
inline constexpr std::uint64_t k_beta = 2;
inline constexpr std::uint64_t k_rm1_multiplier = 3;
inline constexpr std::uint64_t k_rm2_multiplier = 4;
inline constexpr std::uint64_t k_eb_permutation = 5;
inline constexpr std::uint64_t k_precision_cv = 6;
}  // namespace stream_tag

}  // namespace maxsum
