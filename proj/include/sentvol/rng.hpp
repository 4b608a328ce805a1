#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace sentvol {

// Deterministic, cross-platform RNG (xoshiro256** seeded via splitmix64).
// Results depend only on the seed, never on the standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound); bound > 0. Multiply-shift, no rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const auto wide =
            static_cast<unsigned __int128>(next_u64()) * bound;
        return static_cast<std::uint64_t>(wide >> 64);
    }

    // Standard normal via Box-Muller (consumes two uniforms, discards the
    // second variate so the stream advance is fixed).
    double next_normal() {
        double u1 = next_double();
        const double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Stable 64-bit hash for deriving per-entity substreams.
    static std::uint64_t hash(std::string_view s) {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (const char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    // Independent stream for (seed, tag); order-free by construction.
    static Rng substream(std::uint64_t seed, std::uint64_t tag) {
        std::uint64_t x = seed ^ (tag * 0x9E3779B97F4A7C15ULL);
        return Rng(splitmix64(x));
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4]{};
};

}  // namespace sentvol
