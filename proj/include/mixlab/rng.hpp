// rng.hpp — deterministic counter-based PRNG (SplitMix64) with derived streams.
//
// Contract: identical (seed, stream) produces the identical sequence on every
// platform. All randomness in the library flows through this generator;
// std::random distributions are never used because their output is
// implementation-defined. Streams are derived by hashing a (seed, experiment,
// replicate) path, so replicate-level parallelism cannot change results.
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace mixlab {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Finalizer from SplitMix64 (Steele, Lea, Flood 2014; public domain reference
// implementation by Vigna).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

// Identifies one deterministic stream: a root seed plus a derivation path.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    // Child stream for (experiment, replicate)-style derivation paths.
    RngSeed derived(std::string_view label, std::uint64_t index = 0) const {
        RngSeed child;
        child.seed = seed;
        child.stream = detail::mix64(stream ^ detail::fnv1a(label) ^
                                     (index * detail::kGolden + 1));
        return child;
    }
};

// SplitMix64 run in counter mode: output(i) = mix64(base + i*golden).
class Rng {
  public:
    explicit Rng(RngSeed s)
        : base_(detail::mix64(s.seed) ^ detail::mix64(s.stream ^ detail::kGolden)),
          counter_(0) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : Rng(RngSeed{seed, stream}) {}

    std::uint64_t next_u64() { return detail::mix64(base_ + (++counter_) * detail::kGolden); }

    // Uniform in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound). Lemire's multiply-shift rejection, exact.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        while (true) {
            std::uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * bound;
            auto lo = static_cast<std::uint64_t>(m);
            if (lo >= bound || lo >= static_cast<std::uint64_t>(-bound) % bound)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t base_;
    std::uint64_t counter_;
};

} // namespace mixlab
