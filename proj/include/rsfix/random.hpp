#pragma once

// Per-trial random streams.
//
// A stream is a std::mt19937_64 keyed by (seed, n, trial_index, tag) through
// std::seed_seq, so every trial is reproducible regardless of which worker
// runs it. Integer and real draws below are defined bit-exactly here rather
// than through <random> distributions, whose output is implementation-defined.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace rsfix {

using Rng = std::mt19937_64;

inline Rng derive_stream(std::uint64_t seed, std::uint64_t n, std::uint64_t trial_index,
                         std::uint32_t tag = 0) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(n), hi(n), lo(trial_index), hi(trial_index), tag, 0x5253u};
    return Rng(seq);
}

/// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    using u128 = unsigned __int128;
    std::uint64_t x = rng();
    u128 m = u128{x} * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = rng();
            m = u128{x} * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Fisher-Yates, back to front.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace rsfix
