// Deterministic 64-bit mixing generator (splitmix64). Identical output for
// identical seeds on every platform; no std library RNG is used anywhere.
#pragma once

#include <cstdint>

namespace pgc {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    // Independent substream for sample i of a seeded run: the substream is
    // a function of (seed, i) alone.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t i) {
        SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
        return SplitMix64(mixer.next());
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform-enough value in [0, m); m > 0. Modulo bias is irrelevant here,
    // determinism is what matters.
    std::uint64_t below(std::uint64_t m) { return next() % m; }

    // Integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

}  // namespace pgc
