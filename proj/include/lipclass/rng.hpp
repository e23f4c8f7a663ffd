#pragma once

#include <cstdint>
#include <limits>

namespace lipclass {

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator so it can feed
/// the <random> distributions, but the helpers below are used instead where
/// output must be bit-identical across standard library implementations.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] (inclusive). Modulo bias is negligible for
    /// the small ranges used here.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>((*this)() % span);
    }

    /// Independent child stream for component or trial `index`.
    SplitMix64 split(std::uint64_t index) const {
        SplitMix64 mixer(state_ ^ (0xD1B54A32D192ED03ULL * (index + 1)));
        return SplitMix64(mixer());
    }

private:
    std::uint64_t state_;
};

} // namespace lipclass
