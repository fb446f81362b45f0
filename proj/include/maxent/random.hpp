#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace maxent {

// SplitMix64 used as a lightweight, cheaply seeded UniformRandomBitGenerator.
// Every Monte Carlo trial and optimizer start owns one stream derived from
// (seed, index), so results never depend on how work is partitioned.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Derive an independent sub-seed for stream `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

inline SplitMix64 stream_for(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(derive_seed(seed, index));
}

/// Symmetric Dirichlet(1, ..., 1) draw of the given length (uniform on the simplex).
std::vector<double> dirichlet_uniform(SplitMix64& rng, std::size_t length);

/// Symmetric Dirichlet(alpha, ..., alpha) draw.
std::vector<double> dirichlet(SplitMix64& rng, std::size_t length, double alpha);

}  // namespace maxent
