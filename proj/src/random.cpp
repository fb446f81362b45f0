#include "maxent/random.hpp"

#include <cmath>
#include <random>

namespace maxent {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    SplitMix64 mixer(seed ^ 0x6a09e667f3bcc909ULL);
    std::uint64_t a = mixer();
    SplitMix64 second(a + index * 0xd1342543de82ef95ULL);
    second();
    return second();
}

std::vector<double> dirichlet_uniform(SplitMix64& rng, std::size_t length) {
    std::vector<double> out(length);
    double total = 0.0;
    for (auto& v : out) {
        // 1 - u lies in (0, 1], so the log is finite.
        v = -std::log1p(-rng.uniform());
        total += v;
    }
    if (total <= 0.0) {
        out.assign(length, 1.0 / static_cast<double>(length));
        return out;
    }
    for (auto& v : out) v /= total;
    return out;
}

std::vector<double> dirichlet(SplitMix64& rng, std::size_t length, double alpha) {
    if (alpha == 1.0) return dirichlet_uniform(rng, length);
    std::gamma_distribution<double> gamma(alpha, 1.0);
    std::vector<double> out(length);
    double total = 0.0;
    for (auto& v : out) {
        v = gamma(rng);
        total += v;
    }
    if (total <= 0.0) {
        out.assign(length, 1.0 / static_cast<double>(length));
        return out;
    }
    for (auto& v : out) v /= total;
    return out;
}

}  // namespace maxent
