#include "maxent/combinatorics.hpp"

#include <cmath>

#include "maxent/errors.hpp"

namespace maxent {

std::uint64_t binomial_coefficient_exact(std::size_t n, std::size_t k) {
    if (n > kExactBinomialLimit) {
        throw DomainError("binomial_coefficient_exact: n exceeds exact limit");
    }
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    // Multiplicative form stays exact: each partial product is C(n-k+i, i).
    std::uint64_t c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

double binomial_coefficient(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    if (n <= kExactBinomialLimit) return static_cast<double>(binomial_coefficient_exact(n, k));
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double log2_binomial_coefficient(std::size_t n, std::size_t k) {
    if (k > n) throw DomainError("log2_binomial_coefficient: k > n");
    if (n <= kExactBinomialLimit) {
        return std::log2(static_cast<double>(binomial_coefficient_exact(n, k)));
    }
    return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::log(2.0);
}

}  // namespace maxent
