#pragma once

#include <cstddef>
#include <cstdint>

namespace maxent {

/// Largest n for which binomial coefficients are computed in exact integers.
inline constexpr std::size_t kExactBinomialLimit = 60;

/// C(n, k) as an exact integer; requires n <= kExactBinomialLimit.
std::uint64_t binomial_coefficient_exact(std::size_t n, std::size_t k);

/// C(n, k) as a real: exact below kExactBinomialLimit, log-gamma above.
double binomial_coefficient(std::size_t n, std::size_t k);

/// log2 C(n, k).
double log2_binomial_coefficient(std::size_t n, std::size_t k);

}  // namespace maxent
