#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "maxent/pmf.hpp"

namespace maxent {

/// Which closed form applies to (n, r). Checked in declaration order, so
/// (1, 1) is tagged n1 and (2, 1) is tagged r1.
enum class SpecialCase { general, n1, r1, n2, n3r2 };

std::string_view to_string(SpecialCase c) noexcept;

/// The three addends of the lower bound.
struct BoundTerms {
    double binomial_term = 0.0;   ///< w0 H(B_n)
    double shifted_term = 0.0;    ///< (1 - w0)(H(B_{n-1}) + log2(r - 1)); 0 when r = 1
    double weight_entropy = 0.0;  ///< h(w0)
};

struct BoundReport {
    std::size_t n = 0;
    std::size_t r = 0;
    double w0 = 0.0;
    double bound_bits = 0.0;
    BoundTerms terms;
    SpecialCase special_case = SpecialCase::general;
};

/// Entropy of Binomial(n, 1/2) in bits, by exact summation.
double binomial_half_entropy(std::size_t n);

/// Mixture weight on the residue-0 class that maximizes the bound expression.
/// Equals 1 for r = 1. Throws DomainError when n < 1 or r < 1.
double conjectured_weight(std::size_t n, std::size_t r);

/// Bound expression evaluated at an arbitrary weight w in (0, 1].
/// For r = 1 only w = 1 is admissible.
double bound_value_at(double w, std::size_t n, std::size_t r);

BoundReport entropy_lower_bound(std::size_t n, std::size_t r);

SpecialCase classify(std::size_t n, std::size_t r) noexcept;

/// Conjectured maximizing inputs: n-1 copies of uniform{0, r} and one
/// w0-mixture of uniform{0, r} and uniform{1, ..., r-1}.
std::vector<Pmf> conjectured_inputs(std::size_t n, std::size_t r);

/// Closed-form maximum for the proven cases, computed from its own formula
/// rather than through entropy_lower_bound. Throws NotSpecialCaseError for
/// other (n, r), and std::logic_error if the two routes disagree beyond 1e-12.
double closed_form_special(std::size_t n, std::size_t r);

/// True when (n, r) lies in the set where the bound is known to be the maximum.
bool is_proven_case(std::size_t n, std::size_t r) noexcept;

}  // namespace maxent
