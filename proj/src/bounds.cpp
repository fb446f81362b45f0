#include "maxent/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "maxent/combinatorics.hpp"
#include "maxent/errors.hpp"

namespace maxent {

namespace {

void require_nr(std::size_t n, std::size_t r, const char* what) {
    if (n < 1 || r < 1) throw DomainError(std::string(what) + ": need n >= 1 and r >= 1");
}

}  // namespace

std::string_view to_string(SpecialCase c) noexcept {
    switch (c) {
        case SpecialCase::general: return "general";
        case SpecialCase::n1: return "n1";
        case SpecialCase::r1: return "r1";
        case SpecialCase::n2: return "n2";
        case SpecialCase::n3r2: return "n3r2";
    }
    return "general";
}

double binomial_half_entropy(std::size_t n) {
    if (n == 0) return 0.0;
    // H(B_n) = sum_k p_k (n - log2 C(n, k)) with p_k = C(n, k) 2^-n.
    const double nd = static_cast<double>(n);
    double h = 0.0;
    if (n <= kExactBinomialLimit) {
        const double scale = std::ldexp(1.0, -static_cast<int>(n));
        for (std::size_t k = 0; k <= n; ++k) {
            const double c = static_cast<double>(binomial_coefficient_exact(n, k));
            h += c * scale * (nd - std::log2(c));
        }
        return h;
    }
    for (std::size_t k = 0; k <= n; ++k) {
        const double log2c = log2_binomial_coefficient(n, k);
        const double p = std::exp2(log2c - nd);
        if (p > kZeroMass) h += p * (nd - log2c);
    }
    return h;
}

double conjectured_weight(std::size_t n, std::size_t r) {
    require_nr(n, r, "conjectured_weight");
    if (r == 1) return 1.0;
    const double delta = binomial_half_entropy(n) - binomial_half_entropy(n - 1);
    const double t = std::exp2(delta);
    return t / (static_cast<double>(r - 1) + t);
}

double bound_value_at(double w, std::size_t n, std::size_t r) {
    require_nr(n, r, "bound_value_at");
    if (!(w > 0.0 && w <= 1.0)) throw DomainError("bound_value_at: weight outside (0, 1]");
    if (r == 1 && w != 1.0) throw DomainError("bound_value_at: r = 1 requires w = 1");
    const double hn = binomial_half_entropy(n);
    double value = w * hn + binary_entropy(w);
    if (r > 1) {
        value += (1.0 - w) *
                 (binomial_half_entropy(n - 1) + std::log2(static_cast<double>(r - 1)));
    }
    return value;
}

SpecialCase classify(std::size_t n, std::size_t r) noexcept {
    if (n == 1) return SpecialCase::n1;
    if (r == 1) return SpecialCase::r1;
    if (n == 2) return SpecialCase::n2;
    if (n == 3 && r == 2) return SpecialCase::n3r2;
    return SpecialCase::general;
}

bool is_proven_case(std::size_t n, std::size_t r) noexcept {
    return n >= 1 && r >= 1 && classify(n, r) != SpecialCase::general;
}

BoundReport entropy_lower_bound(std::size_t n, std::size_t r) {
    require_nr(n, r, "entropy_lower_bound");
    BoundReport rep;
    rep.n = n;
    rep.r = r;
    rep.w0 = conjectured_weight(n, r);
    rep.terms.binomial_term = rep.w0 * binomial_half_entropy(n);
    rep.terms.shifted_term =
        r == 1 ? 0.0
               : (1.0 - rep.w0) *
                     (binomial_half_entropy(n - 1) + std::log2(static_cast<double>(r - 1)));
    rep.terms.weight_entropy = binary_entropy(rep.w0);
    // Same association order as bound_value_at so the two agree exactly.
    rep.bound_bits = rep.terms.binomial_term + rep.terms.weight_entropy + rep.terms.shifted_term;
    rep.special_case = classify(n, r);
    return rep;
}

std::vector<Pmf> conjectured_inputs(std::size_t n, std::size_t r) {
    require_nr(n, r, "conjectured_inputs");
    std::vector<Pmf> inputs;
    inputs.reserve(n);
    const std::size_t ends[2] = {0, r};
    for (std::size_t i = 0; i + 1 < n; ++i) inputs.push_back(Pmf::uniform_on(ends, r));
    const double w0 = conjectured_weight(n, r);
    std::vector<double> last(r + 1, r > 1 ? (1.0 - w0) / static_cast<double>(r - 1) : 0.0);
    last[0] = w0 / 2.0;
    last[r] = w0 / 2.0;
    inputs.emplace_back(std::move(last));
    return inputs;
}

double closed_form_special(std::size_t n, std::size_t r) {
    require_nr(n, r, "closed_form_special");
    double value = 0.0;
    if (n == 1) {
        value = std::log2(static_cast<double>(r + 1));
    } else if (r == 1) {
        value = binomial_half_entropy(n);
    } else if (n == 2) {
        const double s = std::sqrt(2.0);
        const double w0 = s / (static_cast<double>(r - 1) + s);
        value = 1.0 + w0 / 2.0 + (1.0 - w0) * std::log2(static_cast<double>(r - 1)) +
                binary_entropy(w0);
    } else if (n == 3 && r == 2) {
        const double t = std::pow(4.0 / 3.0, 0.75);
        const double w0 = t / (1.0 + t);
        value = 0.75 * (2.0 + (2.0 - std::log2(3.0)) * w0) + binary_entropy(w0);
    } else {
        throw NotSpecialCaseError("closed_form_special: no closed form for n = " +
                                  std::to_string(n) + ", r = " + std::to_string(r));
    }
    const double bound = entropy_lower_bound(n, r).bound_bits;
    if (std::abs(value - bound) > 1e-12) {
        throw std::logic_error("closed_form_special: closed form and lower bound disagree");
    }
    return value;
}

}  // namespace maxent
