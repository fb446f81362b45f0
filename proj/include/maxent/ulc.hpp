#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "maxent/pmf.hpp"
#include "maxent/random.hpp"

namespace maxent {

// Log-concavity and ultra-log-concavity of non-negative sequences.
//
// Every inequality u_i^2 c_i >= u_{i-1} u_{i+1} d_i is checked literally
// (zeros included, no support-contiguity requirement) with an absolute slack
// of kUlcSlack * max(u)^2. Margins are reported before the slack is applied,
// so a passing sequence may carry a margin of about -1e-17 at an equality case.

inline constexpr double kUlcSlack = 1e-12;

/// Which family of inequalities to test.
struct ConcavityOrder {
    enum class Kind { log_concave, ulc_infinite, ulc_finite } kind = Kind::log_concave;
    std::size_t order = 0;  ///< only used for ulc_finite

    static ConcavityOrder log_concave() { return {Kind::log_concave, 0}; }
    static ConcavityOrder infinite() { return {Kind::ulc_infinite, 0}; }
    static ConcavityOrder finite(std::size_t n) { return {Kind::ulc_finite, n}; }
};

struct InequalityScan {
    bool passed = true;
    /// Interior index of the first violated inequality.
    std::optional<std::size_t> witness;
    /// min over interior i of LHS - RHS, pre-slack; 0 when there is no interior index.
    double margin = 0.0;
};

/// Throws DomainError on a negative entry; for ulc_finite also when the
/// sequence is longer than order + 1.
InequalityScan scan_concavity(std::span<const double> u, ConcavityOrder order);

bool is_log_concave(std::span<const double> u);
bool is_ulc_infinite(std::span<const double> u);
bool is_ulc_order(std::span<const double> u, std::size_t n);

/// True when a zero sits strictly between two positive entries; such
/// sequences make the log-concavity checks degenerate.
bool has_internal_zeros(std::span<const double> u) noexcept;

// ---------------------------------------------------------------------------
// Conditional ULC of a sum, class by class.

struct UlcClassResult {
    std::size_t residue = 0;
    std::size_t order = 0;  ///< n for residue 0, n - 1 otherwise
    double weight = 0.0;
    bool passed = true;
    bool vacuous = false;  ///< zero-weight class
    std::optional<std::size_t> witness;
    double margin = 0.0;
    bool internal_zeros = false;
    std::vector<double> conditional;
};

struct UlcReport {
    std::size_t r = 1;
    std::size_t n = 0;
    std::vector<UlcClassResult> per_class;

    bool all_passed() const noexcept;
};

/// Build S_n from inputs on {0, ..., r}, split it modulo r and test class 0 at
/// order n and every other class at order n - 1.
UlcReport conditional_ulc_report(std::span<const Pmf> inputs, std::size_t r);

/// Slack of the order-2 certificate for two inputs on {0, ..., r}:
/// returns {lhs, rhs} with lhs = P(r)^2 - 4 P(0) P(2r) and
/// rhs = (P1(0) P2(r) - P1(r) P2(0))^2, where P is the law of the sum.
struct CertificateGap {
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 0.0;
};
CertificateGap pair_certificate(const Pmf& first, const Pmf& second);

// ---------------------------------------------------------------------------
// Ternary triples: 27 values x[a1 a2 a3], a_i in {0, 1, 2}.

class TernaryTriple {
public:
    TernaryTriple() { x_.fill(0.0); }
    /// Free values; throws DomainError on a negative or non-finite entry.
    explicit TernaryTriple(const std::array<double, 27>& values);
    /// x[a1 a2 a3] = p1[a1] p2[a2] p3[a3] for non-negative length-3 factors.
    static TernaryTriple from_product(std::span<const double> p1, std::span<const double> p2,
                                      std::span<const double> p3);

    static constexpr std::size_t index(std::size_t a1, std::size_t a2, std::size_t a3) noexcept {
        return 9 * a1 + 3 * a2 + a3;
    }
    double at(std::size_t a1, std::size_t a2, std::size_t a3) const noexcept {
        return x_[index(a1, a2, a3)];
    }
    const std::array<double, 27>& values() const noexcept { return x_; }

    /// Law of a1 + a2 + a3 under x (masses on {0, ..., 6}); not normalized for free values.
    std::array<double, 7> sum_masses() const noexcept;

    /// Rank-one test x[abc] x[000]^2 == x[a00] x[0b0] x[00c] (relative tolerance).
    bool is_product_formed(double rel_tol = 1e-9) const noexcept;

private:
    std::array<double, 27> x_{};
};

enum class Identity {
    pom,   ///< P(2)^2 - 3 P(0) P(4) against its sum-of-squares expansion
    pom2,  ///< P(3)^2 - 4 P(1) P(5) against its expansion
};

struct IdentityGap {
    double lhs = 0.0;
    double rhs = 0.0;
    /// Sum of magnitudes of the terms on both sides; the rounding scale for comparisons.
    double scale = 0.0;

    double relative_error() const noexcept;
};

IdentityGap identity_gap(Identity which, const TernaryTriple& x);

/// Sign lemma: if x201 - x021 and x120 - x102 share a nonzero sign s, then
/// x210 - x012 also has sign s. Vacuously true otherwise. Throws
/// PreconditionError unless x is product formed with every entry above threshold.
bool sign_lemma_check(const TernaryTriple& x, double threshold = 1e-9);

// ---------------------------------------------------------------------------

/// is_ulc_order(u * (1 - q, q), m + 1). Throws PreconditionError when u is not
/// ULC of order m, DomainError when q is outside [0, 1].
bool convolve_bernoulli_preserves(std::span<const double> u, std::size_t m, double q);

struct UlcSampleStats {
    std::size_t rejection_draws = 0;
    std::size_t accepted_by_rejection = 0;
    std::size_t fallback_constructions = 0;
};

/// Random probability sequence that is ULC of order m, with length between 1
/// and m + 1. Tries rejection from Dirichlet draws first and falls back to
/// u_i = C(m, i) exp(c_i) with c concave.
std::vector<double> random_ulc_sequence(SplitMix64& rng, std::size_t m,
                                        UlcSampleStats* stats = nullptr);

}  // namespace maxent
