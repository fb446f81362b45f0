#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace maxent {

/// Absolute tolerance on the total mass of a valid Pmf.
inline constexpr double kNormTolerance = 1e-12;
/// Normalization drift above this is corrected (and counted) on construction.
inline constexpr double kRenormThreshold = 1e-14;
/// Masses at or below this contribute nothing to an entropy sum.
inline constexpr double kZeroMass = 1e-300;

/// Probability mass function on {0, 1, ..., top}. Immutable once built; the
/// constructor validates non-negativity and normalization.
class Pmf {
public:
    /// Throws ValidationError on a negative or non-finite entry, an empty
    /// vector, or total mass off by more than kNormTolerance.
    explicit Pmf(std::vector<double> probs);

    static Pmf uniform(std::size_t top);
    static Pmf point_mass(std::size_t at, std::size_t top);
    /// Uniform on the listed support points, embedded in {0, ..., top}.
    static Pmf uniform_on(std::span<const std::size_t> points, std::size_t top);
    /// Binomial(n, p) masses on {0, ..., n}.
    static Pmf binomial(std::size_t n, double p);

    std::span<const double> probs() const noexcept { return probs_; }
    const std::vector<double>& values() const noexcept { return probs_; }
    std::size_t top() const noexcept { return probs_.size() - 1; }
    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }

    bool operator==(const Pmf&) const = default;

private:
    std::vector<double> probs_;
};

/// Number of times a Pmf was renormalized because its drift exceeded
/// kRenormThreshold (process-wide, for diagnostics).
std::uint64_t renormalization_events() noexcept;

// ---------------------------------------------------------------------------
// Raw kernels on spans. No validation; used by the optimizer and oracles in
// their inner loops.

/// -sum p log2 p with 0 log 0 := 0 (entries <= kZeroMass are skipped).
double entropy_bits(std::span<const double> masses) noexcept;

/// out[s] = sum_a a[a] b[s - a]; out must have size a.size() + b.size() - 1.
void convolve_into(std::span<const double> a, std::span<const double> b,
                   std::span<double> out) noexcept;

std::vector<double> convolve_raw(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------

/// Shannon entropy in bits.
double entropy(const Pmf& p) noexcept;

/// h(p) = H(p, 1 - p). Throws DomainError outside [0, 1].
double binary_entropy(double p);

Pmf convolve(const Pmf& p, const Pmf& q);

/// Distribution of the sum of independent variables (left fold of convolve).
/// Throws DomainError on an empty list.
Pmf sum_distribution(std::span<const Pmf> inputs);

/// One residue class j of a decomposition modulo r.
struct ResidueClass {
    double weight = 0.0;
    /// masses[k] = P(S = k r + j | S = j mod r); all zeros when degenerate.
    std::vector<double> masses;
    /// True when the class has zero weight; masses are then not normalized.
    bool degenerate = false;
};

struct ResidueDecomposition {
    std::size_t r = 1;
    std::vector<ResidueClass> classes;

    std::vector<double> weights() const;
    /// Conditional law of class j. Throws PreconditionError for a degenerate class.
    Pmf conditional(std::size_t j) const;
    /// sum_j w_j H(class j) + H(w), with H of a degenerate class taken as 0.
    double entropy_by_parts() const;
};

/// Split p by residue of the support index modulo r. Throws DomainError when r < 1.
ResidueDecomposition residue_decompose(const Pmf& p, std::size_t r);

/// Inverse of residue_decompose: entry k r + j receives weights[j] * conditionals[j][k].
/// Conditionals with positive weight must be normalized; zero-weight ones are ignored.
/// Throws DomainError on a count mismatch or invalid weights.
Pmf mixture(std::span<const std::vector<double>> conditionals, std::span<const double> weights,
            std::size_t r);

Pmf mixture(const ResidueDecomposition& decomposition);

}  // namespace maxent
