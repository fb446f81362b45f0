#include "maxent/ulc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxent/combinatorics.hpp"
#include "maxent/errors.hpp"

namespace maxent {

namespace {

int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

}  // namespace

InequalityScan scan_concavity(std::span<const double> u, ConcavityOrder order) {
    double peak = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(u[i] >= 0.0) || !std::isfinite(u[i])) {
            throw DomainError("scan_concavity: entry " + std::to_string(i) + " is negative");
        }
        peak = std::max(peak, u[i]);
    }
    using Kind = ConcavityOrder::Kind;
    if (order.kind == Kind::ulc_finite && u.size() > order.order + 1) {
        throw DomainError("scan_concavity: sequence longer than order + 1");
    }
    const double slack = kUlcSlack * peak * peak;
    InequalityScan scan;
    bool first = true;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double sq = u[i] * u[i];
        const double cross = u[i - 1] * u[i + 1];
        double lhs = sq;
        double rhs = cross;
        const double di = static_cast<double>(i);
        if (order.kind == Kind::ulc_infinite) {
            lhs = di * sq;
            rhs = (di + 1.0) * cross;
        } else if (order.kind == Kind::ulc_finite) {
            const double n = static_cast<double>(order.order);
            lhs = di * (n - di) * sq;
            rhs = (di + 1.0) * (n - di + 1.0) * cross;
        }
        const double gap = lhs - rhs;
        if (first || gap < scan.margin) scan.margin = gap;
        first = false;
        if (gap < -slack && !scan.witness) {
            scan.passed = false;
            scan.witness = i;
        }
    }
    return scan;
}

bool is_log_concave(std::span<const double> u) {
    return scan_concavity(u, ConcavityOrder::log_concave()).passed;
}

bool is_ulc_infinite(std::span<const double> u) {
    return scan_concavity(u, ConcavityOrder::infinite()).passed;
}

bool is_ulc_order(std::span<const double> u, std::size_t n) {
    return scan_concavity(u, ConcavityOrder::finite(n)).passed;
}

bool has_internal_zeros(std::span<const double> u) noexcept {
    std::size_t first = u.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] > 0.0) {
            first = std::min(first, i);
            last = i;
        }
    }
    for (std::size_t i = first; i < last; ++i) {
        if (u[i] == 0.0) return true;
    }
    return false;
}

bool UlcReport::all_passed() const noexcept {
    return std::all_of(per_class.begin(), per_class.end(),
                       [](const UlcClassResult& c) { return c.passed; });
}

UlcReport conditional_ulc_report(std::span<const Pmf> inputs, std::size_t r) {
    if (inputs.empty()) throw DomainError("conditional_ulc_report: no inputs");
    if (r < 1) throw DomainError("conditional_ulc_report: r must be at least 1");
    for (const auto& p : inputs) {
        if (p.top() != r) {
            throw PreconditionError("conditional_ulc_report: every input must live on {0, ..., r}");
        }
    }
    const Pmf sum = sum_distribution(inputs);
    const auto decomposition = residue_decompose(sum, r);
    UlcReport report;
    report.r = r;
    report.n = inputs.size();
    for (std::size_t j = 0; j < r; ++j) {
        const auto& cls = decomposition.classes[j];
        UlcClassResult res;
        res.residue = j;
        res.order = j == 0 ? report.n : report.n - 1;
        res.weight = cls.weight;
        res.conditional = cls.masses;
        if (cls.degenerate) {
            res.vacuous = true;
        } else {
            const auto scan = scan_concavity(cls.masses, ConcavityOrder::finite(res.order));
            res.passed = scan.passed;
            res.witness = scan.witness;
            res.margin = scan.margin;
            res.internal_zeros = has_internal_zeros(cls.masses);
        }
        report.per_class.push_back(std::move(res));
    }
    return report;
}

CertificateGap pair_certificate(const Pmf& first, const Pmf& second) {
    const std::size_t r = first.top();
    if (second.top() != r) throw PreconditionError("pair_certificate: inputs need a common r");
    const auto sum = convolve_raw(first.probs(), second.probs());
    CertificateGap gap;
    const double mid = sum[r] * sum[r];
    const double ends = 4.0 * sum[0] * sum[2 * r];
    gap.lhs = mid - ends;
    const double d = first[0] * second[r] - first[r] * second[0];
    gap.rhs = d * d;
    gap.scale = mid + ends;
    return gap;
}

TernaryTriple::TernaryTriple(const std::array<double, 27>& values) : x_(values) {
    for (double v : x_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError("TernaryTriple: entries must be finite and non-negative");
        }
    }
}

TernaryTriple TernaryTriple::from_product(std::span<const double> p1, std::span<const double> p2,
                                          std::span<const double> p3) {
    if (p1.size() != 3 || p2.size() != 3 || p3.size() != 3) {
        throw DomainError("TernaryTriple::from_product: factors must have three entries");
    }
    std::array<double, 27> x{};
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c) x[index(a, b, c)] = p1[a] * p2[b] * p3[c];
    return TernaryTriple(x);
}

std::array<double, 7> TernaryTriple::sum_masses() const noexcept {
    std::array<double, 7> p{};
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c) p[a + b + c] += at(a, b, c);
    return p;
}

bool TernaryTriple::is_product_formed(double rel_tol) const noexcept {
    const double base = at(0, 0, 0);
    if (!(base > 0.0)) return false;
    const double base2 = base * base;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c) {
                const double left = at(a, b, c) * base2;
                const double right = at(a, 0, 0) * at(0, b, 0) * at(0, 0, c);
                if (std::abs(left - right) > rel_tol * std::max(std::abs(left), std::abs(right))) {
                    return false;
                }
            }
    return true;
}

double IdentityGap::relative_error() const noexcept {
    if (scale == 0.0) return lhs == rhs ? 0.0 : INFINITY;
    return std::abs(lhs - rhs) / scale;
}

IdentityGap identity_gap(Identity which, const TernaryTriple& t) {
    const auto P = t.sum_masses();
    auto x = [&t](int code) { return t.at(code / 100, (code / 10) % 10, code % 10); };
    IdentityGap gap;
    if (which == Identity::pom) {
        const double sq = P[2] * P[2];
        const double cross = 3.0 * P[0] * P[4];
        gap.lhs = sq - cross;

        const double s1 = x(200) - x(20) - x(11);
        const double s2 = x(20) - x(2) - x(101);
        const double s3 = x(2) - x(200) - x(110);
        const double squares = 0.5 * (s1 * s1 + s2 * s2 + s3 * s3);
        const double diag = 0.5 * (x(110) * x(110) + x(101) * x(101) + x(11) * x(11));
        const double mixed = x(200) * x(110) + x(20) * x(11) + x(2) * x(101);
        const double doubled = 2.0 * (x(200) * x(101) + x(20) * x(110) + x(2) * x(11) +
                                      x(110) * x(101) + x(110) * x(11) + x(101) * x(11));
        gap.rhs = squares + diag + mixed + doubled;
        gap.scale = sq + cross + squares + diag + mixed + doubled;
    } else {
        const double sq = P[3] * P[3];
        const double cross = 4.0 * P[1] * P[5];
        gap.lhs = sq - cross;

        const double d1 = x(201) - x(21);
        const double d2 = x(120) - x(102);
        const double d3 = x(210) - x(12);
        const double lead = (d3 + d1 + d2) * (d3 + d1 + d2);
        const double product = 4.0 * d1 * d2;
        const double x111 = x(111);
        const double tail =
            x111 * x111 + 2.0 * x111 * (x(210) + x(201) + x(21) + x(120) + x(12) + x(102));
        gap.rhs = lead - product + tail;
        gap.scale = sq + cross + lead + std::abs(product) + tail;
    }
    return gap;
}

bool sign_lemma_check(const TernaryTriple& x, double threshold) {
    for (double v : x.values()) {
        if (!(v > threshold)) {
            throw PreconditionError("sign_lemma_check: entries must exceed the positivity threshold");
        }
    }
    if (!x.is_product_formed()) {
        throw PreconditionError("sign_lemma_check: triple is not product formed");
    }
    const int s1 = sign_of(x.at(2, 0, 1) - x.at(0, 2, 1));
    const int s2 = sign_of(x.at(1, 2, 0) - x.at(1, 0, 2));
    if (s1 == 0 || s1 != s2) return true;
    return sign_of(x.at(2, 1, 0) - x.at(0, 1, 2)) == s1;
}

bool convolve_bernoulli_preserves(std::span<const double> u, std::size_t m, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("convolve_bernoulli_preserves: q outside [0, 1]");
    if (u.empty() || u.size() > m + 1 || !is_ulc_order(u, m)) {
        throw PreconditionError("convolve_bernoulli_preserves: input is not ULC of the given order");
    }
    const double bernoulli[2] = {1.0 - q, q};
    const auto w = convolve_raw(u, bernoulli);
    return is_ulc_order(w, m + 1);
}

std::vector<double> random_ulc_sequence(SplitMix64& rng, std::size_t m, UlcSampleStats* stats) {
    const std::size_t length =
        1 + std::min(m, static_cast<std::size_t>(rng.uniform() * static_cast<double>(m + 1)));
    constexpr int kRejectionAttempts = 16;
    for (int attempt = 0; attempt < kRejectionAttempts; ++attempt) {
        auto draw = dirichlet_uniform(rng, length);
        if (stats) ++stats->rejection_draws;
        if (is_ulc_order(draw, m)) {
            if (stats) ++stats->accepted_by_rejection;
            return draw;
        }
    }
    if (stats) ++stats->fallback_constructions;
    // Concave exponent: slopes only decrease.
    std::vector<double> u(length);
    double exponent = 0.0;
    double slope = 6.0 * rng.uniform() - 3.0;
    for (std::size_t i = 0; i < length; ++i) {
        if (i > 0) {
            exponent += slope;
            slope -= -std::log1p(-rng.uniform());
        }
        u[i] = binomial_coefficient(m, i) * std::exp(exponent);
    }
    double total = 0.0;
    for (double v : u) total += v;
    for (auto& v : u) v /= total;
    return u;
}

}  // namespace maxent
