#include "maxent/pmf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "maxent/combinatorics.hpp"
#include "maxent/errors.hpp"

namespace maxent {

namespace {

std::atomic<std::uint64_t> g_renormalizations{0};

double total_mass(std::span<const double> v) noexcept {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

void check_weights(std::span<const double> weights, const char* what) {
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw DomainError(std::string(what) + ": weights must be finite and non-negative");
        }
    }
    if (std::abs(total_mass(weights) - 1.0) > kNormTolerance) {
        throw DomainError(std::string(what) + ": weights must sum to 1");
    }
}

}  // namespace

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ValidationError("Pmf: empty probability vector");
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double v = probs_[i];
        if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError("Pmf: entry " + std::to_string(i) +
                                  " is negative or not finite");
        }
    }
    const double total = total_mass(probs_);
    const double drift = std::abs(total - 1.0);
    if (drift > kNormTolerance) {
        throw ValidationError("Pmf: total mass " + std::to_string(total) + " differs from 1");
    }
    if (drift > kRenormThreshold) {
        for (auto& v : probs_) v /= total;
        g_renormalizations.fetch_add(1, std::memory_order_relaxed);
    }
}

Pmf Pmf::uniform(std::size_t top) {
    return Pmf(std::vector<double>(top + 1, 1.0 / static_cast<double>(top + 1)));
}

Pmf Pmf::point_mass(std::size_t at, std::size_t top) {
    if (at > top) throw DomainError("Pmf::point_mass: location beyond support");
    std::vector<double> v(top + 1, 0.0);
    v[at] = 1.0;
    return Pmf(std::move(v));
}

Pmf Pmf::uniform_on(std::span<const std::size_t> points, std::size_t top) {
    if (points.empty()) throw DomainError("Pmf::uniform_on: empty support");
    std::vector<double> v(top + 1, 0.0);
    const double mass = 1.0 / static_cast<double>(points.size());
    for (std::size_t x : points) {
        if (x > top) throw DomainError("Pmf::uniform_on: point beyond support");
        v[x] += mass;
    }
    return Pmf(std::move(v));
}

Pmf Pmf::binomial(std::size_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("Pmf::binomial: p outside [0, 1]");
    std::vector<double> v(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        v[k] = binomial_coefficient(n, k) * std::pow(p, static_cast<double>(k)) *
               std::pow(1.0 - p, static_cast<double>(n - k));
    }
    return Pmf(std::move(v));
}

std::uint64_t renormalization_events() noexcept {
    return g_renormalizations.load(std::memory_order_relaxed);
}

double entropy_bits(std::span<const double> masses) noexcept {
    double h = 0.0;
    for (double p : masses) {
        if (p > kZeroMass) h -= p * std::log2(p);
    }
    return h;
}

void convolve_into(std::span<const double> a, std::span<const double> b,
                   std::span<double> out) noexcept {
    for (auto& v : out) v = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        double* row = out.data() + i;
        for (std::size_t j = 0; j < b.size(); ++j) row[j] += ai * b[j];
    }
}

std::vector<double> convolve_raw(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size() + b.size() - 1);
    convolve_into(a, b, out);
    return out;
}

double entropy(const Pmf& p) noexcept { return entropy_bits(p.probs()); }

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy: p outside [0, 1]");
    const double q[2] = {p, 1.0 - p};
    return entropy_bits(q);
}

Pmf convolve(const Pmf& p, const Pmf& q) { return Pmf(convolve_raw(p.probs(), q.probs())); }

Pmf sum_distribution(std::span<const Pmf> inputs) {
    if (inputs.empty()) throw DomainError("sum_distribution: no inputs");
    std::vector<double> acc = inputs.front().values();
    for (std::size_t i = 1; i < inputs.size(); ++i) acc = convolve_raw(acc, inputs[i].probs());
    return Pmf(std::move(acc));
}

std::vector<double> ResidueDecomposition::weights() const {
    std::vector<double> w;
    w.reserve(classes.size());
    for (const auto& c : classes) w.push_back(c.weight);
    return w;
}

Pmf ResidueDecomposition::conditional(std::size_t j) const {
    if (j >= classes.size()) throw DomainError("ResidueDecomposition: class index out of range");
    if (classes[j].degenerate) {
        throw PreconditionError("ResidueDecomposition: class " + std::to_string(j) +
                                " has zero weight");
    }
    return Pmf(classes[j].masses);
}

double ResidueDecomposition::entropy_by_parts() const {
    double h = 0.0;
    for (const auto& c : classes) {
        if (!c.degenerate) h += c.weight * entropy_bits(c.masses);
    }
    return h + entropy_bits(weights());
}

ResidueDecomposition residue_decompose(const Pmf& p, std::size_t r) {
    if (r < 1) throw DomainError("residue_decompose: modulus must be at least 1");
    ResidueDecomposition out;
    out.r = r;
    out.classes.resize(r);
    const std::size_t size = p.size();
    for (std::size_t j = 0; j < r; ++j) {
        auto& cls = out.classes[j];
        const std::size_t length = j < size ? (size - 1 - j) / r + 1 : 0;
        cls.masses.resize(length);
        double w = 0.0;
        for (std::size_t k = 0; k < length; ++k) {
            cls.masses[k] = p[k * r + j];
            w += cls.masses[k];
        }
        cls.weight = w;
        if (w > 0.0) {
            for (auto& v : cls.masses) v /= w;
        } else {
            cls.degenerate = true;
            for (auto& v : cls.masses) v = 0.0;
        }
    }
    return out;
}

Pmf mixture(std::span<const std::vector<double>> conditionals, std::span<const double> weights,
            std::size_t r) {
    if (r < 1) throw DomainError("mixture: modulus must be at least 1");
    if (conditionals.size() != r || weights.size() != r) {
        throw DomainError("mixture: need exactly r weights and r conditionals");
    }
    check_weights(weights, "mixture");
    // Zero-weight classes still contribute their length, so trailing zeros of a
    // decomposed Pmf survive reassembly.
    std::size_t size = 1;
    for (std::size_t j = 0; j < r; ++j) {
        const auto& c = conditionals[j];
        if (!c.empty()) size = std::max(size, (c.size() - 1) * r + j + 1);
        if (weights[j] <= 0.0) continue;
        if (c.empty()) throw DomainError("mixture: positive-weight class is empty");
        for (double v : c) {
            if (!std::isfinite(v) || v < 0.0) {
                throw ValidationError("mixture: conditional " + std::to_string(j) +
                                      " has a negative entry");
            }
        }
        if (std::abs(total_mass(c) - 1.0) > kNormTolerance) {
            throw ValidationError("mixture: conditional " + std::to_string(j) +
                                  " is not normalized");
        }
    }
    std::vector<double> out(size, 0.0);
    for (std::size_t j = 0; j < r; ++j) {
        if (weights[j] <= 0.0) continue;
        const auto& c = conditionals[j];
        for (std::size_t k = 0; k < c.size(); ++k) out[k * r + j] = weights[j] * c[k];
    }
    return Pmf(std::move(out));
}

Pmf mixture(const ResidueDecomposition& decomposition) {
    std::vector<std::vector<double>> conditionals;
    conditionals.reserve(decomposition.classes.size());
    for (const auto& c : decomposition.classes) conditionals.push_back(c.masses);
    const auto w = decomposition.weights();
    return mixture(conditionals, w, decomposition.r);
}

}  // namespace maxent
