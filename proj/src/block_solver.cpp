#include "block_solver.hpp"

#include <algorithm>
#include <cmath>

#include "maxent/pmf.hpp"

namespace maxent::detail {

namespace {

constexpr double kLog2e = 1.4426950408889634;
constexpr double kMinStep = 1e-30;
constexpr double kMaxStep = 1e6;

bool is_allowed(std::span<const unsigned char> allowed, std::size_t a) noexcept {
    return allowed.empty() || allowed[a] != 0;
}

// H(after) - H(before), where after = before + delta. Each term uses
// f(P + d) - f(P) = -d log2(P + d) - P log2(1 + d / P), which keeps the
// difference accurate relative to its own size rather than to H.
double entropy_change(std::span<const double> before, std::span<const double> after,
                      std::span<const double> delta) noexcept {
    double change = 0.0;
    for (std::size_t s = 0; s < before.size(); ++s) {
        const double p = before[s];
        const double q = after[s];
        if (p <= kZeroMass) {
            if (q > kZeroMass) change -= q * std::log2(q);
        } else if (q <= kZeroMass) {
            change += p * std::log2(p);
        } else {
            change -= delta[s] * std::log2(q) + p * std::log1p(delta[s] / p) * kLog2e;
        }
    }
    return change;
}

}  // namespace

void gradient_into(std::span<const double> other, std::span<const double> sum_law,
                   std::span<double> gradient) {
    thread_local std::vector<double> logs;
    logs.resize(sum_law.size());
    for (std::size_t s = 0; s < sum_law.size(); ++s) {
        logs[s] = std::log2(sum_law[s] > kZeroMass ? sum_law[s] : kZeroMass) + kLog2e;
    }
    for (std::size_t a = 0; a < gradient.size(); ++a) {
        double acc = 0.0;
        for (std::size_t t = 0; t < other.size(); ++t) acc += other[t] * logs[t + a];
        gradient[a] = -acc;
    }
}

BlockSolve solve_block(std::span<const double> other, std::vector<double>& p,
                       std::span<const unsigned char> allowed, const BlockSolveParams& params,
                       std::vector<double>* trace) {
    const std::size_t width = p.size();
    std::vector<double> law(other.size() + width - 1);
    std::vector<double> trial_law(law.size());
    std::vector<double> grad(width);
    std::vector<double> candidate(width);
    std::vector<double> step_delta(width);
    std::vector<double> law_delta(law.size());

    convolve_into(other, p, law);
    BlockSolve out;
    out.value = entropy_bits(law);
    if (trace) trace->push_back(out.value);
    double step = params.initial_step;

    for (;;) {
        gradient_into(other, law, grad);
        double top = -INFINITY;
        double mean = 0.0;
        for (std::size_t a = 0; a < width; ++a) {
            if (!is_allowed(allowed, a)) continue;
            top = std::max(top, grad[a]);
            mean += p[a] * grad[a];
        }
        out.fw_gap = std::max(0.0, top - mean);
        if (out.value + out.fw_gap < params.stop_below) {
            out.pruned = true;
            return out;
        }
        if (out.fw_gap <= params.tolerance) {
            out.converged = true;
            return out;
        }
        if (out.iterations >= params.max_iterations) return out;
        ++out.iterations;

        bool accepted = false;
        while (!accepted) {
            double total = 0.0;
            for (std::size_t a = 0; a < width; ++a) {
                candidate[a] = is_allowed(allowed, a) ? p[a] * std::exp(step * (grad[a] - top)) : 0.0;
                total += candidate[a];
            }
            for (std::size_t a = 0; a < width; ++a) {
                candidate[a] /= total;
                step_delta[a] = candidate[a] - p[a];
            }
            convolve_into(other, candidate, trial_law);
            convolve_into(other, step_delta, law_delta);
            const double change = entropy_change(law, trial_law, law_delta);
            if (change >= 0.0) {
                accepted = true;
                p.swap(candidate);
                law.swap(trial_law);
                out.value += change;
                if (trace) trace->push_back(out.value);
                if (params.backtracking) step = std::min(step * 2.0, kMaxStep);
            } else if (params.backtracking && step > kMinStep) {
                step *= 0.5;
            } else {
                // No admissible step: stalled short of the tolerance.
                return out;
            }
        }
    }
}

}  // namespace maxent::detail
