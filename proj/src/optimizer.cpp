#include "maxent/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "block_solver.hpp"
#include "maxent/bounds.hpp"
#include "maxent/errors.hpp"
#include "maxent/random.hpp"

namespace maxent {

namespace {

using Blocks = std::vector<std::vector<double>>;
using Mask = std::vector<unsigned char>;

constexpr double kStartPerturbation = 1e-12;
constexpr double kOptimumClusterWidth = 1e-7;

std::vector<double> law_without(const Blocks& blocks, std::size_t skip) {
    std::vector<double> acc{1.0};
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i == skip) continue;
        acc = convolve_raw(acc, blocks[i]);
    }
    return acc;
}

detail::BlockSolveParams solve_params(const OptimizerConfig& config) {
    detail::BlockSolveParams params;
    params.tolerance = config.inner_tol;
    params.max_iterations = config.max_inner_iterations;
    params.initial_step = config.initial_step;
    params.backtracking = config.step_rule == StepRule::backtracking;
    return params;
}

struct StartOutcome {
    std::vector<Pmf> inputs;
    double value = 0.0;
    std::vector<double> trace;
    std::size_t sweeps = 0;
    bool converged = false;
};

StartOutcome run_start(Blocks blocks, const std::vector<Mask>& masks, const OptimizerConfig& config) {
    const auto params = solve_params(config);
    StartOutcome out;
    double value = entropy_bits(law_without(blocks, blocks.size()));
    out.trace.push_back(value);
    for (std::size_t sweep = 1; sweep <= config.max_outer_sweeps; ++sweep) {
        const double previous = value;
        bool stationary = true;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const auto other = law_without(blocks, i);
            const auto solved = detail::solve_block(other, blocks[i], masks[i], params);
            value = solved.value;
            stationary = stationary && solved.converged;
        }
        out.trace.push_back(value);
        out.sweeps = sweep;
        if (value - previous < config.outer_tol) {
            out.converged = stationary;
            break;
        }
    }
    out.inputs.reserve(blocks.size());
    for (auto& b : blocks) out.inputs.emplace_back(std::move(b));
    out.value = entropy(sum_distribution(out.inputs));
    return out;
}

std::vector<Mask> support_masks(std::size_t n, std::size_t r, std::size_t free_blocks) {
    std::vector<Mask> masks(n, Mask(r + 1, 1));
    for (std::size_t i = free_blocks; i < n; ++i) {
        for (std::size_t a = 1; a < r; ++a) masks[i][a] = 0;
    }
    return masks;
}

Blocks random_blocks(SplitMix64& rng, const std::vector<Mask>& masks) {
    Blocks blocks;
    blocks.reserve(masks.size());
    for (const auto& mask : masks) {
        std::size_t allowed = 0;
        for (auto m : mask) allowed += m;
        const auto draw = dirichlet_uniform(rng, allowed);
        std::vector<double> block(mask.size(), 0.0);
        std::size_t k = 0;
        for (std::size_t a = 0; a < mask.size(); ++a) {
            if (mask[a]) block[a] = draw[k++];
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

// The mixture block goes first so restricted runs keep it among the free blocks.
Blocks conjectured_blocks(std::size_t n, std::size_t r, const std::vector<Mask>& masks,
                          bool mixture_first) {
    auto inputs = conjectured_inputs(n, r);
    if (mixture_first) std::rotate(inputs.rbegin(), inputs.rbegin() + 1, inputs.rend());
    Blocks blocks;
    for (std::size_t i = 0; i < n; ++i) {
        auto block = inputs[i].values();
        double total = 0.0;
        for (std::size_t a = 0; a < block.size(); ++a) {
            if (masks[i][a] && block[a] == 0.0) block[a] = kStartPerturbation;
            total += block[a];
        }
        for (auto& v : block) v /= total;
        blocks.push_back(std::move(block));
    }
    return blocks;
}

std::vector<LocalOptimum> cluster_optima(const std::vector<StartRecord>& starts) {
    std::vector<double> values;
    for (const auto& s : starts) values.push_back(s.final_value);
    std::sort(values.begin(), values.end(), std::greater<>());
    std::vector<LocalOptimum> clusters;
    for (double v : values) {
        if (!clusters.empty() && clusters.back().value - v <= kOptimumClusterWidth) {
            ++clusters.back().count;
        } else {
            clusters.push_back({v, 1});
        }
    }
    return clusters;
}

OptimizationResult maximize(std::size_t n, std::size_t r, std::size_t free_blocks,
                            const OptimizerConfig& config) {
    if (n < 1 || r < 1) throw DomainError("optimizer: need n >= 1 and r >= 1");
    if (free_blocks < 1 || free_blocks > n) {
        throw DomainError("optimizer: free block count must lie in [1, n]");
    }
    config.validate();
    const auto masks = support_masks(n, r, free_blocks);
    const std::size_t total_starts = config.starts + (config.include_conjectured_start ? 1 : 0);
    const std::uint64_t cell_seed =
        derive_seed(config.seed, (static_cast<std::uint64_t>(n) << 32) ^
                                     (static_cast<std::uint64_t>(free_blocks) << 16) ^ r);

    std::vector<StartOutcome> outcomes(total_starts);
    for_each_index(config.execution, total_starts, [&](std::size_t id) {
        Blocks initial;
        if (id < config.starts) {
            auto rng = stream_for(cell_seed, id);
            initial = random_blocks(rng, masks);
        } else {
            initial = conjectured_blocks(n, r, masks, free_blocks < n);
        }
        outcomes[id] = run_start(std::move(initial), masks, config);
    });

    OptimizationResult result;
    result.n = n;
    result.r = r;
    result.free_blocks = free_blocks;
    std::size_t best = 0;
    for (std::size_t id = 0; id < total_starts; ++id) {
        const auto& o = outcomes[id];
        result.per_start.push_back({id, o.value, o.sweeps, o.converged, id >= config.starts});
        if (o.value > outcomes[best].value) best = id;
    }
    result.best_start = best;
    result.best_inputs = outcomes[best].inputs;
    result.best_value = outcomes[best].value;
    result.best_trace = outcomes[best].trace;
    result.gap_to_bound = result.best_value - entropy_lower_bound(n, r).bound_bits;
    result.local_optima = cluster_optima(result.per_start);
    return result;
}

}  // namespace

std::string_view to_string(StepRule rule) noexcept {
    return rule == StepRule::fixed ? "fixed" : "backtracking";
}

void OptimizerConfig::validate() const {
    if (starts < 1) throw DomainError("OptimizerConfig: starts must be at least 1");
    if (!(inner_tol > 0.0) || !(outer_tol > 0.0)) {
        throw DomainError("OptimizerConfig: tolerances must be positive");
    }
    if (!(initial_step > 0.0)) throw DomainError("OptimizerConfig: step must be positive");
}

double OptimizationResult::converged_fraction() const noexcept {
    if (per_start.empty()) return 0.0;
    std::size_t ok = 0;
    for (const auto& s : per_start) ok += s.converged ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(per_start.size());
}

std::vector<double> objective_gradient(std::span<const Pmf> inputs, std::size_t block) {
    if (block >= inputs.size()) {
        throw DomainError("objective_gradient: block index " + std::to_string(block) +
                          " out of range");
    }
    std::vector<double> other{1.0};
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (i != block) other = convolve_raw(other, inputs[i].probs());
    }
    const auto law = convolve_raw(other, inputs[block].probs());
    std::vector<double> gradient(inputs[block].size());
    detail::gradient_into(other, law, gradient);
    return gradient;
}

BlockAscentResult block_ascend(std::span<const Pmf> inputs, std::size_t block,
                               const OptimizerConfig& config) {
    if (block >= inputs.size()) throw DomainError("block_ascend: block index out of range");
    std::vector<double> other{1.0};
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (i != block) other = convolve_raw(other, inputs[i].probs());
    }
    auto p = inputs[block].values();
    std::vector<double> trace;
    const auto solved = detail::solve_block(other, p, {}, solve_params(config), &trace);
    return BlockAscentResult{Pmf(std::move(p)), solved.converged, solved.iterations, solved.fw_gap,
                             std::move(trace)};
}

OptimizationResult multistart_maximize(std::size_t n, std::size_t r, const OptimizerConfig& config) {
    return maximize(n, r, n, config);
}

OptimizationResult restricted_maximize(std::size_t n, std::size_t r, std::size_t free_blocks,
                                       const OptimizerConfig& config) {
    return maximize(n, r, free_blocks, config);
}

}  // namespace maxent
