#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "maxent/parallel.hpp"
#include "maxent/pmf.hpp"

namespace maxent {

enum class StepRule { fixed, backtracking };

std::string_view to_string(StepRule rule) noexcept;

struct OptimizerConfig {
    std::size_t starts = 64;
    std::uint64_t seed = 1;
    std::size_t max_outer_sweeps = 10000;
    /// Frank-Wolfe gap at which a block counts as stationary.
    double inner_tol = 1e-7;
    /// A sweep improving the objective by less than this ends a start.
    double outer_tol = 1e-12;
    bool include_conjectured_start = true;
    StepRule step_rule = StepRule::backtracking;
    std::size_t max_inner_iterations = 20000;
    /// Initial (and, for StepRule::fixed, constant) mirror step on the bit-scaled gradient.
    double initial_step = 0.6931471805599453;
    Execution execution = Execution::parallel;

    /// Throws DomainError unless starts >= 1 and both tolerances are positive.
    void validate() const;
};

struct StartRecord {
    std::size_t start_id = 0;
    double final_value = 0.0;
    std::size_t sweeps = 0;
    bool converged = false;
    bool conjectured = false;
};

/// A cluster of per-start final values that agree within 1e-7 bits.
struct LocalOptimum {
    double value = 0.0;
    std::size_t count = 0;
};

struct OptimizationResult {
    std::size_t n = 0;
    std::size_t r = 0;
    /// Number of blocks free on {0, ..., r}; blocks past it live on {0, r}.
    std::size_t free_blocks = 0;
    std::vector<Pmf> best_inputs;
    double best_value = 0.0;
    std::size_t best_start = 0;
    std::vector<StartRecord> per_start;
    double gap_to_bound = 0.0;
    /// Objective after each outer sweep of the winning start.
    std::vector<double> best_trace;
    std::vector<LocalOptimum> local_optima;

    double converged_fraction() const noexcept;
};

/// dH(S_n)/dP_{X_i}(a) in bits for each a in {0, ..., r}. Throws DomainError on a bad block index.
std::vector<double> objective_gradient(std::span<const Pmf> inputs, std::size_t block);

struct BlockAscentResult {
    Pmf block;
    bool converged = false;
    std::size_t iterations = 0;
    double fw_gap = 0.0;
    /// Objective before the first step and after every accepted step.
    std::vector<double> trace;
};

/// Maximize H(S_n) over block i with the other blocks held fixed.
BlockAscentResult block_ascend(std::span<const Pmf> inputs, std::size_t block,
                               const OptimizerConfig& config);

/// Multistart cyclic block ascent over the full product of simplices.
OptimizationResult multistart_maximize(std::size_t n, std::size_t r, const OptimizerConfig& config);

/// Same as multistart_maximize with blocks free_blocks+1 ... n pinned to support {0, r}.
/// Throws DomainError unless 1 <= free_blocks <= n.
OptimizationResult restricted_maximize(std::size_t n, std::size_t r, std::size_t free_blocks,
                                       const OptimizerConfig& config);

}  // namespace maxent
