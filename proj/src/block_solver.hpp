#pragma once

// Inner solver shared by the optimizer and the grid oracle's pruning bound.
// H(R * p) is concave in p, so the Frank-Wolfe gap max_a g_a - <p, g> bounds
// the distance to the block optimum from above.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace maxent::detail {

struct BlockSolveParams {
    double tolerance = 1e-7;
    std::size_t max_iterations = 20000;
    double initial_step = 0.6931471805599453;
    bool backtracking = true;
    /// Return as soon as value + fw_gap drops below this (pruning mode).
    double stop_below = -std::numeric_limits<double>::infinity();
};

struct BlockSolve {
    double value = 0.0;
    double fw_gap = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    bool pruned = false;
};

/// Gradient of H(R * p) with respect to p (bits); sum_law is R * p.
void gradient_into(std::span<const double> other, std::span<const double> sum_law,
                   std::span<double> gradient);

/// Mirror ascent on block p (updated in place). `allowed[a] == 0` pins p[a] at zero;
/// an empty mask allows every entry. Accepted objective values are appended to trace.
BlockSolve solve_block(std::span<const double> other, std::vector<double>& p,
                       std::span<const unsigned char> allowed, const BlockSolveParams& params,
                       std::vector<double>* trace = nullptr);

}  // namespace maxent::detail
