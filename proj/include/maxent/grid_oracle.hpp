#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "maxent/parallel.hpp"
#include "maxent/pmf.hpp"

namespace maxent {

// Brute-force maximum of H(S_n) over inputs whose masses are multiples of 1/K.
//
// H(S_n) is symmetric in its inputs, so only non-decreasing tuples of grid
// points (multisets) are visited; the maximizing tuple reported is the
// lexicographically smallest one attaining the maximum, exactly as a plain
// nested loop over all tuples would report it.
//
// Two methods produce identical results:
//  - exhaustive: evaluate every multiset.
//  - branch_and_bound: enumerate the first n-1 inputs, bound the best choice
//    of the last input from above by concavity (value plus Frank-Wolfe gap of
//    a continuous block solve), and only enumerate last inputs whose bound
//    beats the incumbent.

enum class GridMethod { automatic, exhaustive, branch_and_bound };

std::string_view to_string(GridMethod method) noexcept;

struct GridOracleOptions {
    /// Maximum number of enumerated tuples (exhaustive) or enumerated
    /// (n-1)-prefixes (branch_and_bound).
    std::uint64_t budget = 100'000'000;
    /// automatic picks exhaustive when it fits the budget, else branch_and_bound.
    GridMethod method = GridMethod::automatic;
    Execution execution = Execution::parallel;
};

struct GridOracleResult {
    double value = 0.0;
    std::vector<Pmf> argmax;
    GridMethod method = GridMethod::exhaustive;
    /// Grid points per input: C(K + r, r).
    std::uint64_t points_per_input = 0;
    /// Full tuples whose objective was evaluated.
    std::uint64_t tuples_evaluated = 0;
    /// Prefixes discarded by the bound (branch_and_bound only).
    std::uint64_t prefixes_pruned = 0;
};

/// Number of multisets of size k drawn from `points` items, saturating at UINT64_MAX.
std::uint64_t multiset_count(std::uint64_t points, std::size_t k) noexcept;

/// Throws DomainError for n, r, K < 1 and ResourceError when the chosen
/// method's enumeration exceeds options.budget.
GridOracleResult grid_oracle_search(std::size_t n, std::size_t r, std::size_t resolution,
                                    const GridOracleOptions& options = {});

inline double grid_oracle(std::size_t n, std::size_t r, std::size_t resolution,
                          const GridOracleOptions& options = {}) {
    return grid_oracle_search(n, r, resolution, options).value;
}

}  // namespace maxent
