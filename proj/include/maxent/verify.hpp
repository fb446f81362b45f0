#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maxent/parallel.hpp"

namespace maxent {

// Monte Carlo verification suites. Trial t draws from stream_for(seed, t), so
// the report is identical for serial and parallel execution.

enum class Suite { ulc, identity, sign, preserve, decomposition };

std::string_view to_string(Suite suite) noexcept;
std::optional<Suite> parse_suite(std::string_view name) noexcept;

struct Violation {
    std::size_t trial = 0;
    std::string check;
    std::string message;
    /// Named numeric vectors sufficient to reproduce the failure.
    std::vector<std::pair<std::string, std::vector<double>>> data;
};

struct SuiteOptions {
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    /// Number of summands and alphabet bound for the ulc suite.
    std::size_t n = 2;
    std::size_t r = 2;
    /// Largest ULC order drawn by the preserve suite.
    std::size_t max_order = 8;
    std::size_t max_witnesses = 32;
    Execution execution = Execution::parallel;
};

struct SuiteReport {
    Suite suite = Suite::ulc;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t checks = 0;
    std::size_t violations = 0;
    /// Worst observed value of the suite's headline statistic (relative error,
    /// certificate slack, ...); see `statistic`.
    double worst = 0.0;
    std::string statistic;
    /// The first max_witnesses violations in trial order.
    std::vector<Violation> witnesses;

    bool clean() const noexcept { return violations == 0; }
};

/// Throws DomainError when trials is 0 or n, r are out of range for the suite.
SuiteReport run_suite(Suite suite, const SuiteOptions& options);

}  // namespace maxent
