#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace maxent::cli {

enum ExitCode : int {
    kOk = 0,
    kViolations = 1,
    kUsage = 2,
    kDomain = 3,
    kIo = 4,
};

/// Looks up an environment variable; injectable so tests can control it.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> process_env(const std::string& name);

/// Run one CLI invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = process_env);

inline constexpr const char* kSweepHeader =
    "n,r,bound_bits,numeric_max_bits,gap,proven_case,starts_used,converged_fraction,wall_time_ms";

/// Gap tolerance for equality with the bound.
inline constexpr double kGapTolerance = 1e-6;

struct SweepRow {
    std::size_t n = 0;
    std::size_t r = 0;
    double bound_bits = 0.0;
    double numeric_max_bits = 0.0;
    double gap = 0.0;
    bool proven_case = false;
    std::size_t starts_used = 0;
    double converged_fraction = 0.0;
    double wall_time_ms = 0.0;
};

struct SweepOptions {
    std::size_t n_min = 1;
    std::size_t n_max = 3;
    std::size_t r_min = 1;
    std::size_t r_max = 3;
    std::size_t starts = 64;
    std::uint64_t seed = 1;
    double tol = 1e-7;
    /// Free blocks for restricted runs; 0 means every block is free.
    std::size_t ell = 0;
    bool timing = true;
};

/// True for the proven full cases and for restricted runs with ell <= 2, or
/// ell <= 3 when r = 2.
bool proven_cell(std::size_t n, std::size_t r, std::size_t ell) noexcept;

std::vector<SweepRow> run_sweep(const SweepOptions& options);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// One line: max |gap| over proven cells and the gap-sign counts elsewhere.
std::string sweep_summary(const std::vector<SweepRow>& rows);

/// Cells outside the proven set whose gap exceeds kGapTolerance.
std::vector<SweepRow> potential_counterexamples(const std::vector<SweepRow>& rows);

}  // namespace maxent::cli
