// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "maxent/bounds.hpp"
#include "maxent/grid_oracle.hpp"
#include "maxent/optimizer.hpp"
#include "maxent/pmf.hpp"
#include "maxent/random.hpp"
#include "maxent/verify.hpp"

using namespace maxent;

namespace {

using LD = long double;

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double limit_s;  // 0 = no runtime limit
    std::function<Outcome()> body;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

LD binomial_mass(std::size_t n, std::size_t k) {
    return std::exp(std::lgamma(LD(n + 1)) - std::lgamma(LD(k + 1)) - std::lgamma(LD(n - k + 1)) -
                    LD(n) * std::log(LD(2)));
}

LD binomial_entropy_ld(std::size_t n) {
    LD h = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        const LD p = binomial_mass(n, k);
        h -= p * std::log2(p);
    }
    return h;
}

std::vector<LD> convolve_ld(const std::vector<LD>& a, const std::vector<LD>& b) {
    std::vector<LD> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// -sum s log2 s of the convolution of unnormalized nonnegative vectors.
LD objective_ld(const std::vector<std::vector<LD>>& xs) {
    auto s = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) s = convolve_ld(s, xs[i]);
    LD h = 0;
    for (LD v : s)
        if (v > 0) h -= v * std::log2(v);
    return h;
}

Outcome special_cases() {
    double worst = 0;
    for (std::size_t r = 1; r <= 16; ++r)
        worst = std::max(worst, std::abs(entropy_lower_bound(1, r).bound_bits - std::log2(double(r + 1))));
    for (std::size_t n = 1; n <= 20; ++n)
        worst = std::max(worst, double(std::abs(LD(entropy_lower_bound(n, 1).bound_bits) - binomial_entropy_ld(n))));
    return {worst <= 1e-12, "max error " + fmt("%.3g", worst)};
}

Outcome closed_forms() {
    double worst = 0;
    for (std::size_t r = 1; r <= 16; ++r)
        worst = std::max(worst, std::abs(closed_form_special(2, r) - entropy_lower_bound(2, r).bound_bits));
    worst = std::max(worst, std::abs(closed_form_special(3, 2) - entropy_lower_bound(3, 2).bound_bits));
    return {worst <= 1e-12, "max disagreement " + fmt("%.3g", worst)};
}

Outcome construction() {
    double entropy_err = 0;
    double class_err = 0;
    for (std::size_t n = 1; n <= 10; ++n) {
        for (std::size_t r = 1; r <= 10; ++r) {
            const auto sum = sum_distribution(conjectured_inputs(n, r));
            entropy_err = std::max(entropy_err, std::abs(entropy(sum) - entropy_lower_bound(n, r).bound_bits));
            const auto dec = residue_decompose(sum, r);
            for (std::size_t j = 0; j < dec.classes.size(); ++j) {
                const std::size_t m = j == 0 ? n : n - 1;
                const auto& masses = dec.classes[j].masses;
                const std::size_t len = std::max(masses.size(), m + 1);
                for (std::size_t k = 0; k < len; ++k) {
                    const double got = k < masses.size() ? masses[k] : 0.0;
                    const double want = k <= m ? double(binomial_mass(m, k)) : 0.0;
                    class_err = std::max(class_err, std::abs(got - want));
                }
            }
        }
    }
    return {entropy_err <= 1e-10 && class_err <= 1e-12,
            "entropy error " + fmt("%.3g", entropy_err) + ", class error " + fmt("%.3g", class_err)};
}

Outcome two_inputs() {
    bool ok = true;
    std::string detail;
    for (std::size_t r = 2; r <= 5; ++r) {
        const double exact = closed_form_special(2, r);
        const double best = multistart_maximize(2, r, OptimizerConfig{}).best_value;
        const double grid = grid_oracle(2, r, 24);
        ok = ok && std::abs(best - exact) <= 1e-6 && best <= exact + 1e-9 && grid <= exact;
        detail += "r=" + std::to_string(r) + " gap " + fmt("%.2g", best - exact) + " grid " +
                  fmt("%.2g", grid - exact) + "; ";
    }
    return {ok, detail};
}

Outcome three_ternary() {
    const double exact = closed_form_special(3, 2);
    const double best = multistart_maximize(3, 2, OptimizerConfig{}).best_value;
    return {std::abs(best - exact) <= 1e-6 && best <= exact + 1e-9, "gap " + fmt("%.3g", best - exact)};
}

Outcome restricted() {
    struct Cell {
        std::size_t n, r, ell;
    };
    bool ok = true;
    std::string detail;
    for (const Cell c : {Cell{4, 3, 2}, Cell{5, 4, 2}, Cell{5, 2, 3}, Cell{4, 2, 3}}) {
        const double gap = restricted_maximize(c.n, c.r, c.ell, OptimizerConfig{}).best_value -
                           entropy_lower_bound(c.n, c.r).bound_bits;
        ok = ok && std::abs(gap) <= 1e-6;
        detail += "(" + std::to_string(c.n) + "," + std::to_string(c.r) + "," + std::to_string(c.ell) +
                  ") " + fmt("%.2g", gap) + "; ";
    }
    return {ok, detail};
}

SuiteReport suite(Suite s, std::size_t trials, std::size_t n = 2, std::size_t r = 2) {
    SuiteOptions o;
    o.trials = trials;
    o.n = n;
    o.r = r;
    return run_suite(s, o);
}

Outcome ulc_certificates() {
    std::size_t violations = 0;
    for (std::size_t r = 2; r <= 5; ++r) violations += suite(Suite::ulc, 100000, 2, r).violations;
    violations += suite(Suite::ulc, 100000, 3, 2).violations;
    return {violations == 0, std::to_string(violations) + " violations in 5 x 1e5 trials"};
}

Outcome identities() {
    const auto id = suite(Suite::identity, 100000);
    const auto sign = suite(Suite::sign, 100000);
    return {id.clean() && sign.clean(), "identity violations " + std::to_string(id.violations) +
                                            " (max rel err " + fmt("%.2g", id.worst) + "), sign violations " +
                                            std::to_string(sign.violations)};
}

Outcome bernoulli_preservation() {
    const auto rep = suite(Suite::preserve, 10000);
    return {rep.clean(), std::to_string(rep.violations) + " violations in 1e4 trials"};
}

Outcome stationarity() {
    double worst = 0;
    const double h = 1e-6;
    for (std::size_t n = 2; n <= 8; ++n) {
        for (std::size_t r = 2; r <= 8; ++r) {
            const double w = conjectured_weight(n, r);
            const double d = (bound_value_at(w + h, n, r) - bound_value_at(w - h, n, r)) / (2 * h);
            worst = std::max(worst, std::abs(d));
        }
    }
    return {worst < 1e-7, "max |derivative| " + fmt("%.3g", worst)};
}

// Five-point stencil on each raw mass, in long double, step scaled to the mass.
double gradient_error(const std::vector<Pmf>& inputs, std::size_t block) {
    const auto g = objective_gradient(inputs, block);
    std::vector<std::vector<LD>> xs;
    for (const auto& p : inputs) xs.emplace_back(p.values().begin(), p.values().end());
    double scale = 0;
    for (double v : g) scale = std::max(scale, std::abs(v));
    double worst = 0;
    for (std::size_t a = 0; a < g.size(); ++a) {
        const LD p = xs[block][a];
        if (p <= 0) continue;
        const LD h = std::min<LD>(1e-5L, p / 100);
        const auto at = [&](LD offset) {
            auto ys = xs;
            ys[block][a] = p + offset;
            return objective_ld(ys);
        };
        const LD fd = (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
        worst = std::max(worst, double(std::abs(fd - LD(g[a]))) / scale);
    }
    return worst;
}

Outcome gradient_check() {
    double worst = 0;
    SplitMix64 rng(2024);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t r = 1; r <= 4; ++r) {
            for (int t = 0; t < 100; ++t) {
                std::vector<Pmf> inputs;
                for (std::size_t i = 0; i < n; ++i) inputs.emplace_back(dirichlet_uniform(rng, r + 1));
                worst = std::max(worst, gradient_error(inputs, t % n));
            }
        }
    }
    return {worst < 1e-6, "max relative error " + fmt("%.3g", worst)};
}

Outcome conjecture_sweep() {
    cli::SweepOptions o;
    o.n_min = 3;
    o.n_max = 5;
    o.r_min = 2;
    o.r_max = 4;
    o.starts = 64;
    o.timing = false;
    const auto rows = cli::run_sweep(o);
    bool ok = true;
    double worst = 0;
    for (const auto& row : rows) {
        ok = ok && std::abs(row.gap) <= cli::kGapTolerance;
        worst = std::max(worst, std::abs(row.gap));
    }
    for (const auto& row : cli::potential_counterexamples(rows)) {
        std::printf("  potential counterexample: n=%zu r=%zu gap=%.17g\n", row.n, row.r, row.gap);
    }
    return {ok, std::to_string(rows.size()) + " cells, max |gap| " + fmt("%.3g", worst)};
}

std::string run_binary(const std::string& args) {
    const std::string cmd = std::string("\"") + MAXENT_BINARY + "\" " + args + " 2>/dev/null";
    std::string output;
    if (FILE* pipe = popen(cmd.c_str(), "r")) {
        std::array<char, 4096> buf;
        std::size_t got;
        while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
        pclose(pipe);
    }
    return output;
}

Outcome determinism() {
    const auto a = run_binary("sweep --seed 42 --no-timing");
    const auto b = run_binary("sweep --seed 42 --no-timing");
    const bool ok = !a.empty() && a == b && a.rfind(cli::kSweepHeader, 0) == 0;
    return {ok, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "special-case exactness", 1, special_cases},
        {2, "closed-form consistency", 1, closed_forms},
        {3, "construction realizes bound", 5, construction},
        {4, "two-input equality", 120, two_inputs},
        {5, "three ternary inputs equality", 60, three_ternary},
        {6, "restricted maximization", 180, restricted},
        {7, "conditional ULC certificates", 120, ulc_certificates},
        {8, "ternary identities and sign lemma", 60, identities},
        {9, "Bernoulli convolution preserves ULC", 30, bernoulli_preservation},
        {10, "stationarity of w0", 1, stationarity},
        {11, "gradient check", 60, gradient_check},
        {12, "conjecture sweep", 900, conjecture_sweep},
        {13, "sweep determinism", 0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.body();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        while (out.detail.size() >= 2 && out.detail.ends_with("; ")) out.detail.resize(out.detail.size() - 2);
        const bool in_time = c.limit_s == 0 || secs < c.limit_s;
        const bool pass = out.ok && in_time;
        failed += !pass;
        std::printf("%s  %2d  %-38s %s [%.3f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.title, out.detail.c_str(), secs,
                    in_time ? "" : ", over limit");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
