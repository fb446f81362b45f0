#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxent/bounds.hpp"
#include "maxent/errors.hpp"
#include "maxent/grid_oracle.hpp"
#include "maxent/optimizer.hpp"
#include "maxent/parallel.hpp"
#include "maxent/pmf.hpp"
#include "maxent/pmf_io.hpp"
#include "maxent/ulc.hpp"
#include "maxent/verify.hpp"

namespace maxent::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join12(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += g12(v[i]);
    }
    return s;
}

Execution execution_for(bool serial) { return serial ? Execution::serial : Execution::parallel; }

// ---------------------------------------------------------------------------
// Config file and environment fallback.

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return key;
}

std::string env_name(const std::string& option) {
    std::string name = "MAXENT_";
    for (char c : option) {
        name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return name;
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError("config",
                                       path + ":" + std::to_string(number) + ": expected key = value");
        }
        values[normalize_key(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
    }
    return values;
}

bool truthy(std::string v) {
    v = normalize_key(v);
    return v == "1" || v == "true" || v == "yes" || v == "on";
}

bool is_flag(const CLI::Option* opt) { return opt->get_expected_max() == 0; }

// Arguments supplying unset options from the config file, then the environment.
std::vector<std::string> fallback_args(const std::vector<const CLI::Option*>& options,
                                       const std::map<std::string, std::string>& config,
                                       const EnvLookup& env) {
    std::vector<std::string> extra;
    for (const auto* opt : options) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "config" || opt->count() > 0) continue;
        std::optional<std::string> value;
        if (auto it = config.find(name); it != config.end()) {
            value = it->second;
        } else if (env) {
            value = env(env_name(name));
        }
        if (!value) continue;
        if (is_flag(opt)) {
            if (truthy(*value)) extra.push_back("--" + name);
        } else {
            extra.push_back("--" + name);
            extra.push_back(*value);
        }
    }
    return extra;
}

// ---------------------------------------------------------------------------
// Subcommands.

struct Common {
    std::size_t n = 2;
    std::size_t r = 2;
    std::uint64_t seed = 1;
    std::size_t starts = 64;
    double tol = 1e-7;
    bool json = false;
    std::string out;
    bool serial = false;
};

json bound_json(const BoundReport& b) {
    return {{"n", b.n},
            {"r", b.r},
            {"w0", b.w0},
            {"bound_bits", b.bound_bits},
            {"terms",
             {{"binomial_term", b.terms.binomial_term},
              {"shifted_term", b.terms.shifted_term},
              {"weight_entropy", b.terms.weight_entropy}}},
            {"special_case", std::string(to_string(b.special_case))},
            {"proven_case", is_proven_case(b.n, b.r)}};
}

int cmd_bound(const Common& c, std::ostream& out) {
    const auto b = entropy_lower_bound(c.n, c.r);
    if (c.json) {
        out << bound_json(b).dump(2) << '\n';
        return kOk;
    }
    out << "n = " << c.n << ", r = " << c.r << '\n'
        << "w0          = " << g12(b.w0) << '\n'
        << "bound_bits  = " << g12(b.bound_bits) << '\n'
        << "  w0 H(B_n)                      = " << g12(b.terms.binomial_term) << '\n'
        << "  (1-w0)(H(B_{n-1}) + log2(r-1)) = " << g12(b.terms.shifted_term) << '\n'
        << "  h(w0)                          = " << g12(b.terms.weight_entropy) << '\n'
        << "special case: " << to_string(b.special_case)
        << (is_proven_case(c.n, c.r) ? " (proven maximum)" : " (conjectured maximum)") << '\n';
    return kOk;
}

int cmd_construct(const Common& c, std::ostream& out) {
    const auto inputs = conjectured_inputs(c.n, c.r);
    const auto sum = sum_distribution(inputs);
    const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

    const std::string tag = "n=" + std::to_string(c.n) + " r=" + std::to_string(c.r);
    std::vector<std::string> written;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto path = dir / ("x_" + std::to_string(i + 1) + ".pmf");
        write_pmf_file(path, inputs[i], "input " + std::to_string(i + 1) + " of the construction, " + tag);
        written.push_back(path.string());
    }
    const auto sum_path = dir / ("s_" + std::to_string(c.n) + ".pmf");
    write_pmf_file(sum_path, sum, "law of the sum, " + tag);
    written.push_back(sum_path.string());

    if (c.json) {
        out << json{{"n", c.n}, {"r", c.r}, {"files", written}, {"entropy_bits", entropy(sum)}}.dump(2)
            << '\n';
    } else {
        for (const auto& w : written) out << w << '\n';
        out << "H(S_n) = " << g12(entropy(sum)) << " bits\n";
    }
    return kOk;
}

struct OptimizeArgs {
    std::size_t ell = 0;
    std::size_t grid = 0;
};

int cmd_optimize(const Common& c, const OptimizeArgs& a, std::ostream& out) {
    OptimizerConfig cfg;
    cfg.starts = c.starts;
    cfg.seed = c.seed;
    cfg.inner_tol = c.tol;
    cfg.execution = execution_for(c.serial);
    const std::size_t free_blocks = a.ell == 0 ? c.n : a.ell;
    const auto res = restricted_maximize(c.n, c.r, free_blocks, cfg);
    const auto bound = entropy_lower_bound(c.n, c.r);
    const bool proven = proven_cell(c.n, c.r, free_blocks);

    std::optional<GridOracleResult> grid;
    if (a.grid > 0) {
        GridOracleOptions g;
        g.execution = cfg.execution;
        grid = grid_oracle_search(c.n, c.r, a.grid, g);
    }

    json report{{"n", res.n},
                {"r", res.r},
                {"free_blocks", res.free_blocks},
                {"best_value", res.best_value},
                {"bound_bits", bound.bound_bits},
                {"gap_to_bound", res.gap_to_bound},
                {"proven_case", proven},
                {"best_start", res.best_start},
                {"converged_fraction", res.converged_fraction()},
                {"seed", c.seed},
                {"starts", c.starts}};
    json inputs = json::array();
    for (const auto& p : res.best_inputs) inputs.push_back(p.values());
    report["best_inputs"] = inputs;
    json starts = json::array();
    for (const auto& s : res.per_start) {
        starts.push_back({{"start_id", s.start_id},
                          {"final_value", s.final_value},
                          {"sweeps", s.sweeps},
                          {"converged", s.converged},
                          {"conjectured", s.conjectured}});
    }
    report["per_start"] = starts;
    json optima = json::array();
    for (const auto& o : res.local_optima) optima.push_back({{"value", o.value}, {"count", o.count}});
    report["local_optima"] = optima;
    report["best_trace"] = res.best_trace;
    if (grid) {
        report["grid"] = {{"resolution", a.grid},
                          {"value", grid->value},
                          {"method", std::string(to_string(grid->method))},
                          {"tuples_evaluated", grid->tuples_evaluated}};
    }

    if (!c.out.empty()) {
        std::ofstream f(c.out);
        if (!f) throw IoError("cannot write report " + c.out);
        f << report.dump(2) << '\n';
        if (!f) throw IoError("failed writing report " + c.out);
    }
    if (c.json) {
        out << report.dump(2) << '\n';
        return kOk;
    }
    out << "n = " << res.n << ", r = " << res.r << ", free blocks = " << res.free_blocks << '\n'
        << "best value   = " << g12(res.best_value) << " bits (start " << res.best_start << ")\n"
        << "bound        = " << g12(bound.bound_bits) << " bits\n"
        << "gap          = " << g12(res.gap_to_bound) << (proven ? " (proven case)" : " (unproven)")
        << '\n'
        << "converged    = " << g12(res.converged_fraction() * 100.0) << "% of "
        << res.per_start.size() << " starts\n";
    out << "local optima:";
    for (const auto& o : res.local_optima) out << ' ' << g12(o.value) << " x" << o.count;
    out << '\n';
    for (std::size_t i = 0; i < res.best_inputs.size(); ++i) {
        out << "X" << i + 1 << ": " << join12(res.best_inputs[i].values()) << '\n';
    }
    if (grid) {
        out << "grid K=" << a.grid << ": " << g12(grid->value) << " bits ("
            << to_string(grid->method) << ", " << grid->tuples_evaluated << " tuples)\n";
    }
    return kOk;
}

struct SweepArgs {
    std::size_t n_min = 1;
    std::size_t n_max = 3;
    std::size_t r_min = 1;
    std::size_t r_max = 3;
    std::size_t ell = 0;
    bool no_timing = false;
    bool strict = false;
};

int cmd_sweep(const Common& c, const SweepArgs& a, std::ostream& out, std::ostream& err) {
    SweepOptions opt;
    opt.n_min = a.n_min;
    opt.n_max = a.n_max;
    opt.r_min = a.r_min;
    opt.r_max = a.r_max;
    opt.starts = c.starts;
    opt.seed = c.seed;
    opt.tol = c.tol;
    opt.ell = a.ell;
    opt.timing = !a.no_timing;

    std::ofstream file;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw IoError("cannot write " + c.out);
    }
    const auto rows = run_sweep(opt);
    const auto summary = sweep_summary(rows);
    if (c.json) {
        json arr = json::array();
        for (const auto& row : rows) {
            arr.push_back({{"n", row.n},
                           {"r", row.r},
                           {"bound_bits", row.bound_bits},
                           {"numeric_max_bits", row.numeric_max_bits},
                           {"gap", row.gap},
                           {"proven_case", row.proven_case},
                           {"starts_used", row.starts_used},
                           {"converged_fraction", row.converged_fraction},
                           {"wall_time_ms", row.wall_time_ms}});
        }
        (file.is_open() ? static_cast<std::ostream&>(file) : out)
            << json{{"rows", arr}, {"summary", summary}}.dump(2) << '\n';
    } else if (file.is_open()) {
        write_sweep_csv(file, rows);
    } else {
        write_sweep_csv(out, rows);
    }
    if (file.is_open()) {
        file.flush();
        if (!file) throw IoError("failed writing " + c.out);
    }
    (file.is_open() ? out : err) << summary << '\n';

    const auto suspicious = potential_counterexamples(rows);
    for (const auto& row : suspicious) {
        err << "potential counterexample: n=" << row.n << " r=" << row.r
            << " numeric_max_bits=" << g17(row.numeric_max_bits) << " bound_bits=" << g17(row.bound_bits)
            << " gap=" << g17(row.gap) << '\n';
    }
    return a.strict && !suspicious.empty() ? kViolations : kOk;
}

struct VerifyArgs {
    std::string suite;
    std::size_t trials = 10000;
    std::size_t order = 8;
    std::size_t max_witnesses = 32;
};

json suite_json(const SuiteReport& rep) {
    json witnesses = json::array();
    for (const auto& w : rep.witnesses) {
        json data = json::object();
        for (const auto& [name, values] : w.data) data[name] = values;
        witnesses.push_back(
            {{"trial", w.trial}, {"check", w.check}, {"message", w.message}, {"data", data}});
    }
    return {{"suite", std::string(to_string(rep.suite))},
            {"trials", rep.trials},
            {"seed", rep.seed},
            {"checks", rep.checks},
            {"violations", rep.violations},
            {"statistic", rep.statistic},
            {"statistic_value", rep.worst},
            {"witnesses", witnesses}};
}

int cmd_verify(const Common& c, const VerifyArgs& a, std::ostream& out) {
    SuiteOptions opt;
    opt.trials = a.trials;
    opt.seed = c.seed;
    opt.n = c.n;
    opt.r = c.r;
    opt.max_order = a.order;
    opt.max_witnesses = a.max_witnesses;
    opt.execution = execution_for(c.serial);
    const auto rep = run_suite(*parse_suite(a.suite), opt);
    const auto report = suite_json(rep);

    if (!c.out.empty()) {
        std::ofstream f(c.out);
        if (!f) throw IoError("cannot write report " + c.out);
        f << report.dump(2) << '\n';
        if (!f) throw IoError("failed writing report " + c.out);
    }
    if (c.json) {
        out << report.dump(2) << '\n';
    } else {
        out << "suite " << a.suite << ": " << rep.trials << " trials, " << rep.checks << " checks, "
            << rep.violations << " violations\n"
            << rep.statistic << " = " << g12(rep.worst) << '\n';
        for (const auto& w : rep.witnesses) {
            out << "  trial " << w.trial << " [" << w.check << "] " << w.message << '\n';
        }
    }
    return rep.clean() ? kOk : kViolations;
}

struct IdentityArgs {
    std::vector<double> p1{1.0 / 3, 1.0 / 3, 1.0 / 3};
    std::vector<double> p2{1.0 / 3, 1.0 / 3, 1.0 / 3};
    std::vector<double> p3{1.0 / 3, 1.0 / 3, 1.0 / 3};
};

int cmd_identity(const Common& c, const IdentityArgs& a, std::ostream& out) {
    const auto x = TernaryTriple::from_product(a.p1, a.p2, a.p3);
    const auto pom = identity_gap(Identity::pom, x);
    const auto pom2 = identity_gap(Identity::pom2, x);
    std::optional<bool> sign;
    const auto& v = x.values();
    if (*std::min_element(v.begin(), v.end()) > 1e-9) sign = sign_lemma_check(x);

    const auto gap_json = [](const IdentityGap& g) {
        return json{{"lhs", g.lhs}, {"rhs", g.rhs}, {"scale", g.scale},
                    {"relative_error", g.relative_error()}};
    };
    if (c.json) {
        json report{{"pom", gap_json(pom)}, {"pom2", gap_json(pom2)}};
        report["sign_lemma"] = sign ? json(*sign) : json(nullptr);
        out << report.dump(2) << '\n';
        return kOk;
    }
    const auto line = [&out](const char* name, const IdentityGap& g) {
        out << name << ": lhs = " << g12(g.lhs) << ", rhs = " << g12(g.rhs)
            << ", relative error = " << g12(g.relative_error()) << '\n';
    };
    line("P(2)^2 - 3 P(0) P(4)", pom);
    line("P(3)^2 - 4 P(1) P(5)", pom2);
    out << "sign lemma: " << (sign ? (*sign ? "holds" : "FAILS") : "not applicable (zero entries)")
        << '\n';
    return kOk;
}

void add_common(CLI::App* sub, Common& c, bool nr, bool search, bool seeded) {
    if (nr) {
        sub->add_option("--n", c.n, "number of summands")->check(CLI::PositiveNumber);
        sub->add_option("--r", c.r, "alphabet bound, inputs live on {0, ..., r}")
            ->check(CLI::PositiveNumber);
    }
    if (seeded) sub->add_option("--seed", c.seed, "random seed");
    if (search) {
        sub->add_option("--starts", c.starts, "random starts per cell")->check(CLI::PositiveNumber);
        sub->add_option("--tol", c.tol, "per-block Frank-Wolfe gap tolerance")
            ->check(CLI::PositiveNumber);
    }
    sub->add_flag("--json", c.json, "print a JSON report");
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
}

bool proven_cell(std::size_t n, std::size_t r, std::size_t ell) noexcept {
    if (ell == 0 || ell >= n) return is_proven_case(n, r);
    return is_proven_case(n, r) || ell <= 2 || (ell <= 3 && r == 2);
}

std::vector<SweepRow> run_sweep(const SweepOptions& options) {
    if (options.n_min < 1 || options.r_min < 1 || options.n_min > options.n_max ||
        options.r_min > options.r_max) {
        throw DomainError("sweep: need 1 <= n-min <= n-max and 1 <= r-min <= r-max");
    }
    OptimizerConfig cfg;
    cfg.starts = options.starts;
    cfg.seed = options.seed;
    cfg.inner_tol = options.tol;
    std::vector<SweepRow> rows;
    for (std::size_t n = options.n_min; n <= options.n_max; ++n) {
        for (std::size_t r = options.r_min; r <= options.r_max; ++r) {
            const auto start = std::chrono::steady_clock::now();
            const std::size_t free_blocks = options.ell == 0 ? n : std::min(options.ell, n);
            const auto res = restricted_maximize(n, r, free_blocks, cfg);
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            SweepRow row;
            row.n = n;
            row.r = r;
            row.bound_bits = entropy_lower_bound(n, r).bound_bits;
            row.numeric_max_bits = res.best_value;
            row.gap = row.numeric_max_bits - row.bound_bits;
            row.proven_case = proven_cell(n, r, free_blocks);
            row.starts_used = res.per_start.size();
            row.converged_fraction = res.converged_fraction();
            row.wall_time_ms = options.timing ? ms : 0.0;
            rows.push_back(row);
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepHeader << '\n';
    for (const auto& row : rows) {
        out << row.n << ',' << row.r << ',' << g17(row.bound_bits) << ','
            << g17(row.numeric_max_bits) << ',' << g17(row.gap) << ','
            << (row.proven_case ? "true" : "false") << ',' << row.starts_used << ','
            << g17(row.converged_fraction) << ',' << g17(row.wall_time_ms) << '\n';
    }
}

std::string sweep_summary(const std::vector<SweepRow>& rows) {
    std::size_t proven = 0;
    double max_gap = 0.0;
    std::size_t positive = 0;
    std::size_t zero = 0;
    std::size_t negative = 0;
    for (const auto& row : rows) {
        if (row.proven_case) {
            ++proven;
            max_gap = std::max(max_gap, std::abs(row.gap));
        } else if (row.gap > kGapTolerance) {
            ++positive;
        } else if (row.gap < -kGapTolerance) {
            ++negative;
        } else {
            ++zero;
        }
    }
    std::ostringstream s;
    s << "summary: proven cells " << proven << ", max |gap| " << g12(max_gap)
      << "; unproven cells " << (positive + zero + negative) << ": gap > +" << g12(kGapTolerance)
      << ": " << positive << ", |gap| <= " << g12(kGapTolerance) << ": " << zero
      << ", gap < -" << g12(kGapTolerance) << ": " << negative;
    return s.str();
}

std::vector<SweepRow> potential_counterexamples(const std::vector<SweepRow>& rows) {
    std::vector<SweepRow> out;
    for (const auto& row : rows) {
        if (!row.proven_case && row.gap > kGapTolerance) out.push_back(row);
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env) {
    CLI::App app{"Maximum entropy of sums of independent discrete random variables", "maxent"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    int threads = -1;
    app.add_option("--config", config_path, "file of key = value lines supplying unset flags");
    app.add_option("--threads", threads, "worker threads, 0 = all cores")
        ->check(CLI::NonNegativeNumber);

    Common common;
    OptimizeArgs optimize_args;
    SweepArgs sweep_args;
    VerifyArgs verify_args;
    IdentityArgs identity_args;

    auto* bound = app.add_subcommand("bound", "closed-form lower bound on the maximum entropy");
    add_common(bound, common, true, false, false);

    auto* construct = app.add_subcommand("construct", "write the conjectured maximizing inputs");
    add_common(construct, common, true, false, false);
    construct->add_option("--out", common.out, "output directory");

    auto* optimize = app.add_subcommand("optimize", "multistart numerical maximization");
    add_common(optimize, common, true, true, true);
    optimize->add_option("--ell", optimize_args.ell,
                         "free blocks; the rest are restricted to {0, r} (0 = all free)");
    optimize->add_option("--grid", optimize_args.grid, "also run the grid oracle at resolution K");
    optimize->add_option("--out", common.out, "JSON report file");
    optimize->add_flag("--serial", common.serial, "use the serial reference path");

    auto* sweep = app.add_subcommand("sweep", "optimize every (n, r) cell of a grid and emit CSV");
    add_common(sweep, common, false, true, true);
    sweep->add_option("--n-min", sweep_args.n_min)->check(CLI::PositiveNumber);
    sweep->add_option("--n-max", sweep_args.n_max)->check(CLI::PositiveNumber);
    sweep->add_option("--r-min", sweep_args.r_min)->check(CLI::PositiveNumber);
    sweep->add_option("--r-max", sweep_args.r_max)->check(CLI::PositiveNumber);
    sweep->add_option("--ell", sweep_args.ell, "free blocks for restricted runs (0 = all free)");
    sweep->add_option("--out", common.out, "CSV output file");
    sweep->add_flag("--no-timing", sweep_args.no_timing, "write 0 for wall_time_ms");
    sweep->add_flag("--strict-conjecture", sweep_args.strict,
                    "exit 1 when an unproven cell beats the bound");

    auto* verify = app.add_subcommand("verify", "run a Monte Carlo verification suite");
    add_common(verify, common, true, false, true);
    verify->add_option("--suite", verify_args.suite)
        ->required()
        ->check(CLI::IsMember({"ulc", "identity", "sign", "preserve", "decomposition"}));
    verify->add_option("--trials", verify_args.trials)->check(CLI::PositiveNumber);
    verify->add_option("--order", verify_args.order, "largest ULC order for the preserve suite")
        ->check(CLI::PositiveNumber);
    verify->add_option("--max-witnesses", verify_args.max_witnesses);
    verify->add_option("--out", common.out, "JSON report file with all witnesses");
    verify->add_flag("--serial", common.serial, "use the serial reference path");

    auto* identity = app.add_subcommand("identity", "evaluate both ternary identities on one triple");
    add_common(identity, common, false, false, false);
    for (auto [name, target] : {std::pair{"--p1", &identity_args.p1},
                                std::pair{"--p2", &identity_args.p2},
                                std::pair{"--p3", &identity_args.p3}}) {
        identity->add_option(name, *target, "three masses, comma separated")
            ->expected(3)
            ->delimiter(',');
    }

    const auto parse = [&app](std::vector<std::string> argv) {
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    };

    try {
        parse(args);
        std::map<std::string, std::string> config;
        if (!config_path.empty()) config = read_config(config_path);
        std::vector<const CLI::Option*> options;
        for (const auto* opt : app.get_options()) options.push_back(opt);
        for (const auto* sub : app.get_subcommands()) {
            for (const auto* opt : sub->get_options()) options.push_back(opt);
        }
        const auto extra = fallback_args(options, config, env);
        if (!extra.empty()) {
            auto combined = args;
            combined.insert(combined.end(), extra.begin(), extra.end());
            app.clear();
            parse(combined);
        }
        if (*identity) {
            for (const auto* p : {&identity_args.p1, &identity_args.p2, &identity_args.p3}) {
                if (p->size() != 3) throw CLI::ValidationError("identity", "--p1/--p2/--p3 take three masses each");
            }
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    }

    try {
        if (threads >= 0) set_worker_count(threads);
        if (*bound) return cmd_bound(common, out);
        if (*construct) return cmd_construct(common, out);
        if (*optimize) return cmd_optimize(common, optimize_args, out);
        if (*sweep) return cmd_sweep(common, sweep_args, out, err);
        if (*verify) return cmd_verify(common, verify_args, out);
        if (*identity) return cmd_identity(common, identity_args, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    }
    return kUsage;
}

}  // namespace maxent::cli
