#include "maxent/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxent/bounds.hpp"
#include "maxent/errors.hpp"
#include "maxent/pmf.hpp"
#include "maxent/random.hpp"
#include "maxent/ulc.hpp"

namespace maxent {

namespace {

constexpr std::size_t kChunk = 1024;
constexpr double kIdentityTolerance = 1e-12;
constexpr double kDecompositionTolerance = 1e-10;
constexpr double kRoundTripTolerance = 1e-12;

enum class Worst { minimum, maximum, total };

double combine(Worst direction, double a, double b) {
    switch (direction) {
        case Worst::minimum: return std::min(a, b);
        case Worst::maximum: return std::max(a, b);
        case Worst::total: return a + b;
    }
    return a;
}

struct Tally {
    std::size_t checks = 0;
    std::size_t violations = 0;
    double worst = 0.0;
    std::vector<Violation> witnesses;
};

class Recorder {
public:
    Recorder(Tally& tally, std::size_t trial, std::size_t cap, Worst direction)
        : tally_(tally), trial_(trial), cap_(cap), direction_(direction) {}

    bool check(bool ok, std::string name, std::string message,
               std::vector<std::pair<std::string, std::vector<double>>> data = {}) {
        ++tally_.checks;
        if (ok) return true;
        ++tally_.violations;
        if (tally_.witnesses.size() < cap_) {
            tally_.witnesses.push_back({trial_, std::move(name), std::move(message), std::move(data)});
        }
        return false;
    }

    void observe(double value) {
        tally_.worst = combine(direction_, tally_.worst, value);
    }

private:
    Tally& tally_;
    std::size_t trial_;
    std::size_t cap_;
    Worst direction_;
};

std::vector<double> random_block(SplitMix64& rng, std::size_t length) {
    return dirichlet_uniform(rng, length);
}

std::vector<std::pair<std::string, std::vector<double>>> named_inputs(const std::vector<Pmf>& inputs) {
    std::vector<std::pair<std::string, std::vector<double>>> out;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        out.emplace_back("input_" + std::to_string(i + 1), inputs[i].values());
    }
    return out;
}

std::vector<double> triple_values(const TernaryTriple& x) {
    return {x.values().begin(), x.values().end()};
}

// ---------------------------------------------------------------------------

void ulc_trial(SplitMix64& rng, const SuiteOptions& opt, Recorder& rec) {
    std::vector<Pmf> inputs;
    for (std::size_t i = 0; i < opt.n; ++i) inputs.emplace_back(random_block(rng, opt.r + 1));
    const auto report = conditional_ulc_report(inputs, opt.r);
    for (const auto& cls : report.per_class) {
        if (cls.vacuous) continue;
        const double peak = *std::max_element(cls.conditional.begin(), cls.conditional.end());
        rec.observe(cls.margin / (peak * peak));
        auto data = named_inputs(inputs);
        data.emplace_back("conditional", cls.conditional);
        rec.check(cls.passed, "conditional_ulc",
                  "class " + std::to_string(cls.residue) + " fails ULC of order " +
                      std::to_string(cls.order) + " at index " +
                      std::to_string(cls.witness.value_or(0)),
                  std::move(data));
    }
    if (opt.n == 2) {
        const auto gap = pair_certificate(inputs[0], inputs[1]);
        rec.check(gap.lhs >= gap.rhs - 1e-12 * gap.scale, "pair_certificate",
                  "P(r)^2 - 4 P(0) P(2r) falls below the squared cross term", named_inputs(inputs));
    }
}

void identity_trial(SplitMix64& rng, const SuiteOptions&, Recorder& rec) {
    const auto p1 = random_block(rng, 3);
    const auto p2 = random_block(rng, 3);
    const auto p3 = random_block(rng, 3);
    const auto x = TernaryTriple::from_product(p1, p2, p3);
    const auto data = [&] {
        return std::vector<std::pair<std::string, std::vector<double>>>{
            {"p1", p1}, {"p2", p2}, {"p3", p3}, {"x", triple_values(x)}};
    };

    const auto pom = identity_gap(Identity::pom, x);
    const auto pom2 = identity_gap(Identity::pom2, x);
    rec.observe(std::max(pom.relative_error(), pom2.relative_error()));
    rec.check(pom.relative_error() <= kIdentityTolerance, "pom_identity",
              "expansion of P(2)^2 - 3 P(0) P(4) disagrees with direct evaluation", data());
    rec.check(pom2.relative_error() <= kIdentityTolerance, "pom2_identity",
              "expansion of P(3)^2 - 4 P(1) P(5) disagrees with direct evaluation", data());
    rec.check(pom.rhs >= -kIdentityTolerance * pom.scale, "pom_nonnegative",
              "sum-of-squares expansion is negative", data());

    const double d1 = x.at(2, 0, 1) - x.at(0, 2, 1);
    const double d2 = x.at(1, 2, 0) - x.at(1, 0, 2);
    if (d1 * d2 > 0.0) {
        rec.check(pom2.lhs > -kIdentityTolerance * pom2.scale, "pom2_positive",
                  "P(3)^2 - 4 P(1) P(5) is negative although the differences agree in sign",
                  data());
    }
}

void sign_trial(SplitMix64& rng, const SuiteOptions&, Recorder& rec) {
    constexpr double kThreshold = 1e-9;
    for (;;) {
        const auto p1 = random_block(rng, 3);
        const auto p2 = random_block(rng, 3);
        const auto p3 = random_block(rng, 3);
        const auto x = TernaryTriple::from_product(p1, p2, p3);
        const auto& v = x.values();
        if (*std::min_element(v.begin(), v.end()) <= kThreshold) continue;
        const double d1 = x.at(2, 0, 1) - x.at(0, 2, 1);
        const double d2 = x.at(1, 2, 0) - x.at(1, 0, 2);
        rec.observe((d1 > 0.0 && d2 > 0.0) || (d1 < 0.0 && d2 < 0.0) ? 1.0 : 0.0);
        rec.check(sign_lemma_check(x, kThreshold), "sign_lemma",
                  "x210 - x012 does not share the common sign",
                  {{"p1", p1}, {"p2", p2}, {"p3", p3}, {"x", triple_values(x)}});
        return;
    }
}

void preserve_trial(SplitMix64& rng, const SuiteOptions& opt, Recorder& rec) {
    const std::size_t m =
        1 + std::min(opt.max_order - 1,
                     static_cast<std::size_t>(rng.uniform() * static_cast<double>(opt.max_order)));
    const auto u = random_ulc_sequence(rng, m);
    const double q = rng.uniform();
    const std::vector<std::pair<std::string, std::vector<double>>> data{
        {"u", u}, {"order", {static_cast<double>(m)}}, {"q", {q}}};

    const double bernoulli[2] = {1.0 - q, q};
    const auto w = convolve_raw(u, bernoulli);
    const auto scan = scan_concavity(w, ConcavityOrder::finite(m + 1));
    const double peak = *std::max_element(w.begin(), w.end());
    rec.observe(scan.margin / (peak * peak));
    rec.check(convolve_bernoulli_preserves(u, m, q), "bernoulli_preserves",
              "convolution with a Bernoulli leaves the ULC(m + 1) class", data);
    rec.check(is_ulc_infinite(u) && is_log_concave(u), "class_hierarchy",
              "ULC(m) sequence is not ULC(infinity) and log-concave", data);
    rec.check(entropy_bits(u) <= binomial_half_entropy(m) + 1e-12, "binomial_entropy_max",
              "ULC(m) sequence has entropy above H(B_m)", data);
}

void decomposition_trial(SplitMix64& rng, const SuiteOptions&, Recorder& rec) {
    const std::size_t length = 1 + static_cast<std::size_t>(rng.uniform() * 24.0);
    const std::size_t r = 1 + static_cast<std::size_t>(rng.uniform() * 5.0);
    auto probs = random_block(rng, length);
    if (length > 2 && rng.uniform() < 0.25) {
        // Knock out some entries so that zero-weight classes occur.
        for (auto& v : probs) {
            if (rng.uniform() < 0.5) v = 0.0;
        }
        double total = 0.0;
        for (double v : probs) total += v;
        if (total == 0.0) probs[0] = total = 1.0;
        for (auto& v : probs) v /= total;
    }
    const Pmf p(probs);
    const auto dec = residue_decompose(p, r);
    const std::vector<std::pair<std::string, std::vector<double>>> data{
        {"p", p.values()}, {"r", {static_cast<double>(r)}}};

    const double by_parts = dec.entropy_by_parts();
    const double direct = entropy(p);
    const double identity_error = std::abs(by_parts - direct);
    rec.check(identity_error <= kDecompositionTolerance, "entropy_by_parts",
              "entropy differs from the weighted class entropies plus H(w)", data);

    const auto back = mixture(dec);
    double round_trip = back.size() == p.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min(back.size(), p.size()); ++i) {
        round_trip = std::max(round_trip, std::abs(back[i] - p[i]));
    }
    rec.check(round_trip <= kRoundTripTolerance, "mixture_round_trip",
              "mixture of the decomposition does not reproduce the input", data);

    // Residue class j of p * q, with q on multiples of r, is class j of p
    // convolved with q read on the coarse lattice.
    const std::size_t coarse_length = 1 + static_cast<std::size_t>(rng.uniform() * 4.0);
    const auto coarse = random_block(rng, coarse_length);
    std::vector<double> spread((coarse_length - 1) * r + 1, 0.0);
    for (std::size_t k = 0; k < coarse_length; ++k) spread[k * r] = coarse[k];
    const auto sum = convolve_raw(p.probs(), spread);
    double splitting = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<double> cls_p;
        for (std::size_t k = j; k < p.size(); k += r) cls_p.push_back(p[k]);
        if (cls_p.empty()) continue;
        const auto expected = convolve_raw(cls_p, coarse);
        for (std::size_t k = 0; k < expected.size(); ++k) {
            const std::size_t s = k * r + j;
            const double actual = s < sum.size() ? sum[s] : 0.0;
            splitting = std::max(splitting, std::abs(actual - expected[k]));
        }
    }
    auto split_data = data;
    split_data.emplace_back("q_coarse", coarse);
    rec.check(splitting <= kRoundTripTolerance, "splitting",
              "residue class of a convolution with a lattice law is not the class convolution",
              std::move(split_data));
    rec.observe(std::max({identity_error, round_trip, splitting}));
}

}  // namespace

std::string_view to_string(Suite suite) noexcept {
    switch (suite) {
        case Suite::ulc: return "ulc";
        case Suite::identity: return "identity";
        case Suite::sign: return "sign";
        case Suite::preserve: return "preserve";
        case Suite::decomposition: return "decomposition";
    }
    return "ulc";
}

std::optional<Suite> parse_suite(std::string_view name) noexcept {
    for (auto s : {Suite::ulc, Suite::identity, Suite::sign, Suite::preserve, Suite::decomposition}) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

SuiteReport run_suite(Suite suite, const SuiteOptions& options) {
    if (options.trials < 1) throw DomainError("verify: trials must be at least 1");
    if (suite == Suite::ulc && (options.n < 1 || options.r < 1)) {
        throw DomainError("verify: ulc suite needs n >= 1 and r >= 1");
    }
    if (suite == Suite::preserve && options.max_order < 1) {
        throw DomainError("verify: preserve suite needs an order of at least 1");
    }

    using TrialFn = void (*)(SplitMix64&, const SuiteOptions&, Recorder&);
    TrialFn trial = nullptr;
    Worst direction = Worst::maximum;
    SuiteReport report;
    switch (suite) {
        case Suite::ulc:
            trial = ulc_trial;
            direction = Worst::minimum;
            report.statistic = "min_relative_margin";
            break;
        case Suite::identity:
            trial = identity_trial;
            report.statistic = "max_relative_error";
            break;
        case Suite::sign:
            trial = sign_trial;
            direction = Worst::total;
            report.statistic = "nonvacuous_trials";
            break;
        case Suite::preserve:
            trial = preserve_trial;
            direction = Worst::minimum;
            report.statistic = "min_relative_margin";
            break;
        case Suite::decomposition:
            trial = decomposition_trial;
            report.statistic = "max_abs_error";
            break;
    }

    const std::size_t chunks = (options.trials + kChunk - 1) / kChunk;
    const double initial =
        direction == Worst::minimum ? std::numeric_limits<double>::infinity() : 0.0;
    std::vector<Tally> tallies(chunks, Tally{0, 0, initial, {}});
    report.worst = initial;
    for_each_index(options.execution, chunks, [&](std::size_t c) {
        auto& tally = tallies[c];
        const std::size_t end = std::min(options.trials, (c + 1) * kChunk);
        for (std::size_t t = c * kChunk; t < end; ++t) {
            auto rng = stream_for(options.seed, t);
            Recorder rec(tally, t, options.max_witnesses, direction);
            trial(rng, options, rec);
        }
    });

    report.suite = suite;
    report.trials = options.trials;
    report.seed = options.seed;
    for (auto& tally : tallies) {
        report.checks += tally.checks;
        report.violations += tally.violations;
        report.worst = combine(direction, report.worst, tally.worst);
        for (auto& w : tally.witnesses) {
            if (report.witnesses.size() < options.max_witnesses) report.witnesses.push_back(std::move(w));
        }
    }
    if (std::isinf(report.worst)) report.worst = 0.0;
    return report;
}

}  // namespace maxent
