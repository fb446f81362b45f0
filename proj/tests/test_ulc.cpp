#include <doctest.h>

#include <cmath>
#include <vector>

#include "maxent/bounds.hpp"
#include "maxent/combinatorics.hpp"
#include "maxent/errors.hpp"
#include "maxent/pmf.hpp"
#include "maxent/random.hpp"
#include "maxent/ulc.hpp"

using namespace maxent;
using Seq = std::vector<double>;

TEST_CASE("log-concavity") {
    CHECK(is_log_concave(Seq{1, 2, 1}));
    CHECK_FALSE(is_log_concave(Seq{1, 0, 1}));
    CHECK(is_log_concave(Pmf::binomial(5, 0.5).values()));
    CHECK(is_log_concave(Seq{3}));
    CHECK(is_log_concave(Seq{0, 0, 0}));
    CHECK_THROWS_AS(is_log_concave(Seq{1, -0.5, 1}), DomainError);

    const auto scan = scan_concavity(Seq{1, 0, 1}, ConcavityOrder::log_concave());
    CHECK_FALSE(scan.passed);
    REQUIRE(scan.witness.has_value());
    CHECK(*scan.witness == 1);
    CHECK(scan.margin == -1.0);
    CHECK(has_internal_zeros(Seq{1, 0, 1}));
    CHECK_FALSE(has_internal_zeros(Seq{0, 1, 1, 0}));
}

TEST_CASE("ULC of order infinity") {
    std::vector<double> poisson;
    double term = 1.0;
    const double lambda = 1.7;
    for (int k = 0; k <= 6; ++k) {
        poisson.push_back(term);
        term *= lambda / (k + 1);
    }
    const auto scan = scan_concavity(poisson, ConcavityOrder::infinite());
    CHECK(scan.passed);
    CHECK(std::abs(scan.margin) < 1e-15);
    CHECK_FALSE(is_ulc_infinite(Seq{1, 1, 1}));
    CHECK(*scan_concavity(Seq{1, 1, 1}, ConcavityOrder::infinite()).witness == 1);
}

TEST_CASE("ULC of finite order") {
    for (std::size_t n = 1; n <= 10; ++n) {
        for (double p : {0.1, 0.5, 0.77}) {
            const auto b = Pmf::binomial(n, p).values();
            const auto scan = scan_concavity(b, ConcavityOrder::finite(n));
            CHECK(scan.passed);
            CHECK(std::abs(scan.margin) < 1e-15);
        }
    }
    // Order 2 on three masses is u1^2 >= 4 u0 u2.
    CHECK(is_ulc_order(Seq{1, 2, 1}, 2));
    CHECK_FALSE(is_ulc_order(Seq{1, 2, 1.01}, 2));
    CHECK(is_ulc_order(Seq{1, 2, 0.99}, 2));
    CHECK_THROWS_AS(is_ulc_order(Seq{1, 1, 1, 1}, 2), DomainError);
    CHECK(is_ulc_order(Seq{0.3, 0.7}, 1));
}

TEST_CASE("slack absorbs rounding at equality cases only") {
    // A violation of relative size 1e-14 passes, 1e-10 does not.
    CHECK(is_log_concave(Seq{1, 1, 1 + 1e-14}));
    CHECK_FALSE(is_log_concave(Seq{1, 1, 1 + 1e-10}));
    const auto scan = scan_concavity(Seq{1, 1, 1 + 1e-14}, ConcavityOrder::log_concave());
    CHECK(scan.margin < 0.0);
}

TEST_CASE("class hierarchy and entropy of ULC sequences") {
    SplitMix64 rng(101);
    UlcSampleStats stats;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t m = 1 + t % 8;
        const auto u = random_ulc_sequence(rng, m, &stats);
        REQUIRE(u.size() <= m + 1);
        CHECK(is_ulc_order(u, m));
        CHECK(is_ulc_infinite(u));
        CHECK(is_log_concave(u));
        CHECK(entropy_bits(u) <= binomial_half_entropy(m) + 1e-12);
    }
    CHECK(stats.accepted_by_rejection + stats.fallback_constructions == 10000);
    CHECK(stats.fallback_constructions > 0);
}

TEST_CASE("random ULC sequences are seed deterministic") {
    SplitMix64 a(5);
    SplitMix64 b(5);
    for (int t = 0; t < 100; ++t) CHECK(random_ulc_sequence(a, 6) == random_ulc_sequence(b, 6));
}

TEST_CASE("conditional ULC report") {
    const auto report = conditional_ulc_report(conjectured_inputs(3, 2), 2);
    REQUIRE(report.per_class.size() == 2);
    CHECK(report.all_passed());
    CHECK(report.per_class[0].order == 3);
    CHECK(report.per_class[1].order == 2);
    for (const auto& c : report.per_class) CHECK(std::abs(c.margin) < 1e-15);

    SplitMix64 rng(7);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t r = 1 + t % 6;
        const std::vector<Pmf> pair{Pmf(dirichlet_uniform(rng, r + 1)),
                                    Pmf(dirichlet_uniform(rng, r + 1))};
        const auto rep = conditional_ulc_report(pair, r);
        CHECK(rep.per_class[0].passed);
        CHECK(rep.all_passed());
        const std::vector<Pmf> triple{Pmf(dirichlet_uniform(rng, 3)), Pmf(dirichlet_uniform(rng, 3)),
                                      Pmf(dirichlet_uniform(rng, 3))};
        CHECK(conditional_ulc_report(triple, 2).all_passed());
    }

    // Inputs on {0, r} only leave every nonzero class empty.
    const std::size_t ends[] = {0, 3};
    const std::vector<Pmf> lattice{Pmf::uniform_on(ends, 3), Pmf::uniform_on(ends, 3)};
    const auto vac = conditional_ulc_report(lattice, 3);
    CHECK(vac.per_class[1].vacuous);
    CHECK(vac.per_class[1].passed);
    CHECK_FALSE(vac.per_class[1].witness.has_value());
    CHECK(vac.all_passed());

    const std::vector<Pmf> mismatched{Pmf::uniform(2), Pmf::uniform(3)};
    CHECK_THROWS_AS(conditional_ulc_report(mismatched, 2), PreconditionError);
}

TEST_CASE("order-2 certificate for two summands") {
    SplitMix64 rng(13);
    for (int t = 0; t < 100000; ++t) {
        const std::size_t r = 1 + t % 5;
        const Pmf p(dirichlet_uniform(rng, r + 1));
        const Pmf q(dirichlet_uniform(rng, r + 1));
        const auto gap = pair_certificate(p, q);
        REQUIRE(gap.lhs >= gap.rhs - 1e-12 * gap.scale);
    }
}

TEST_CASE("ternary identities") {
    const TernaryTriple zero;
    for (auto which : {Identity::pom, Identity::pom2}) {
        const auto g = identity_gap(which, zero);
        CHECK(g.lhs == 0.0);
        CHECK(g.rhs == 0.0);
        CHECK(g.relative_error() == 0.0);
    }

    std::array<double, 27> neg{};
    neg[4] = -1.0;
    CHECK_THROWS_AS(TernaryTriple{neg}, DomainError);

    SplitMix64 rng(17);
    std::size_t agreeing = 0;
    for (int t = 0; t < 20000; ++t) {
        const auto x = TernaryTriple::from_product(dirichlet_uniform(rng, 3), dirichlet_uniform(rng, 3),
                                                   dirichlet_uniform(rng, 3));
        CHECK(x.is_product_formed());
        const auto pom = identity_gap(Identity::pom, x);
        const auto pom2 = identity_gap(Identity::pom2, x);
        CHECK(pom.relative_error() < 1e-12);
        CHECK(pom2.relative_error() < 1e-12);
        CHECK(pom.rhs >= 0.0);
        const double d1 = x.at(2, 0, 1) - x.at(0, 2, 1);
        const double d2 = x.at(1, 2, 0) - x.at(1, 0, 2);
        if (d1 * d2 > 0) {
            ++agreeing;
            CHECK(pom2.lhs > 0.0);
        }
    }
    CHECK(agreeing > 1000);
}

TEST_CASE("product-formed detection") {
    const double p[] = {0.2, 0.3, 0.5};
    auto x = TernaryTriple::from_product(p, p, p);
    CHECK(x.is_product_formed());
    auto v = x.values();
    v[TernaryTriple::index(1, 1, 1)] *= 1.01;
    CHECK_FALSE(TernaryTriple(v).is_product_formed());
    const auto masses = x.sum_masses();
    double total = 0.0;
    for (double m : masses) total += m;
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("sign lemma") {
    const double u[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    CHECK(sign_lemma_check(TernaryTriple::from_product(u, u, u)));

    const double p1[] = {0.2, 0.3, 0.5};
    const double p2[] = {0.3, 0.4, 0.3};
    const double p3[] = {0.5, 0.3, 0.2};
    const auto x = TernaryTriple::from_product(p1, p2, p3);
    CHECK(x.at(2, 0, 1) - x.at(0, 2, 1) == doctest::Approx(0.027));
    CHECK(x.at(1, 2, 0) - x.at(1, 0, 2) == doctest::Approx(0.027));
    CHECK(x.at(2, 1, 0) - x.at(0, 1, 2) == doctest::Approx(0.084));
    CHECK(sign_lemma_check(x));

    SplitMix64 rng(19);
    for (int t = 0; t < 20000; ++t) {
        const auto y = TernaryTriple::from_product(dirichlet(rng, 3, 2.0), dirichlet(rng, 3, 2.0),
                                                   dirichlet(rng, 3, 2.0));
        CHECK(sign_lemma_check(y));
    }

    const double z[] = {0.0, 0.5, 0.5};
    CHECK_THROWS_AS(sign_lemma_check(TernaryTriple::from_product(z, u, u)), PreconditionError);
    auto free_values = TernaryTriple::from_product(u, u, u).values();
    free_values[0] *= 2;
    CHECK_THROWS_AS(sign_lemma_check(TernaryTriple(free_values)), PreconditionError);
}

TEST_CASE("Bernoulli convolution preserves ULC") {
    for (std::size_t m = 1; m <= 8; ++m) {
        const auto b = Pmf::binomial(m, 0.5).values();
        CHECK(convolve_bernoulli_preserves(b, m, 0.5));
        const double half[] = {0.5, 0.5};
        const auto next = convolve_raw(b, half);
        const auto expected = Pmf::binomial(m + 1, 0.5).values();
        for (std::size_t i = 0; i <= m + 1; ++i) CHECK(next[i] == doctest::Approx(expected[i]));
        CHECK(convolve_bernoulli_preserves(b, m, 0.0));
        CHECK(convolve_bernoulli_preserves(b, m, 1.0));
    }
    SplitMix64 rng(23);
    for (int t = 0; t < 10000; ++t) {
        const std::size_t m = 1 + t % 8;
        const auto u = random_ulc_sequence(rng, m);
        CHECK(convolve_bernoulli_preserves(u, m, rng.uniform()));
    }
    CHECK_THROWS_AS(convolve_bernoulli_preserves(Seq{1, 1, 1}, 2, 0.5), PreconditionError);
    CHECK_THROWS_AS(convolve_bernoulli_preserves(Seq{1, 2, 1}, 2, 1.5), DomainError);
}
