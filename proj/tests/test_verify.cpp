#include <doctest.h>

#include "maxent/errors.hpp"
#include "maxent/verify.hpp"

using namespace maxent;

namespace {

SuiteOptions small(std::size_t trials, Execution execution = Execution::parallel) {
    SuiteOptions o;
    o.trials = trials;
    o.seed = 3;
    o.execution = execution;
    return o;
}

}  // namespace

TEST_CASE("suite names") {
    for (auto s : {Suite::ulc, Suite::identity, Suite::sign, Suite::preserve, Suite::decomposition}) {
        const auto parsed = parse_suite(to_string(s));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == s);
    }
    CHECK_FALSE(parse_suite("nope").has_value());
}

TEST_CASE("every suite is clean on its proven range") {
    for (auto s : {Suite::ulc, Suite::identity, Suite::sign, Suite::preserve, Suite::decomposition}) {
        CAPTURE(to_string(s));
        const auto rep = run_suite(s, small(4000));
        CHECK(rep.clean());
        CHECK(rep.trials == 4000);
        CHECK(rep.seed == 3);
        CHECK(rep.checks >= rep.trials);
        CHECK(rep.witnesses.empty());
        CHECK_FALSE(rep.statistic.empty());
    }
    auto three = small(4000);
    three.n = 3;
    CHECK(run_suite(Suite::ulc, three).clean());
    auto wide = small(4000);
    wide.r = 5;
    CHECK(run_suite(Suite::ulc, wide).clean());
}

TEST_CASE("identity errors stay at rounding level") {
    const auto rep = run_suite(Suite::identity, small(4000));
    CHECK(rep.statistic == "max_relative_error");
    CHECK(rep.worst < 1e-12);
}

TEST_CASE("parallel and serial reports agree") {
    for (auto s : {Suite::ulc, Suite::identity, Suite::sign, Suite::preserve, Suite::decomposition}) {
        CAPTURE(to_string(s));
        const auto par = run_suite(s, small(3000));
        const auto ser = run_suite(s, small(3000, Execution::serial));
        CHECK(par.checks == ser.checks);
        CHECK(par.violations == ser.violations);
        CHECK(par.worst == ser.worst);
    }
}

TEST_CASE("witnesses are capped and ordered") {
    auto opt = small(20000);
    opt.n = 4;
    opt.r = 3;
    opt.max_witnesses = 5;
    const auto rep = run_suite(Suite::ulc, opt);
    REQUIRE(rep.violations > 5);
    CHECK(rep.witnesses.size() == 5);
    for (std::size_t i = 1; i < rep.witnesses.size(); ++i) {
        CHECK(rep.witnesses[i - 1].trial <= rep.witnesses[i].trial);
    }
    for (const auto& w : rep.witnesses) {
        CHECK(w.check == "conditional_ulc");
        CHECK_FALSE(w.data.empty());
    }
    CHECK(rep.worst < 0.0);
}

TEST_CASE("invalid options") {
    CHECK_THROWS_AS(run_suite(Suite::sign, small(0)), DomainError);
    auto bad = small(10);
    bad.r = 0;
    CHECK_THROWS_AS(run_suite(Suite::ulc, bad), DomainError);
}
