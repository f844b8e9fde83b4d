#include "fragsec/regulation.hpp"

#include "fragsec/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace fragsec;

TEST_SUITE("regulation") {

TEST_CASE("fine amount") {
    const FinePolicy policy{10.0, 0.4};
    CHECK(fine_amount(policy, 0.7) == 0.0);
    CHECK(fine_amount(policy, 0.0) == doctest::Approx(4.0));
    CHECK(fine_amount(policy, 0.4) == 0.0);
    CHECK(fine_amount(policy, 0.4 - 1e-9) == doctest::Approx(1e-8));
    CHECK_THROWS_AS(fine_amount(policy, -0.1), DomainError);
}

TEST_CASE("fine is Lipschitz with constant F") {
    testing::Rng rng(23);
    for (int i = 0; i < 200; ++i) {
        const FinePolicy policy{rng.uniform(0, 20), rng.uniform(0, 1)};
        const double x = rng.uniform(0, 1);
        const double y = rng.uniform(0, 1);
        CHECK(std::abs(fine_amount(policy, x) - fine_amount(policy, y)) <= policy.F * std::abs(x - y) + 1e-12);
    }
}

TEST_CASE("policy validation") {
    ModelParams p;
    CHECK_THROWS_AS(FinePolicy({-1.0, 0.2}).validate(p), DomainError);
    CHECK_THROWS_AS(FinePolicy({1.0, 1.2}).validate(p), DomainError);
    CHECK_NOTHROW(FinePolicy({0.0, 1.0}).validate(p));
}

TEST_CASE("compliance conditions at a = b = 0.2") {
    ModelParams p;
    p.T = 8.0;
    p.S1 = 0.602;
    p.S2 = 1.54;
    const ComplianceConditions c = min_quality_conditions(p, {10.0, 0.4}, 0.2, 0.2);
    CHECK(c.vendor1_cost.slack == doctest::Approx(100.0 - 18.0 * 8.0 * 0.602 * 0.6 * 0.09));
    CHECK(c.vendor1_cost.holds);
    CHECK(c.vendor2_cost.holds);
    CHECK(c.price_margin.slack == doctest::Approx(3.0 - 4.0 / 4.8));
    CHECK(c.all());

    const ComplianceConditions none = min_quality_conditions(p, {0.0, 0.4}, 0.2, 0.2);
    CHECK_FALSE(none.vendor1_cost.holds);
    CHECK_THROWS_AS(min_quality_conditions(p, {10.0, 0.4}, 0.5, 0.5), DomainError);
}

TEST_CASE("vendor 1's margin condition coincides with the stated one") {
    testing::Rng rng(29);
    for (int i = 0; i < 100; ++i) {
        ModelParams p = rng.params(true);
        const StrategyProfile s = rng.profile(p);
        const FinePolicy policy{rng.uniform(0, 20), rng.uniform(0, p.Q)};
        const ComplianceConditions c = min_quality_conditions(p, policy, s.a, s.b);
        const VendorComplianceConditions v1 = vendor_compliance_conditions(p, policy, Vendor::one, s.a, s.b, 0.0);
        CHECK(v1.margin.slack == doctest::Approx(c.price_margin.slack));
        CHECK(v1.cost.slack == doctest::Approx(c.vendor1_cost.slack));
    }
}

TEST_CASE("slack is monotone in F and q_min") {
    testing::Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        ModelParams p = rng.params(true);
        const StrategyProfile s = rng.profile(p);
        const double q = rng.uniform(0, p.Q);
        const double F = rng.uniform(0, 10);
        const ComplianceConditions lo = min_quality_conditions(p, {F, q}, s.a, s.b);
        const ComplianceConditions hiF = min_quality_conditions(p, {F + 1.0, q}, s.a, s.b);
        CHECK(hiF.vendor1_cost.slack >= lo.vendor1_cost.slack);
        CHECK(hiF.vendor2_cost.slack >= lo.vendor2_cost.slack);
        const ComplianceConditions hiQ = min_quality_conditions(p, {F, std::min(p.Q, q + 0.1)}, s.a, s.b);
        CHECK(hiQ.price_margin.slack <= lo.price_margin.slack);
    }
}

TEST_CASE("naive quality best response under the fine") {
    ModelParams p;
    p.T = 8.0;
    p.S1 = 0.602;
    p.S2 = 1.54;
    const FinePolicy policy{10.0, 0.4};
    CHECK(fine_quality_best_response_naive(p, policy, Vendor::one, 0.2, 0.2, 0.0) == 0.4);
    CHECK(fine_quality_best_response_naive(p, policy, Vendor::two, 0.2, 0.2, 0.0) == 0.4);
    CHECK(fine_quality_best_response_naive(p, {0.0, 0.4}, Vendor::one, 0.2, 0.2, 0.0) == 0.0);

    ModelParams aware = p;
    aware.beta = 0.5;
    CHECK_THROWS_AS(fine_quality_best_response_naive(aware, policy, Vendor::one, 0.2, 0.2, 0.0), DomainError);
}

// Exhaustive scan of the oracle's payoff over quality.
double scan_best_quality_utility(const ModelParams& p, const Mode& mode, Vendor v, StrategyProfile s) {
    double best = -1e300;
    const int n = 20001;
    for (int k = 0; k < n; ++k) {
        const double q = p.Q * k / (n - 1.0);
        const StrategyProfile t = s.with_quality(v, q);
        const PriceVector prices = oracle::solve_price_system(
            p, t, {fine_amount(*mode.fine, t.q1), fine_amount(*mode.fine, t.q2)});
        if (prices.of(v) < 0.0)
            continue;
        best = std::max(best, oracle::stage2_payoff(p, mode, t, prices, v));
    }
    return best;
}

TEST_CASE("fine quality best response beats every quality on a fine scan") {
    testing::Rng rng(37);
    for (int i = 0; i < 60; ++i) {
        const bool naive = i % 2 == 0;
        ModelParams p = rng.params(naive);
        StrategyProfile s = rng.profile(p);
        const FinePolicy policy{rng.uniform(0, 6), rng.uniform(0, p.Q)};
        const Mode mode = Mode::with_fine(policy);
        for (Vendor v : {Vendor::one, Vendor::two}) {
            const double opp_q = s.quality(rival(v));
            const double q = naive ? fine_quality_best_response_naive(p, policy, v, s.a, s.b, fine_amount(policy, opp_q))
                                   : fine_quality_best_response(p, policy, v, s.a, s.b, opp_q);
            REQUIRE(q >= 0.0);
            REQUIRE(q <= p.Q);
            const double u = oracle::stage1_payoff(p, mode, s.with_quality(v, q), v);
            CHECK(u >= scan_best_quality_utility(p, mode, v, s) - 1e-9);
        }
    }
}

}
