// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "fragsec/best_response.hpp"
#include "fragsec/calibration.hpp"
#include "fragsec/demand.hpp"
#include "fragsec/equilibrium.hpp"
#include "fragsec/experiments.hpp"
#include "fragsec/oracle.hpp"
#include "fragsec/pricing.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace fragsec;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

const MarketObservation kObserved{0.1203, 0.1830, 0.75, 0.175, 4.0, 4.0};

Outcome calibration_reproduction() {
    const CalibratedConstants c = calibrate(kObserved, 0.5);
    const double pref = std::max(std::abs(c.T - 5.7414), std::abs(c.beta - 0.4362));
    const double cost = std::max({std::abs(c.S1 - 0.6723), std::abs(c.C1 - 1.4882), std::abs(c.S2 - 4.1338),
                                  std::abs(c.C2 - 2.4875)});
    return {pref < 1e-3 && cost < 2e-3, fmt("T/beta err=%.2e", pref) + fmt(" S/C err=%.2e", cost)};
}

Outcome raw_quantification() {
    const DeviceObservation htc{7354468, 7550704, 19625000, 10, 40, 4};
    const DeviceObservation samsung{5660569, 5334152, 17339000, 33, 40, 4};
    const MarketObservation m = quantify_market(htc, samsung, 0.5);
    const double loc = std::max(std::abs(m.a - 0.1203), std::abs(m.b - 0.1830));
    return {loc <= 1e-4 && m.q1 == 0.75 && m.q2 == 0.175,
            fmt("a=%.6f", m.a) + fmt(" b=%.6f", m.b) + fmt(" q1=%.17g", m.q1) + fmt(" q2=%.17g", m.q2)};
}

Outcome table_reproduction() {
    const double rows[5][5] = {{0.0, 0.0, 0.2612, 0.5, 1.0},
                               {0.3684, 0.2888, 1.0, 0.3639, 1.0},
                               {0.7368, 0.3195, 1.0, 0.3638, 1.0},
                               {1.1053, 0.3452, 1.0, 0.3637, 1.0},
                               {1.4737, 0.3677, 1.0, 0.3636, 1.0}};
    bool pass = true;
    std::string detail;
    for (const auto& r : rows) {
        ModelParams p;
        p.T = 1.6;
        p.beta = 0.6;
        p.C1 = r[0];
        p.C2 = 1.3;
        p.S1 = 1.0;
        p.S2 = 1.0;
        const EquilibriumResult res = solve_equilibrium(p, Mode::no_fine());
        const StrategyProfile& s = res.primary().profile;
        const double err = std::max({std::abs(s.a - r[1]), std::abs(s.q1 - r[2]), std::abs(s.b - r[3]),
                                     std::abs(s.q2 - r[4])});
        const bool ok = res.converged() && err < 1e-2;
        pass = pass && ok;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%sC1=%g:(%.4f,%.4f,%.4f,%.4f) err=%.3g%s", detail.empty() ? "" : " ", r[0],
                      s.a, s.q1, s.b, s.q2, err, ok ? "" : "!");
        detail += buf;
    }
    return {pass, detail};
}

Outcome price_fixed_point() {
    testing::Rng rng(1001);
    double worst_foc = 0.0;
    double worst_gain = -1.0;
    int accepted = 0;
    int skipped = 0;
    while (accepted < 1000) {
        const ModelParams p = rng.params(rng.coin());
        const StrategyProfile s = rng.profile(p, 0.02);
        const bool with_fine = accepted % 2 == 1;
        const Mode mode = with_fine ? Mode::with_fine({rng.uniform(0, 5), rng.uniform(0, p.Q)}) : Mode::no_fine();
        const PriceVector pr = price_equilibrium(p, mode, s).prices;
        const FineAmounts f = fine_amounts(mode, s);
        const double x = oracle::indifferent_consumer(p, s, pr);
        if (x < 0.0 || x > 1.0 || pr.p1 < f.f1 || pr.p2 < f.f2) {
            ++skipped;
            continue;
        }
        ++accepted;
        const double slope = 2.0 * p.T * s.gap();
        const double foc1 = x - (pr.p1 - f.f1) / slope;
        const double foc2 = (1.0 - x) - (pr.p2 - f.f2) / slope;
        worst_foc = std::max({worst_foc, std::abs(foc1), std::abs(foc2)});

        for (Vendor v : {Vendor::one, Vendor::two}) {
            auto payoff = [&](double price) {
                PriceVector dev = pr;
                (v == Vendor::one ? dev.p1 : dev.p2) = price;
                const double xd = std::clamp(oracle::indifferent_consumer(p, s, dev), 0.0, 1.0);
                return (price - f.of(v)) * (v == Vendor::one ? xd : 1.0 - xd);
            };
            const double base = payoff(pr.of(v));
            const double span = std::max(1.0, pr.of(v));
            const double lo = std::max(0.0, pr.of(v) - span);
            const double hi = pr.of(v) + span;
            for (int k = 0; k <= 200; ++k)
                worst_gain = std::max(worst_gain, payoff(lo + (hi - lo) * k / 200.0) - base);
        }
    }
    return {worst_foc < 1e-12 && worst_gain <= 1e-9,
            fmt("max FOC residual=%.2e", worst_foc) + fmt(" max deviation gain=%.2e", worst_gain) +
                " (" + std::to_string(skipped) + " profiles outside the interior regime redrawn)"};
}

Outcome reductions() {
    testing::Rng rng(1002);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const ModelParams naive = rng.params(true);
        const StrategyProfile s = rng.profile(naive, 0.01);
        const PriceVector pr = price_equilibrium(naive, s).prices;
        const double L = 1.0 - s.a - s.b;
        mismatches += pr.p1 != naive.T * L * (1.0 + (s.a - s.b) / 3.0);
        mismatches += pr.p2 != naive.T * L * (1.0 + (s.b - s.a) / 3.0);

        const ModelParams aware = rng.params();
        const StrategyProfile t = rng.profile(aware, 0.01);
        const PriceVector plain = price_equilibrium(aware, t).prices;
        const PriceVector zero = price_equilibrium_with_fine(aware, {0.0, rng.uniform(0, aware.Q)}, t).prices;
        mismatches += plain.p1 != zero.p1 || plain.p2 != zero.p2;

        const Vendor v = rng.coin() ? Vendor::one : Vendor::two;
        const double opp = rng.uniform(0.0, naive.max_offset(rival(v)) * 0.95);
        const double unfined = naive_location_best_response(naive, v, opp).offset;
        const double fined = naive_location_best_response_with_fine(naive, {rng.uniform(0, 10), 0.0}, v, opp).offset;
        mismatches += unfined != fined;
    }
    return {mismatches == 0, std::to_string(mismatches) + " inexact reductions in 4000 comparisons"};
}

Outcome gradient_checks() {
    testing::Rng rng(1003);
    double worst = 0.0;
    int one_sided = 0;
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = rng.params(i % 4 == 0);
        StrategyProfile s = rng.profile(p, 0.1);
        s.a = std::clamp(s.a, 0.01, p.Z_A - 0.01);
        s.b = std::clamp(s.b, 0.01, 1.0 - p.Z_A - 0.01);
        s.q1 = std::clamp(s.q1, 0.01, p.Q - 0.01);
        s.q2 = std::clamp(s.q2, 0.01, p.Q - 0.01);
        for (Vendor v : {Vendor::one, Vendor::two}) {
            const oracle::DerivativePoint pt{p, {}, s, v, std::nullopt};
            const auto loc = oracle::numeric_derivative_check(oracle::DerivativeTarget::location_derivative, pt,
                                                              location_utility_derivative(p, v, s));
            const auto qual = oracle::numeric_derivative_check(oracle::DerivativeTarget::quality_derivative, pt,
                                                               quality_utility_derivative(p, v, s));
            worst = std::max({worst, loc.relative_error, qual.relative_error});
            one_sided += loc.one_sided + qual.one_sided;
        }
    }
    return {worst < 1e-5 && one_sided == 0,
            fmt("max relative error=%.2e", worst) + " over 400 central differences"};
}

Outcome monte_carlo_demand() {
    testing::Rng rng(1004);
    const std::size_t N = 1000000;
    double worst = 0.0;
    int scenarios = 0;
    while (scenarios < 20) {
        const ModelParams p = rng.params(rng.coin());
        const StrategyProfile s = rng.profile(p, 0.05);
        const PriceVector pr = price_equilibrium(p, s).prices;
        const Shares sh = market_shares(p, s, pr);
        if (sh.clamped)
            continue;
        const auto mc = oracle::monte_carlo_share(p, s, pr, N, 20120101 + static_cast<std::uint64_t>(scenarios));
        const double bound = 3.0 * std::sqrt(sh.D1 * (1.0 - sh.D1) / static_cast<double>(N));
        worst = std::max(worst, std::abs(mc.share - sh.D1) / bound);
        ++scenarios;
    }
    return {worst <= 1.0, fmt("max |D_mc - D1| / (3 sigma)=%.3f", worst)};
}

Outcome fine_regime() {
    SweepSpec spec;
    spec.params.T = 8.0;
    spec.params.S1 = 0.602;
    spec.params.S2 = 1.54;
    spec.mode = Mode::with_fine({10.0, 0.4});
    spec.axes = {linspace_axis("C1", 0.0, 3.0, 7), linspace_axis("C2", 0.0, 3.0, 7)};
    int violations = 0;
    const auto rows = compare_fine_no_fine(spec);
    for (const ComparisonRow& row : rows) {
        if (!row.ok() || !row.conditions.all()) {
            ++violations;
            continue;
        }
        const EquilibriumPoint& n = row.no_fine.primary();
        const EquilibriumPoint& f = row.with_fine.primary();
        violations += f.profile.q1 != 0.4 || f.profile.q2 != 0.4;
        violations += f.prices.p1 > n.prices.p1 || f.prices.p2 > n.prices.p2;
        violations += f.profile.a < n.profile.a || f.profile.b < n.profile.b;
    }
    return {violations == 0, std::to_string(rows.size()) + " grid points, " + std::to_string(violations) +
                                 " violations"};
}

Outcome oracle_agreement() {
    testing::Rng rng(1005);
    int misses = 0;
    int naive = 0;
    for (int i = 0; i < 50; ++i) {
        const ModelParams p = rng.params(i % 2 == 0);
        naive += p.beta == 0.0;
        const Vendor v = rng.coin() ? Vendor::one : Vendor::two;
        const double opp = rng.uniform(0.0, p.max_offset(rival(v)) * 0.9);
        const double opp_q = rng.uniform(0.0, p.Q);
        const JointBestResponse br = joint_best_response(p, v, opp, opp_q);
        const oracle::GridBestResponse g = oracle::grid_best_response(p, {}, v, opp, opp_q, {400, 100});
        const bool near = std::abs(br.offset - g.offset) <= g.location_step * (1 + 1e-9) &&
                          std::abs(br.quality - g.quality) <= g.quality_step * (1 + 1e-9);
        misses += !near;
    }
    return {misses == 0, std::to_string(misses) + " of 50 outside one cell (" + std::to_string(naive) +
                             " naive, " + std::to_string(50 - naive) + " security-aware)"};
}

Outcome positive_quality() {
    testing::Rng rng(1006);
    double least = INFINITY;
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = rng.params();
        const StrategyProfile s = rng.profile(p);
        least = std::min(least, quality_best_response(p, Vendor::one, s.a, s.b, 0.0).quality);
    }
    return {least > 0.0, fmt("min q1 best response=%.4g", least)};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"1 calibration reproduction", calibration_reproduction},
        {"2 raw-data quantification", raw_quantification},
        {"3 C1 table reproduction", table_reproduction},
        {"4 price equilibrium fixed point", price_fixed_point},
        {"5 exact reductions", reductions},
        {"6 derivative checks", gradient_checks},
        {"7 Monte-Carlo demand", monte_carlo_demand},
        {"8 fine regime properties", fine_regime},
        {"9 oracle agreement", oracle_agreement},
        {"10 positive quality against a zero-quality rival", positive_quality},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
