#include "fragsec/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace fragsec::oracle {

namespace {

double shortfall_fine(const Mode& mode, double quality) {
    if (!mode.has_fine())
        return 0.0;
    const FinePolicy& p = *mode.fine;
    return quality <= p.q_min ? p.F * (p.q_min - quality) : 0.0;
}

FineAmounts mode_fines(const Mode& mode, const StrategyProfile& profile) {
    return {shortfall_fine(mode, profile.q1), shortfall_fine(mode, profile.q2)};
}

double cost(const ModelParams& params, Vendor vendor, const StrategyProfile& profile) {
    const double z = vendor == Vendor::one ? profile.a : 1.0 - profile.b;
    const double d = z - params.Z_A;
    const double q = vendor == Vendor::one ? profile.q1 : profile.q2;
    const double C = vendor == Vendor::one ? params.C1 : params.C2;
    const double S = vendor == Vendor::one ? params.S1 : params.S2;
    return C * d * d + S * q * q * d * d;
}

double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

} // namespace

PriceVector solve_price_system(const ModelParams& params, const StrategyProfile& profile,
                               const FineAmounts& fines) {
    const double L = 1.0 - profile.a - profile.b;
    const double TL2 = 2.0 * params.T * L;
    const double dq = params.beta * (profile.q1 - profile.q2);
    const double r1 = TL2 * (profile.a + L / 2.0) + dq + fines.f1;
    const double r2 = TL2 * (profile.b + L / 2.0) - dq + fines.f2;
    // [[2, -1], [-1, 2]] has determinant 3.
    return {(2.0 * r1 + r2) / 3.0, (r1 + 2.0 * r2) / 3.0};
}

double indifferent_consumer(const ModelParams& params, const StrategyProfile& profile,
                            const PriceVector& prices) {
    const double z1 = profile.a;
    const double z2 = 1.0 - profile.b;
    const double advantage = params.beta * profile.q1 - prices.p1 - params.beta * profile.q2 + prices.p2;
    return (advantage + params.T * (z2 * z2 - z1 * z1)) / (2.0 * params.T * (z2 - z1));
}

double stage2_payoff(const ModelParams& params, const Mode& mode, const StrategyProfile& profile,
                     const PriceVector& prices, Vendor vendor) {
    const FineAmounts fines = mode_fines(mode, profile);
    const double x = indifferent_consumer(params, profile, prices);
    const double share = vendor == Vendor::one ? x : 1.0 - x;
    return (prices.of(vendor) - fines.of(vendor)) * share - cost(params, vendor, profile);
}

double stage1_payoff(const ModelParams& params, const Mode& mode, const StrategyProfile& profile,
                     Vendor vendor) {
    const PriceVector prices = solve_price_system(params, profile, mode_fines(mode, profile));
    return stage2_payoff(params, mode, profile, prices, vendor);
}

MonteCarloShare monte_carlo_share(const ModelParams& params, const StrategyProfile& profile,
                                  const PriceVector& prices, std::size_t n_samples,
                                  std::uint64_t seed) {
    if (n_samples == 0)
        throw DomainError("monte_carlo_share needs at least one sample");
    std::mt19937_64 gen(seed);
    const double z1 = profile.a;
    const double z2 = 1.0 - profile.b;
    std::size_t first = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double x = uniform01(gen);
        const double u1 = params.beta * profile.q1 - prices.p1 - params.T * (x - z1) * (x - z1);
        const double u2 = params.beta * profile.q2 - prices.p2 - params.T * (x - z2) * (x - z2);
        if (u1 >= u2)
            ++first;
    }
    MonteCarloShare out;
    out.samples = n_samples;
    out.share = static_cast<double>(first) / static_cast<double>(n_samples);
    out.standard_error = std::sqrt(out.share * (1.0 - out.share) / static_cast<double>(n_samples));
    out.degenerate = n_samples == 1;
    return out;
}

GridBestResponse grid_best_response(const ModelParams& params, const Mode& mode, Vendor vendor,
                                    double opp_offset, double opp_quality, const GridSpec& grid) {
    if (grid.location_points < 2 || grid.quality_points < 2)
        throw DomainError("grid needs at least two points per axis");
    const double bound = vendor == Vendor::one ? params.Z_A : 1.0 - params.Z_A;
    const std::size_t nl = grid.location_points;
    const std::size_t nq = grid.quality_points;

    GridBestResponse best;
    best.location_step = bound / static_cast<double>(nl - 1);
    best.quality_step = params.Q / static_cast<double>(nq - 1);
    best.utility = -std::numeric_limits<double>::infinity();
    bool found = false;

    for (std::size_t i = nl; i-- > 0;) {
        const double x = bound * (static_cast<double>(i) / static_cast<double>(nl - 1));
        if (1.0 - x - opp_offset < kLocationEpsilon)
            continue;
        for (std::size_t k = 0; k < nq; ++k) {
            const double q = params.Q * (static_cast<double>(k) / static_cast<double>(nq - 1));
            StrategyProfile p = vendor == Vendor::one
                                    ? StrategyProfile{x, opp_offset, q, opp_quality}
                                    : StrategyProfile{opp_offset, x, opp_quality, q};
            const PriceVector prices = solve_price_system(params, p, mode_fines(mode, p));
            if (prices.of(vendor) < 0.0)
                continue;
            const double u = stage2_payoff(params, mode, p, prices, vendor);
            if (!found || u > best.utility) {
                best.offset = x;
                best.quality = q;
                best.utility = u;
                found = true;
            }
        }
    }
    if (!found)
        throw DomainError("no admissible lattice cell");
    return best;
}

DerivativeCheck numeric_derivative_check(DerivativeTarget target, const DerivativePoint& point,
                                         double analytic, double step) {
    if (!(step > 0.0))
        throw DomainError("step must be positive");
    const ModelParams& params = point.params;
    const Vendor v = point.vendor;
    const StrategyProfile& base = point.profile;
    const PriceVector base_prices =
        point.prices.value_or(solve_price_system(params, base, mode_fines(point.mode, base)));

    double x = 0.0, lo = 0.0, hi = 0.0;
    const double opp_offset = base.offset(rival(v));
    switch (target) {
    case DerivativeTarget::price_foc:
        x = base_prices.of(v);
        lo = 0.0;
        hi = std::numeric_limits<double>::infinity();
        break;
    case DerivativeTarget::location_derivative:
        x = base.offset(v);
        lo = 0.0;
        hi = std::min(v == Vendor::one ? params.Z_A : 1.0 - params.Z_A,
                      1.0 - opp_offset - kLocationEpsilon);
        break;
    case DerivativeTarget::quality_derivative:
        x = base.quality(v);
        lo = 0.0;
        hi = params.Q;
        break;
    }

    auto f = [&](double t) {
        switch (target) {
        case DerivativeTarget::price_foc: {
            PriceVector p = base_prices;
            (v == Vendor::one ? p.p1 : p.p2) = t;
            return stage2_payoff(params, point.mode, base, p, v);
        }
        case DerivativeTarget::location_derivative:
            return stage1_payoff(params, point.mode, base.with_offset(v, t), v);
        case DerivativeTarget::quality_derivative:
            return stage1_payoff(params, point.mode, base.with_quality(v, t), v);
        }
        return 0.0;
    };

    double h = step * std::max(1.0, std::abs(x));
    for (int attempt = 0; attempt <= 10; ++attempt, h /= 2.0) {
        DerivativeCheck out;
        out.analytic = analytic;
        out.step = h;
        if (x - h >= lo && x + h <= hi) {
            out.numeric = (f(x + h) - f(x - h)) / (2.0 * h);
        } else if (x + 2.0 * h <= hi) {
            out.one_sided = true;
            out.numeric = (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
        } else if (x - 2.0 * h >= lo) {
            out.one_sided = true;
            out.numeric = (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (2.0 * h);
        } else {
            continue;
        }
        out.relative_error = std::abs(analytic - out.numeric) / std::max(1.0, std::abs(analytic));
        return out;
    }
    throw DomainError("point too close to the boundary for a finite difference");
}

} // namespace fragsec::oracle
