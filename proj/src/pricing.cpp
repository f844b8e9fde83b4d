#include "fragsec/pricing.hpp"

#include "fragsec/demand.hpp"

namespace fragsec {

PriceEquilibrium price_equilibrium(const ModelParams& params, const StrategyProfile& profile) {
    validate_profile(params, profile);
    const double gap = profile.gap();
    const double a = profile.a;
    const double b = profile.b;
    PriceEquilibrium eq;
    eq.prices.p1 = params.beta / 3.0 * (profile.q1 - profile.q2) + params.T * gap * (1.0 + (a - b) / 3.0);
    eq.prices.p2 = params.beta / 3.0 * (profile.q2 - profile.q1) + params.T * gap * (1.0 + (b - a) / 3.0);
    eq.negative_price = eq.prices.p1 < 0.0 || eq.prices.p2 < 0.0;
    return eq;
}

PriceEquilibrium price_equilibrium(const ModelParams& params, const StrategyProfile& profile,
                                   const FineAmounts& fines) {
    if (fines.f1 < 0.0 || fines.f2 < 0.0)
        throw DomainError("fines must be non-negative");
    PriceEquilibrium eq = price_equilibrium(params, profile);
    eq.prices.p1 += 2.0 * fines.f1 / 3.0 + fines.f2 / 3.0;
    eq.prices.p2 += 2.0 * fines.f2 / 3.0 + fines.f1 / 3.0;
    eq.negative_price = eq.prices.p1 < 0.0 || eq.prices.p2 < 0.0;
    return eq;
}

PriceEquilibrium price_equilibrium_with_fine(const ModelParams& params, const FinePolicy& policy,
                                             const StrategyProfile& profile) {
    policy.validate(params);
    return price_equilibrium(params, profile, fine_amounts(policy, profile));
}

PriceEquilibrium price_equilibrium(const ModelParams& params, const Mode& mode,
                                   const StrategyProfile& profile) {
    if (mode.has_fine())
        return price_equilibrium_with_fine(params, *mode.fine, profile);
    return price_equilibrium(params, profile);
}

double price_best_response(const ModelParams& params, const StrategyProfile& profile,
                           Vendor vendor, double rival_price, const FineAmounts& fines) {
    validate_profile(params, profile);
    const double gap = profile.gap();
    const double own_offset = profile.offset(vendor);
    const double opp_offset = profile.offset(rival(vendor));
    const double dq = profile.quality(vendor) - profile.quality(rival(vendor));
    return rival_price / 2.0 + params.T / 2.0 * gap * (1.0 + own_offset - opp_offset) +
           params.beta * dq / 2.0 + fines.of(vendor) / 2.0;
}

double price_first_order_condition(const ModelParams& params, const StrategyProfile& profile,
                                   const PriceVector& prices, Vendor vendor,
                                   const FineAmounts& fines) {
    const double x = indifference_point(params, profile, prices);
    const double own_share = vendor == Vendor::one ? x : 1.0 - x;
    const double slope = -1.0 / (2.0 * params.T * profile.gap());
    return own_share + (prices.of(vendor) - fines.of(vendor)) * slope;
}

double stage2_utility(const ModelParams& params, const StrategyProfile& profile,
                      const PriceVector& prices, Vendor vendor, const FineAmounts& fines) {
    const double x = indifference_point(params, profile, prices);
    const double own_share = vendor == Vendor::one ? x : 1.0 - x;
    return (prices.of(vendor) - fines.of(vendor)) * own_share -
           vendor_cost(params, vendor, profile.position(vendor), profile.quality(vendor));
}

double price_equilibrated_utility(const ModelParams& params, const Mode& mode,
                                  const StrategyProfile& profile, Vendor vendor) {
    const FineAmounts fines = fine_amounts(mode, profile);
    const PriceVector prices = price_equilibrium(params, profile, fines).prices;
    return stage2_utility(params, profile, prices, vendor, fines);
}

MarketOutcome equilibrium_outcome(const ModelParams& params, const Mode& mode,
                                  const StrategyProfile& profile) {
    const FineAmounts fines = fine_amounts(mode, profile);
    const PriceVector prices = price_equilibrium(params, profile, fines).prices;
    const Shares shares = market_shares(params, profile, prices);
    const VendorUtilities u = vendor_utility(params, profile, prices, shares, fines);
    MarketOutcome out;
    out.D1 = shares.D1;
    out.D2 = shares.D2;
    out.f1 = fines.f1;
    out.f2 = fines.f2;
    out.pi1 = u.pi1;
    out.pi2 = u.pi2;
    out.clamped = shares.clamped;
    return out;
}

} // namespace fragsec
