#include "fragsec/regulation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fragsec {

void FinePolicy::validate(const ModelParams& params) const {
    if (!std::isfinite(F) || !std::isfinite(q_min))
        throw DomainError("fine policy must be finite");
    if (F < 0.0)
        throw DomainError("fine rate F must be non-negative");
    if (q_min < 0.0 || q_min > params.Q)
        throw DomainError("q_min must lie in [0, Q]");
}

double fine_amount(const FinePolicy& policy, double quality) {
    if (quality < 0.0)
        throw DomainError("quality must be non-negative");
    return policy.q_min >= quality ? policy.F * (policy.q_min - quality) : 0.0;
}

FineAmounts fine_amounts(const FinePolicy& policy, const StrategyProfile& profile) {
    return {fine_amount(policy, profile.q1), fine_amount(policy, profile.q2)};
}

FineAmounts fine_amounts(const Mode& mode, const StrategyProfile& profile) {
    return mode.has_fine() ? fine_amounts(*mode.fine, profile) : FineAmounts{};
}

ComplianceConditions min_quality_conditions(const ModelParams& params, const FinePolicy& policy,
                                            double a, double b) {
    params.validate();
    policy.validate(params);
    require_separated(a, b);
    const double gap = 1.0 - a - b;
    const double F2 = policy.F * policy.F;
    const double d1 = a - params.Z_A;
    const double d2 = 1.0 - b - params.Z_A;

    ComplianceConditions c;
    c.vendor1_cost.slack = F2 - 18.0 * params.T * params.S1 * gap * d1 * d1;
    c.vendor2_cost.slack = F2 - 18.0 * params.T * params.S2 * gap * d2 * d2;
    c.price_margin.slack = 3.0 + a - b - policy.F * policy.q_min / (params.T * gap);
    for (ConditionCheck* check : {&c.vendor1_cost, &c.vendor2_cost, &c.price_margin})
        check->holds = check->slack >= 0.0;
    return c;
}

VendorComplianceConditions vendor_compliance_conditions(const ModelParams& params,
                                                        const FinePolicy& policy, Vendor vendor,
                                                        double a, double b, double opp_fine) {
    params.validate();
    policy.validate(params);
    require_separated(a, b);
    const double gap = 1.0 - a - b;
    const double d = vendor == Vendor::one ? a - params.Z_A : 1.0 - b - params.Z_A;
    const double lead = vendor == Vendor::one ? a - b : b - a;

    VendorComplianceConditions c;
    c.cost.slack = policy.F * policy.F - 18.0 * params.T * params.security_cost(vendor) * gap * d * d;
    c.margin.slack = 3.0 + lead + (opp_fine - policy.F * policy.q_min) / (params.T * gap);
    c.cost.holds = c.cost.slack >= 0.0;
    c.margin.holds = c.margin.slack >= 0.0;
    return c;
}

namespace {

// Payoff of `vendor` as a function of its own quality with prices at the
// fine-regime equilibrium. On each side of q_min the price margin p - f
// is linear in q, so the payoff is quadratic there.
struct QualityPayoff {
    double T_gap;      // T (1-a-b)
    double base;       // -beta q_opp / 3 + T (1-a-b)(3 + lead) / 3 + f_opp / 3
    double beta;
    double F;
    double q_min;
    double fixed_cost; // C d^2
    double quality_cost; // S d^2

    double fine(double q) const { return q <= q_min ? F * (q_min - q) : 0.0; }
    double margin(double q) const { return base + beta * q / 3.0 - fine(q) / 3.0; }
    double price(double q) const { return base + beta * q / 3.0 + 2.0 * fine(q) / 3.0; }
    double utility(double q) const {
        const double m = margin(q);
        return m * m / (2.0 * T_gap) - fixed_cost - quality_cost * q * q;
    }
};

double piecewise_quality_maximizer(const ModelParams& params, const FinePolicy& policy,
                                   Vendor vendor, double a, double b, double opp_quality,
                                   double opp_fine) {
    require_separated(a, b);
    const double gap = 1.0 - a - b;
    const double d = vendor == Vendor::one ? a - params.Z_A : 1.0 - b - params.Z_A;
    const double lead = vendor == Vendor::one ? a - b : b - a;

    QualityPayoff payoff;
    payoff.T_gap = params.T * gap;
    payoff.base = -params.beta * opp_quality / 3.0 + payoff.T_gap * (3.0 + lead) / 3.0 + opp_fine / 3.0;
    payoff.beta = params.beta;
    payoff.F = policy.F;
    payoff.q_min = policy.q_min;
    payoff.fixed_cost = params.customization_cost(vendor) * d * d;
    payoff.quality_cost = params.security_cost(vendor) * d * d;

    const double Q = params.Q;
    const double kink = std::min(policy.q_min, Q);
    std::vector<double> candidates = {0.0, kink, Q};

    struct Piece {
        double lo, hi;
        double m0, k; // margin = m0 + k q
        double p0, j; // price  = p0 + j q
    };
    const Piece pieces[] = {
        {0.0, kink, payoff.base - policy.F * policy.q_min / 3.0, (params.beta + policy.F) / 3.0,
         payoff.base + 2.0 * policy.F * policy.q_min / 3.0, (params.beta - 2.0 * policy.F) / 3.0},
        {kink, Q, payoff.base, params.beta / 3.0, payoff.base, params.beta / 3.0},
    };
    for (const Piece& piece : pieces) {
        const double curvature = piece.k * piece.k / payoff.T_gap - 2.0 * payoff.quality_cost;
        if (curvature != 0.0) {
            const double q = -(piece.k * piece.m0 / payoff.T_gap) / curvature;
            if (q > piece.lo && q < piece.hi)
                candidates.push_back(q);
        }
        if (piece.j != 0.0) {
            const double q = -piece.p0 / piece.j;
            if (q > piece.lo && q < piece.hi)
                candidates.push_back(q);
        }
    }
    std::sort(candidates.begin(), candidates.end());

    // Q always yields a non-negative own price since q_opp <= Q.
    double best_q = Q;
    double best_u = payoff.utility(Q);
    bool found = false;
    for (double q : candidates) {
        if (payoff.price(q) < -1e-12)
            continue;
        const double u = payoff.utility(q);
        if (!found || u > best_u) {
            best_q = q;
            best_u = u;
            found = true;
        }
    }
    return best_q;
}

} // namespace

double fine_quality_best_response_naive(const ModelParams& params, const FinePolicy& policy,
                                        Vendor vendor, double a, double b, double opp_fine) {
    params.validate();
    policy.validate(params);
    if (params.beta != 0.0)
        throw DomainError("naive fine quality best response requires beta = 0");
    if (opp_fine < 0.0)
        throw DomainError("opponent fine must be non-negative");
    if (vendor_compliance_conditions(params, policy, vendor, a, b, opp_fine).all())
        return policy.q_min;
    return piecewise_quality_maximizer(params, policy, vendor, a, b, 0.0, opp_fine);
}

double fine_quality_best_response(const ModelParams& params, const FinePolicy& policy,
                                  Vendor vendor, double a, double b, double opp_quality) {
    params.validate();
    policy.validate(params);
    if (opp_quality < 0.0 || opp_quality > params.Q)
        throw DomainError("opponent quality must lie in [0, Q]");
    return piecewise_quality_maximizer(params, policy, vendor, a, b, opp_quality,
                                       fine_amount(policy, opp_quality));
}

} // namespace fragsec
