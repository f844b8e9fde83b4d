#pragma once

// Regulator instrument: a per-unit fine on quality shortfall below a
// minimum standard, scaled by market share inside the vendor payoff.

#include "fragsec/model.hpp"

#include <optional>
#include <string>

namespace fragsec {

struct FinePolicy {
    double F = 0.0;     ///< money per unit of quality shortfall
    double q_min = 0.0; ///< minimum acceptable quality

    void validate(const ModelParams& params) const;
};

/// Game variant being solved: plain, or with a fine policy in force.
struct Mode {
    std::optional<FinePolicy> fine;

    static Mode no_fine() { return {}; }
    static Mode with_fine(FinePolicy policy) { return {policy}; }

    bool has_fine() const { return fine.has_value(); }
    std::string label() const { return has_fine() ? "with_fine" : "no_fine"; }
};

/// f(q) = F (q_min - q) when q <= q_min, else 0.
double fine_amount(const FinePolicy& policy, double quality);

FineAmounts fine_amounts(const FinePolicy& policy, const StrategyProfile& profile);

/// Fines implied by a mode (all zero without a policy).
FineAmounts fine_amounts(const Mode& mode, const StrategyProfile& profile);

struct ConditionCheck {
    bool holds = false;
    double slack = 0.0; ///< left-hand side; holds iff slack >= 0
};

/// Sufficient conditions (naive consumers) for both vendors to settle on
/// q_min at locations (a, b):
///   vendor1_cost:  F^2 - 18 T S1 (1-a-b) (a - Z_A)^2     >= 0
///   vendor2_cost:  F^2 - 18 T S2 (1-a-b) (1-b - Z_A)^2   >= 0
///   price_margin:  3 + a - b - F q_min / (T (1-a-b))     >= 0
struct ComplianceConditions {
    ConditionCheck vendor1_cost;
    ConditionCheck vendor2_cost;
    ConditionCheck price_margin;

    bool all() const { return vendor1_cost.holds && vendor2_cost.holds && price_margin.holds; }
};

ComplianceConditions min_quality_conditions(const ModelParams& params, const FinePolicy& policy,
                                            double a, double b);

/// The two conditions under which `vendor` prefers q_min, given the fine
/// its rival pays. Vendor 2's margin uses 3 - a + b (its own demand
/// intercept); vendor 1's coincides with `price_margin` when opp_fine = 0.
struct VendorComplianceConditions {
    ConditionCheck cost;
    ConditionCheck margin;

    bool all() const { return cost.holds && margin.holds; }
};

VendorComplianceConditions vendor_compliance_conditions(const ModelParams& params,
                                                        const FinePolicy& policy, Vendor vendor,
                                                        double a, double b, double opp_fine);

/// Quality best response of a vendor facing the fine when consumers are
/// naive (beta must be 0). Returns q_min when the vendor's conditions hold,
/// otherwise the exact maximizer of the piecewise-quadratic payoff over
/// [0, Q]. Ties resolve toward lower quality.
double fine_quality_best_response_naive(const ModelParams& params, const FinePolicy& policy,
                                        Vendor vendor, double a, double b, double opp_fine);

/// Exact quality best response under a fine for any beta >= 0, subject to
/// a non-negative own equilibrium price. Used by the numeric fallback.
double fine_quality_best_response(const ModelParams& params, const FinePolicy& policy,
                                  Vendor vendor, double a, double b, double opp_quality);

} // namespace fragsec
