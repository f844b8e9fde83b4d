#pragma once

// Closed-form second-stage price equilibria.

#include "fragsec/model.hpp"
#include "fragsec/regulation.hpp"

namespace fragsec {

struct PriceEquilibrium {
    PriceVector prices;
    bool negative_price = false; ///< an analytic price fell below zero (reported, not clamped)
};

/// p1* = beta/3 (q1-q2) + T (1-a-b)(1 + (a-b)/3), p2* symmetric.
PriceEquilibrium price_equilibrium(const ModelParams& params, const StrategyProfile& profile);

/// Same with fines: adds 2 f_i / 3 + f_j / 3 to p_i*.
PriceEquilibrium price_equilibrium(const ModelParams& params, const StrategyProfile& profile,
                                   const FineAmounts& fines);

/// Fines evaluated from the policy at the profile's qualities.
PriceEquilibrium price_equilibrium_with_fine(const ModelParams& params, const FinePolicy& policy,
                                             const StrategyProfile& profile);

PriceEquilibrium price_equilibrium(const ModelParams& params, const Mode& mode,
                                   const StrategyProfile& profile);

/// Utility-maximizing own price against a fixed rival price
/// (stationary point of the concave stage-2 payoff).
double price_best_response(const ModelParams& params, const StrategyProfile& profile,
                           Vendor vendor, double rival_price, const FineAmounts& fines = {});

/// d pi_i / d p_i = D_i + (p_i - f_i) dD_i/dp_i at the given prices.
double price_first_order_condition(const ModelParams& params, const StrategyProfile& profile,
                                   const PriceVector& prices, Vendor vendor,
                                   const FineAmounts& fines = {});

/// Stage-2 payoff of `vendor` at arbitrary prices, using the unclamped
/// indifference point.
double stage2_utility(const ModelParams& params, const StrategyProfile& profile,
                      const PriceVector& prices, Vendor vendor, const FineAmounts& fines = {});

/// Stage-1 payoff: prices set to the stage-2 equilibrium of `mode`.
double price_equilibrated_utility(const ModelParams& params, const Mode& mode,
                                  const StrategyProfile& profile, Vendor vendor);

/// Shares, fines and utilities at the mode's equilibrium prices.
MarketOutcome equilibrium_outcome(const ModelParams& params, const Mode& mode,
                                  const StrategyProfile& profile);

} // namespace fragsec
