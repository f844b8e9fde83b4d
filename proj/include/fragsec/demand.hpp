#pragma once

#include "fragsec/model.hpp"

namespace fragsec {

/// Location of the consumer indifferent between the two products,
///   x = a + (1-a-b)/2 + (beta (q1-q2) + p2 - p1) / (2 T (1-a-b)).
/// Not clamped; may fall outside [0,1].
double indifference_point(const ModelParams& params, const StrategyProfile& profile,
                          const PriceVector& prices);

/// D1 = clamp(x, 0, 1), D2 = 1 - D1. The clamped flag marks regimes
/// outside full interior coverage.
Shares market_shares(const ModelParams& params, const StrategyProfile& profile,
                     const PriceVector& prices);

} // namespace fragsec
