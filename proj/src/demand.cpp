#include "fragsec/demand.hpp"

#include <algorithm>

namespace fragsec {

double indifference_point(const ModelParams& params, const StrategyProfile& profile,
                          const PriceVector& prices) {
    validate_profile(params, profile);
    const double gap = profile.gap();
    const double spread = 2.0 * params.T * gap;
    return profile.a + gap / 2.0 + params.beta * (profile.q1 - profile.q2) / spread +
           (prices.p2 - prices.p1) / spread;
}

Shares market_shares(const ModelParams& params, const StrategyProfile& profile,
                     const PriceVector& prices) {
    const double x = indifference_point(params, profile, prices);
    Shares s;
    s.D1 = std::clamp(x, 0.0, 1.0);
    s.D2 = 1.0 - s.D1;
    s.clamped = s.D1 != x;
    return s;
}

} // namespace fragsec
