#pragma once

// Brute-force verifiers. Nothing here calls the demand, pricing or
// best-response code: prices come from solving the stage-2 first-order
// system directly and shares from comparing consumer utilities, so the
// oracle can be used to check those modules.

#include "fragsec/model.hpp"
#include "fragsec/regulation.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace fragsec::oracle {

/// Stage-2 equilibrium prices obtained by Cramer's rule on
///   2 p1 - p2 = 2TL(a + L/2) + beta(q1 - q2) + f1
///   2 p2 - p1 = 2TL(b + L/2) + beta(q2 - q1) + f2,   L = 1 - a - b.
PriceVector solve_price_system(const ModelParams& params, const StrategyProfile& profile,
                               const FineAmounts& fines = {});

/// Location of the consumer indifferent between the two offers (not clamped).
double indifferent_consumer(const ModelParams& params, const StrategyProfile& profile,
                            const PriceVector& prices);

/// Stage-2 payoff at arbitrary prices, fines evaluated from the mode.
double stage2_payoff(const ModelParams& params, const Mode& mode, const StrategyProfile& profile,
                     const PriceVector& prices, Vendor vendor);

/// Stage-1 payoff with prices from solve_price_system.
double stage1_payoff(const ModelParams& params, const Mode& mode, const StrategyProfile& profile,
                     Vendor vendor);

struct MonteCarloShare {
    double share = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
    bool degenerate = false; ///< a single sample: the standard error carries no information
};

/// Samples consumers uniformly on [0,1] with std::mt19937_64 (53-bit
/// doubles) and assigns each to the offer with higher utility; ties go to
/// vendor 1.
MonteCarloShare monte_carlo_share(const ModelParams& params, const StrategyProfile& profile,
                                  const PriceVector& prices, std::size_t n_samples,
                                  std::uint64_t seed);

struct GridSpec {
    std::size_t location_points = 400;
    std::size_t quality_points = 100;
};

struct GridBestResponse {
    double offset = 0.0;
    double quality = 0.0;
    double utility = 0.0;
    double location_step = 0.0;
    double quality_step = 0.0;
};

/// Exhaustive argmax of the stage-1 payoff over an offset x quality
/// lattice. Cells with co-located products or a negative own price are
/// skipped. Ties prefer the larger offset, then the lower quality.
GridBestResponse grid_best_response(const ModelParams& params, const Mode& mode, Vendor vendor,
                                    double opp_offset, double opp_quality,
                                    const GridSpec& grid = {});

enum class DerivativeTarget { price_foc, location_derivative, quality_derivative };

struct DerivativePoint {
    ModelParams params;
    Mode mode;
    StrategyProfile profile;
    Vendor vendor = Vendor::one;
    std::optional<PriceVector> prices; ///< price_foc only; defaults to the solved prices
};

struct DerivativeCheck {
    double analytic = 0.0;
    double numeric = 0.0;
    double relative_error = 0.0;
    double step = 0.0;
    bool one_sided = false;
};

/// Compares `analytic` with a finite difference of the oracle's own
/// payoff: central with step h = step * max(1, |x|), one-sided at a
/// boundary. The step is halved when neither fits; DomainError after ten
/// halvings.
DerivativeCheck numeric_derivative_check(DerivativeTarget target, const DerivativePoint& point,
                                         double analytic, double step = 1e-5);

} // namespace fragsec::oracle
