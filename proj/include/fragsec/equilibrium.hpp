#pragma once

// Stage-1 Nash equilibria by damped best-response iteration from a
// lattice of starts, with mutual-best-response certification against the
// grid oracle.

#include "fragsec/best_response.hpp"
#include "fragsec/model.hpp"
#include "fragsec/oracle.hpp"
#include "fragsec/regulation.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fragsec {

struct SolverConfig {
    double damping = 0.5;
    double tolerance = 1e-9; ///< sup-norm of (best response - profile)
    std::size_t max_iterations = 10000;
    std::vector<StrategyProfile> starts; ///< explicit starts; empty means a lattice
    std::size_t lattice = 5;             ///< lattice x lattice starts, qualities at Q/2
    ScanOptions scan;
    oracle::GridSpec certify_grid;
    double certify_tolerance = 1e-6;
    std::size_t jobs = 1; ///< starts solved concurrently

    void validate() const;
};

struct EquilibriumPoint {
    StrategyProfile profile;
    PriceVector prices;
    MarketOutcome outcome;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool converged = false;
    bool certified = false;
    double improvement1 = 0.0; ///< best grid deviation gain, vendor 1
    double improvement2 = 0.0;
    std::string method;
};

struct EquilibriumResult {
    Mode mode;
    /// Distinct equilibria, highest total utility first. When no start
    /// converged this holds the single lowest-residual point.
    std::vector<EquilibriumPoint> equilibria;
    std::size_t starts_tried = 0;
    std::size_t starts_rejected = 0; ///< co-located start or attractor

    const EquilibriumPoint& primary() const { return equilibria.front(); }
    bool converged() const { return !equilibria.empty() && equilibria.front().converged; }
};

/// Start profiles used when SolverConfig::starts is empty.
std::vector<StrategyProfile> lattice_starts(const ModelParams& params, std::size_t n);

EquilibriumResult solve_equilibrium(const ModelParams& params, const Mode& mode,
                                    const SolverConfig& config = {});

struct MutualBestResponseReport {
    double improvement1 = 0.0;
    double improvement2 = 0.0;
    bool certified = false;
};

/// Largest utility gain either vendor can obtain by deviating to a cell of
/// the oracle lattice; certified when both gains are below `tolerance`.
MutualBestResponseReport is_mutual_best_response(const ModelParams& params, const Mode& mode,
                                                 const StrategyProfile& profile,
                                                 double tolerance = 1e-6,
                                                 const oracle::GridSpec& grid = {});

/// C1 <= T / (12 Z_A) and C2 <= T / (12 (1 - Z_A)); requires beta = 0.
bool maximal_differentiation_check(const ModelParams& params);

} // namespace fragsec
