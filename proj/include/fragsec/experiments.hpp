#pragma once

// Parameter sweeps over one or two axes, and the paired fine / no-fine
// comparison.

#include "fragsec/config.hpp"
#include "fragsec/equilibrium.hpp"
#include "fragsec/regulation.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fragsec {

struct SweepAxis {
    std::string name; ///< a ModelParams field or F / q_min
    std::vector<double> values;
};

SweepAxis linspace_axis(const std::string& name, double min, double max, std::size_t steps);

bool is_sweepable(const std::string& name);

struct SweepSpec {
    ModelParams params;
    Mode mode;
    std::vector<SweepAxis> axes; ///< at most two; the first varies slowest
    SolverConfig solver;
    std::size_t jobs = 1; ///< grid points solved concurrently

    /// Throws ConfigError before anything is solved.
    void validate() const;
};

SweepSpec sweep_spec_from(const Scenario& scenario);

struct SweepPoint {
    ModelParams params;
    Mode mode;
};

/// Grid points in lexicographic axis order.
std::vector<SweepPoint> sweep_points(const SweepSpec& spec);

struct SweepRow {
    ModelParams params;
    Mode mode;
    EquilibriumResult result;

    /// Converged and certified as a mutual best response.
    bool ok() const;
    std::size_t n_equilibria() const;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct ComparisonRow {
    ModelParams params;
    FinePolicy policy;
    EquilibriumResult no_fine;
    EquilibriumResult with_fine;
    ComplianceConditions conditions; ///< at the fine equilibrium's locations

    bool ok() const;
};

/// Solves every grid point with and without the spec's fine policy.
/// Requires beta = 0 throughout.
std::vector<ComparisonRow> compare_fine_no_fine(const SweepSpec& spec);

} // namespace fragsec
