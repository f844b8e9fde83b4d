#include "fragsec/equilibrium.hpp"

#include "fragsec/pricing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <tuple>

namespace fragsec {

void SolverConfig::validate() const {
    if (!(damping > 0.0 && damping <= 1.0))
        throw DomainError("damping must lie in (0, 1]");
    if (!(tolerance > 0.0))
        throw DomainError("tolerance must be positive");
    if (max_iterations == 0)
        throw DomainError("max_iterations must be positive");
    if (starts.empty() && lattice == 0)
        throw DomainError("lattice must be positive when no explicit starts are given");
    if (scan.grid_points < 2)
        throw DomainError("scan grid needs at least two points");
    if (certify_grid.location_points < 2 || certify_grid.quality_points < 2)
        throw DomainError("certification grid needs at least two points per axis");
}

std::vector<StrategyProfile> lattice_starts(const ModelParams& params, std::size_t n) {
    auto node = [n](double bound, std::size_t i) {
        return n == 1 ? bound / 2.0 : bound * (static_cast<double>(i) / static_cast<double>(n - 1));
    };
    std::vector<StrategyProfile> starts;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            starts.push_back({node(params.Z_A, i), node(1.0 - params.Z_A, j), params.Q / 2.0, params.Q / 2.0});
    return starts;
}

namespace {

struct Move {
    double offset;
    double quality;
};

using Responder = std::function<Move(Vendor, double, double)>;

struct Run {
    StrategyProfile profile;
    std::size_t iterations = 0;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    bool rejected = false;
};

Run iterate(const ModelParams& params, const Responder& respond, StrategyProfile x,
            const SolverConfig& config) {
    Run run;
    if (x.gap() < kLocationEpsilon) {
        run.rejected = true;
        return run;
    }
    const double w = config.damping;
    try {
        for (std::size_t it = 1; it <= config.max_iterations; ++it) {
            const Move m1 = respond(Vendor::one, x.b, x.q2);
            double residual = std::max(std::abs(m1.offset - x.a), std::abs(m1.quality - x.q1));
            StrategyProfile next = x;
            next.a = std::clamp(x.a + w * (m1.offset - x.a), 0.0, params.Z_A);
            next.q1 = std::clamp(x.q1 + w * (m1.quality - x.q1), 0.0, params.Q);

            const Move m2 = respond(Vendor::two, next.a, next.q1);
            residual = std::max({residual, std::abs(m2.offset - x.b), std::abs(m2.quality - x.q2)});
            next.b = std::clamp(x.b + w * (m2.offset - x.b), 0.0, 1.0 - params.Z_A);
            next.q2 = std::clamp(x.q2 + w * (m2.quality - x.q2), 0.0, params.Q);

            if (next.gap() < kLocationEpsilon) {
                run.rejected = true;
                return run;
            }
            x = next;
            run.iterations = it;
            run.residual = residual;
            if (residual < config.tolerance) {
                // The responses themselves sit within tolerance of x and land
                // exactly on boundaries the damped sequence only approaches.
                const StrategyProfile responses{m1.offset, m2.offset, m1.quality, m2.quality};
                if (responses.gap() >= kLocationEpsilon)
                    x = responses;
                run.converged = true;
                break;
            }
        }
    } catch (const DomainError&) {
        run.rejected = true;
    }
    run.profile = x;
    return run;
}

std::vector<Run> run_starts(const ModelParams& params, const Responder& respond,
                            const std::vector<StrategyProfile>& starts, const SolverConfig& config) {
    std::vector<Run> runs(starts.size());
    const std::size_t workers = std::clamp<std::size_t>(config.jobs, 1, std::max<std::size_t>(starts.size(), 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < starts.size(); ++i)
            runs[i] = iterate(params, respond, starts[i], config);
        return runs;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < starts.size(); i = next++)
                runs[i] = iterate(params, respond, starts[i], config);
        });
    for (auto& th : pool)
        th.join();
    return runs;
}

auto profile_key(const StrategyProfile& p) { return std::tie(p.a, p.b, p.q1, p.q2); }

double sup_distance(const StrategyProfile& x, const StrategyProfile& y) {
    return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.q1 - y.q1), std::abs(x.q2 - y.q2)});
}

EquilibriumPoint finish(const ModelParams& params, const Mode& mode, const Run& run,
                        const std::string& method, const SolverConfig& config) {
    EquilibriumPoint pt;
    pt.profile = run.profile;
    pt.prices = price_equilibrium(params, mode, run.profile).prices;
    pt.outcome = equilibrium_outcome(params, mode, run.profile);
    pt.iterations = run.iterations;
    pt.residual = run.residual;
    pt.converged = run.converged;
    pt.method = method;
    const MutualBestResponseReport report =
        is_mutual_best_response(params, mode, run.profile, config.certify_tolerance, config.certify_grid);
    pt.certified = report.certified;
    pt.improvement1 = report.improvement1;
    pt.improvement2 = report.improvement2;
    return pt;
}

EquilibriumResult collect(const ModelParams& params, const Mode& mode, std::vector<Run> runs,
                          const std::string& method, const SolverConfig& config) {
    EquilibriumResult result;
    result.mode = mode;
    result.starts_tried = runs.size();

    std::vector<Run> converged;
    const Run* closest = nullptr;
    for (const Run& r : runs) {
        if (r.rejected) {
            ++result.starts_rejected;
            continue;
        }
        if (r.converged)
            converged.push_back(r);
        else if (!closest || r.residual < closest->residual)
            closest = &r;
    }

    if (converged.empty()) {
        if (closest)
            result.equilibria.push_back(finish(params, mode, *closest, method, config));
        return result;
    }

    std::sort(converged.begin(), converged.end(),
              [](const Run& x, const Run& y) { return profile_key(x.profile) < profile_key(y.profile); });
    std::vector<Run> distinct;
    for (const Run& r : converged) {
        const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const Run& d) {
            return sup_distance(d.profile, r.profile) < 1e-6;
        });
        if (!seen)
            distinct.push_back(r);
    }
    for (const Run& r : distinct)
        result.equilibria.push_back(finish(params, mode, r, method, config));
    std::stable_sort(result.equilibria.begin(), result.equilibria.end(),
                     [](const EquilibriumPoint& x, const EquilibriumPoint& y) {
                         const double ux = x.outcome.pi1 + x.outcome.pi2;
                         const double uy = y.outcome.pi1 + y.outcome.pi2;
                         if (ux != uy)
                             return ux > uy;
                         return profile_key(x.profile) < profile_key(y.profile);
                     });
    return result;
}

// The compliant closed form is only valid where each vendor actually
// prefers q_min at the solved locations.
bool compliant_everywhere(const ModelParams& params, const FinePolicy& policy,
                          const EquilibriumResult& result) {
    // With q_min = 0 no quality is ever fined and the rule is exact.
    if (policy.q_min == 0.0)
        return true;
    for (const EquilibriumPoint& e : result.equilibria) {
        const double a = e.profile.a;
        const double b = e.profile.b;
        for (Vendor v : {Vendor::one, Vendor::two})
            if (!vendor_compliance_conditions(params, policy, v, a, b, 0.0).all())
                return false;
    }
    return true;
}

} // namespace

EquilibriumResult solve_equilibrium(const ModelParams& params, const Mode& mode,
                                    const SolverConfig& config) {
    params.validate();
    config.validate();
    if (mode.has_fine())
        mode.fine->validate(params);
    const std::vector<StrategyProfile> starts =
        config.starts.empty() ? lattice_starts(params, config.lattice) : config.starts;
    for (const StrategyProfile& s : starts)
        if (s.a < 0.0 || s.a > params.Z_A || s.b < 0.0 || s.b > 1.0 - params.Z_A || s.q1 < 0.0 ||
            s.q1 > params.Q || s.q2 < 0.0 || s.q2 > params.Q)
            throw DomainError("start profile out of range");

    const bool naive = params.beta == 0.0;

    if (!mode.has_fine()) {
        if (naive) {
            Responder closed = [&](Vendor v, double opp, double) {
                return Move{naive_location_best_response(params, v, opp).offset, 0.0};
            };
            return collect(params, mode, run_starts(params, closed, starts, config), "closed_form", config);
        }
        Responder numeric = [&](Vendor v, double opp, double opp_q) {
            const JointBestResponse br = joint_best_response(params, v, opp, opp_q, config.scan);
            return Move{br.offset, br.quality};
        };
        return collect(params, mode, run_starts(params, numeric, starts, config), "numeric", config);
    }

    const FinePolicy policy = *mode.fine;
    Responder numeric_fine = [&](Vendor v, double opp, double opp_q) {
        const JointBestResponse br = joint_best_response_with_fine(params, policy, v, opp, opp_q, config.scan);
        return Move{br.offset, br.quality};
    };
    if (naive) {
        Responder closed = [&](Vendor v, double opp, double) {
            return Move{naive_location_best_response_with_fine(params, policy, v, opp).offset, policy.q_min};
        };
        EquilibriumResult analytic =
            collect(params, mode, run_starts(params, closed, starts, config), "closed_form", config);
        if (analytic.converged() && compliant_everywhere(params, policy, analytic))
            return analytic;
        return collect(params, mode, run_starts(params, numeric_fine, starts, config),
                       "numeric, outside analytic regime", config);
    }
    return collect(params, mode, run_starts(params, numeric_fine, starts, config), "numeric", config);
}

MutualBestResponseReport is_mutual_best_response(const ModelParams& params, const Mode& mode,
                                                 const StrategyProfile& profile, double tolerance,
                                                 const oracle::GridSpec& grid) {
    validate_profile(params, profile);
    MutualBestResponseReport report;
    for (Vendor v : {Vendor::one, Vendor::two}) {
        const double current = oracle::stage1_payoff(params, mode, profile, v);
        const oracle::GridBestResponse dev = oracle::grid_best_response(
            params, mode, v, profile.offset(rival(v)), profile.quality(rival(v)), grid);
        const double gain = std::max(0.0, dev.utility - current);
        (v == Vendor::one ? report.improvement1 : report.improvement2) = gain;
    }
    report.certified = report.improvement1 < tolerance && report.improvement2 < tolerance;
    return report;
}

bool maximal_differentiation_check(const ModelParams& params) {
    params.validate();
    if (params.beta != 0.0)
        throw DomainError("maximal differentiation thresholds apply to naive consumers only");
    const bool first = params.Z_A == 0.0 || params.C1 <= params.T / (12.0 * params.Z_A);
    const bool second = params.Z_A == 1.0 || params.C2 <= params.T / (12.0 * (1.0 - params.Z_A));
    return first && second;
}

} // namespace fragsec
