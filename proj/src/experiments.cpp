#include "fragsec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace fragsec {

namespace {

const std::vector<std::string> kSweepable = {"Z_A", "T", "beta", "C1", "C2", "S1", "S2", "Q", "F", "q_min"};

void apply(SweepPoint& point, const std::string& name, double v) {
    ModelParams& p = point.params;
    if (name == "Z_A") p.Z_A = v;
    else if (name == "T") p.T = v;
    else if (name == "beta") p.beta = v;
    else if (name == "C1") p.C1 = v;
    else if (name == "C2") p.C2 = v;
    else if (name == "S1") p.S1 = v;
    else if (name == "S2") p.S2 = v;
    else if (name == "Q") p.Q = v;
    else if (name == "F") point.mode.fine->F = v;
    else if (name == "q_min") point.mode.fine->q_min = v;
}

template <class Fn>
void for_each_index(std::size_t n, std::size_t jobs, Fn fn) {
    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

} // namespace

SweepAxis linspace_axis(const std::string& name, double min, double max, std::size_t steps) {
    if (steps < 2)
        throw ConfigError("axis " + name + " needs at least 2 steps");
    SweepAxis axis{name, {}};
    for (std::size_t i = 0; i < steps; ++i)
        axis.values.push_back(i + 1 == steps ? max
                                             : min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1));
    return axis;
}

bool is_sweepable(const std::string& name) {
    return std::find(kSweepable.begin(), kSweepable.end(), name) != kSweepable.end();
}

void SweepSpec::validate() const {
    if (axes.size() > 2)
        throw ConfigError("at most two sweep axes are supported");
    for (const SweepAxis& axis : axes) {
        if (!is_sweepable(axis.name))
            throw ConfigError("cannot sweep over '" + axis.name + "'");
        if (axis.values.empty())
            throw ConfigError("axis " + axis.name + " has no values");
        if ((axis.name == "F" || axis.name == "q_min") && !mode.has_fine())
            throw ConfigError("sweeping " + axis.name + " needs a fine policy");
    }
    if (axes.size() == 2 && axes[0].name == axes[1].name)
        throw ConfigError("both axes sweep " + axes[0].name);
    try {
        solver.validate();
        for (const SweepPoint& p : sweep_points(*this)) {
            p.params.validate();
            if (p.mode.has_fine())
                p.mode.fine->validate(p.params);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid sweep point: ") + e.what());
    }
}

SweepSpec sweep_spec_from(const Scenario& scenario) {
    scenario.validate();
    SweepSpec spec;
    spec.params = scenario.params;
    spec.mode = scenario.resolved_mode();
    spec.solver = scenario.solver;
    for (const AxisSetting* setting : {&scenario.axis1, &scenario.axis2}) {
        if (!setting->present())
            continue;
        if (setting->name.empty())
            throw ConfigError("sweep axis without a name");
        if (!setting->values.empty()) {
            if (setting->min || setting->max || setting->steps)
                throw ConfigError("axis " + setting->name + " gives both values and a range");
            spec.axes.push_back({setting->name, setting->values});
            continue;
        }
        if (!setting->min || !setting->max || !setting->steps)
            throw ConfigError("axis " + setting->name + " needs min, max and steps");
        const double steps = *setting->steps;
        if (steps != std::floor(steps) || steps < 2.0)
            throw ConfigError("axis " + setting->name + " needs an integer number of steps >= 2");
        spec.axes.push_back(linspace_axis(setting->name, *setting->min, *setting->max,
                                          static_cast<std::size_t>(steps)));
    }
    if (!scenario.axis1.present() && scenario.axis2.present())
        throw ConfigError("axis2 given without axis1");
    return spec;
}

std::vector<SweepPoint> sweep_points(const SweepSpec& spec) {
    std::vector<SweepPoint> points = {{spec.params, spec.mode}};
    for (const SweepAxis& axis : spec.axes) {
        std::vector<SweepPoint> next;
        for (const SweepPoint& base : points)
            for (double v : axis.values) {
                SweepPoint p = base;
                apply(p, axis.name, v);
                next.push_back(p);
            }
        points = std::move(next);
    }
    return points;
}

bool SweepRow::ok() const {
    return result.converged() && result.primary().certified;
}

std::size_t SweepRow::n_equilibria() const {
    return result.converged() ? result.equilibria.size() : 0;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::vector<SweepPoint> points = sweep_points(spec);
    SolverConfig solver = spec.solver;
    solver.jobs = 1;
    std::vector<SweepRow> rows(points.size());
    for_each_index(points.size(), spec.jobs, [&](std::size_t i) {
        rows[i] = {points[i].params, points[i].mode, solve_equilibrium(points[i].params, points[i].mode, solver)};
    });
    return rows;
}

bool ComparisonRow::ok() const {
    return no_fine.converged() && no_fine.primary().certified && with_fine.converged() &&
           with_fine.primary().certified;
}

std::vector<ComparisonRow> compare_fine_no_fine(const SweepSpec& spec) {
    if (!spec.mode.has_fine())
        throw ConfigError("compare-fine needs a fine policy (F, q_min)");
    spec.validate();
    const std::vector<SweepPoint> points = sweep_points(spec);
    for (const SweepPoint& p : points)
        if (p.params.beta != 0.0)
            throw ConfigError("compare-fine is defined for naive consumers (beta = 0)");
    SolverConfig solver = spec.solver;
    solver.jobs = 1;
    std::vector<ComparisonRow> rows(points.size());
    for_each_index(points.size(), spec.jobs, [&](std::size_t i) {
        const SweepPoint& p = points[i];
        ComparisonRow row;
        row.params = p.params;
        row.policy = *p.mode.fine;
        row.no_fine = solve_equilibrium(p.params, Mode::no_fine(), solver);
        row.with_fine = solve_equilibrium(p.params, p.mode, solver);
        if (!row.with_fine.equilibria.empty()) {
            const StrategyProfile& fp = row.with_fine.primary().profile;
            row.conditions = min_quality_conditions(p.params, row.policy, fp.a, fp.b);
        }
        rows[i] = std::move(row);
    });
    return rows;
}

} // namespace fragsec
