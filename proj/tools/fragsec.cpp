// fragsec: command-line front end for the customization/security game.
//
// Exit codes: 0 success, 1 failure (including a failed `verify`),
// 2 configuration error, 3 non-convergence (unless --allow-nonconverged).

#include "fragsec/best_response.hpp"
#include "fragsec/calibration.hpp"
#include "fragsec/config.hpp"
#include "fragsec/demand.hpp"
#include "fragsec/equilibrium.hpp"
#include "fragsec/experiments.hpp"
#include "fragsec/oracle.hpp"
#include "fragsec/pricing.hpp"
#include "fragsec/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>

using namespace fragsec;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConverged = 3;

struct GlobalOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
    std::size_t jobs = 1;
    bool allow_nonconverged = false;
    std::string mode;
    std::vector<std::pair<std::string, double>> overrides;
    std::vector<std::pair<std::string, std::string>> text_overrides;
};

Scenario build_scenario(const GlobalOptions& g) {
    Scenario s = g.config.empty() ? Scenario{} : load_scenario(g.config);
    if (!g.mode.empty())
        s.set("mode", g.mode);
    for (const auto& [key, value] : g.overrides)
        s.set(key, value);
    for (const auto& [key, value] : g.text_overrides)
        s.set(key, value);
    if (g.seed)
        s.seed = *g.seed;
    s.solver.jobs = g.jobs;
    s.validate();
    return s;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw ConfigError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

StrategyProfile require_profile(const Scenario& s, const char* command) {
    const auto p = s.profile();
    if (!p)
        throw ConfigError(std::string(command) + " needs a profile (a, b, q1, q2)");
    return *p;
}

int nonconverged_exit(bool all_ok, const GlobalOptions& g) {
    if (all_ok || g.allow_nonconverged)
        return 0;
    std::cerr << "fragsec: at least one solve did not converge to a certified equilibrium\n";
    return kExitNonConverged;
}

int cmd_solve(const GlobalOptions& g, const std::string& stage) {
    const Scenario s = build_scenario(g);
    const Mode mode = s.resolved_mode();
    Output out(g.out);
    if (stage == "prices") {
        const StrategyProfile profile = require_profile(s, "solve --stage prices");
        const PriceEquilibrium eq = price_equilibrium(s.params, mode, profile);
        const MarketOutcome o = equilibrium_outcome(s.params, mode, profile);
        if (g.format == "json") {
            out.stream() << json{{"mode", mode.label()},
                                 {"profile", to_json(profile)},
                                 {"prices", {{"p1", eq.prices.p1}, {"p2", eq.prices.p2}}},
                                 {"negative_price", eq.negative_price},
                                 {"outcome",
                                  {{"D1", o.D1}, {"D2", o.D2}, {"f1", o.f1}, {"f2", o.f2},
                                   {"pi1", o.pi1}, {"pi2", o.pi2}, {"clamped", o.clamped}}}}
                                .dump(2)
                         << '\n';
        } else {
            out.stream() << "a,b,q1,q2,p1,p2,D1,D2,f1,f2,pi1,pi2,negative_price,clamped\n";
            for (double v : {profile.a, profile.b, profile.q1, profile.q2, eq.prices.p1, eq.prices.p2, o.D1,
                             o.D2, o.f1, o.f2, o.pi1, o.pi2})
                out.stream() << format_number(v) << ',';
            out.stream() << (eq.negative_price ? "true" : "false") << ',' << (o.clamped ? "true" : "false")
                         << '\n';
        }
        return 0;
    }

    SweepRow row{s.params, mode, solve_equilibrium(s.params, mode, s.solver)};
    if (g.format == "json")
        out.stream() << to_json(row.result).dump(2) << '\n';
    else
        write_sweep_csv(out.stream(), {row});
    return nonconverged_exit(row.ok(), g);
}

int cmd_calibrate(const GlobalOptions& g) {
    const Scenario s = build_scenario(g);
    MarketObservation obs;
    if (s.device1 || s.device2) {
        if (!s.device1 || !s.device2)
            throw ConfigError("calibrate needs device data for both vendors (v1_*, v2_*)");
        obs = quantify_market(*s.device1, *s.device2, s.params.Z_A);
    } else {
        if (!s.a || !s.b || !s.q1 || !s.q2 || !s.p1 || !s.p2)
            throw ConfigError("calibrate needs a, b, q1, q2, p1, p2 or raw device data");
        obs = {*s.a, *s.b, *s.q1, *s.q2, *s.p1, *s.p2};
    }
    const CalibratedConstants c = calibrate(obs, s.params.Z_A);
    const StationarityResiduals r = stationarity_residuals(c.params(s.params.Z_A), obs.profile());
    Output out(g.out);
    if (g.format == "json") {
        out.stream() << json{{"observation",
                              {{"a", obs.a}, {"b", obs.b}, {"q1", obs.q1}, {"q2", obs.q2}, {"p1", obs.p1},
                               {"p2", obs.p2}}},
                             {"constants", to_json(c)},
                             {"stationarity_residuals", to_json(r)}}
                            .dump(2)
                     << '\n';
    } else {
        out.stream() << "a,b,q1,q2,p1,p2,T,beta,S1,C1,S2,C2,max_residual\n";
        bool first = true;
        for (double v : {obs.a, obs.b, obs.q1, obs.q2, obs.p1, obs.p2, c.T, c.beta, c.S1, c.C1, c.S2, c.C2,
                         r.max_abs()}) {
            out.stream() << (first ? "" : ",") << format_number(v);
            first = false;
        }
        out.stream() << '\n';
    }
    return 0;
}

int cmd_sweep(const GlobalOptions& g) {
    const Scenario s = build_scenario(g);
    SweepSpec spec = sweep_spec_from(s);
    spec.jobs = g.jobs;
    const std::vector<SweepRow> rows = run_sweep(spec);
    Output out(g.out);
    bool all_ok = true;
    json arr = json::array();
    for (const SweepRow& row : rows) {
        all_ok = all_ok && row.ok();
        arr.push_back(to_json(row));
    }
    if (g.format == "json")
        out.stream() << arr.dump(2) << '\n';
    else
        write_sweep_csv(out.stream(), rows);
    return nonconverged_exit(all_ok, g);
}

int cmd_compare(const GlobalOptions& g) {
    const Scenario s = build_scenario(g);
    SweepSpec spec = sweep_spec_from(s);
    spec.jobs = g.jobs;
    const std::vector<ComparisonRow> rows = compare_fine_no_fine(spec);
    Output out(g.out);
    bool all_ok = true;
    json arr = json::array();
    for (const ComparisonRow& row : rows) {
        all_ok = all_ok && row.ok();
        arr.push_back(to_json(row));
    }
    if (g.format == "json")
        out.stream() << arr.dump(2) << '\n';
    else
        write_comparison_csv(out.stream(), rows);
    return nonconverged_exit(all_ok, g);
}

struct CheckLine {
    std::string name;
    double value;
    double threshold;
    bool pass;
};

void best_response_checks(const Scenario& s, const Mode& mode, const StrategyProfile& profile,
                          std::vector<CheckLine>& lines, std::vector<std::string>& info) {
    const oracle::GridSpec grid;
    for (Vendor v : {Vendor::one, Vendor::two}) {
        const double opp = profile.offset(rival(v));
        const double opp_q = profile.quality(rival(v));
        const JointBestResponse br = mode.has_fine()
                                         ? joint_best_response_with_fine(s.params, *mode.fine, v, opp, opp_q)
                                         : joint_best_response(s.params, v, opp, opp_q);
        const oracle::GridBestResponse gb = oracle::grid_best_response(s.params, mode, v, opp, opp_q, grid);
        const double cells = std::max(
            gb.location_step > 0.0 ? std::abs(br.offset - gb.offset) / gb.location_step : 0.0,
            std::abs(br.quality - gb.quality) / gb.quality_step);
        lines.push_back({"best_response_vs_grid_" + to_string(v) + " (cells)", cells, 1.0, cells <= 1.0 + 1e-9});

        const std::string who = to_string(v) + ": ";
        for (const Candidate& c : br.candidates)
            info.push_back(who + "candidate " + c.label + " offset=" + format_number(c.offset) +
                           " quality=" + format_number(c.quality) + " utility=" + format_number(c.utility));
        info.push_back(who + "grid argmax offset=" + format_number(gb.offset) + " quality=" +
                       format_number(gb.quality) + " utility=" + format_number(gb.utility));
        if (1.0 - br.offset - opp >= kLocationEpsilon && s.params.beta > 0.0) {
            const QualityBRDiagnostics d = quality_best_response(s.params, v, br.offset, opp, opp_q).diagnostics;
            info.push_back(who + "quality case " + to_string(d.case_tag) + " A=" + format_number(d.A) +
                           " B=" + format_number(d.B) + " q_bar=" + format_number(d.q_bar.value_or(std::nan(""))));
        }
        if (s.params.beta == 0.0) {
            const LocationBRDiagnostics d =
                mode.has_fine() ? naive_location_best_response_with_fine(s.params, *mode.fine, v, opp).diagnostics
                                : naive_location_best_response(s.params, v, opp).diagnostics;
            info.push_back(who + "location rule " + d.rule + " effective_cost=" + format_number(d.effective_cost) +
                           " root=" + format_number(d.root_high.value_or(std::nan(""))) +
                           " chosen=" + format_number(d.chosen));
        }
    }
}

int cmd_verify(const GlobalOptions& g, bool best_response_only, bool fine_conditions_only) {
    const Scenario s = build_scenario(g);
    const Mode mode = s.resolved_mode();
    std::vector<CheckLine> lines;
    std::vector<std::string> info;

    StrategyProfile profile;
    if (const auto p = s.profile()) {
        profile = *p;
    } else {
        const EquilibriumResult r = solve_equilibrium(s.params, mode, s.solver);
        if (r.equilibria.empty())
            throw std::runtime_error("no equilibrium to verify");
        profile = r.primary().profile;
        lines.push_back({"equilibrium_converged", r.primary().residual, s.solver.tolerance, r.converged()});
    }

    if (fine_conditions_only) {
        const auto policy = s.policy();
        if (!policy)
            throw ConfigError("verify --fine-conditions needs F and q_min");
        const ComplianceConditions c = min_quality_conditions(s.params, *policy, profile.a, profile.b);
        lines.push_back({"cond1_vendor1_cost (slack)", c.vendor1_cost.slack, 0.0, c.vendor1_cost.holds});
        lines.push_back({"cond2_vendor2_cost (slack)", c.vendor2_cost.slack, 0.0, c.vendor2_cost.holds});
        lines.push_back({"cond3_price_margin (slack)", c.price_margin.slack, 0.0, c.price_margin.holds});
        const VendorComplianceConditions v2 =
            vendor_compliance_conditions(s.params, *policy, Vendor::two, profile.a, profile.b, 0.0);
        lines.push_back({"vendor2_margin (slack)", v2.margin.slack, 0.0, v2.margin.holds});
    } else if (best_response_only) {
        best_response_checks(s, mode, profile, lines, info);
    } else {
        const FineAmounts fines = fine_amounts(mode, profile);
        const PriceVector prices = price_equilibrium(s.params, profile, fines).prices;
        const PriceVector direct = oracle::solve_price_system(s.params, profile, fines);
        const double price_gap = std::max(std::abs(prices.p1 - direct.p1), std::abs(prices.p2 - direct.p2));
        const double price_tol = 1e-12 * std::max({1.0, std::abs(prices.p1), std::abs(prices.p2)});
        lines.push_back({"prices_vs_direct_solve", price_gap, price_tol, price_gap <= price_tol});

        for (Vendor v : {Vendor::one, Vendor::two}) {
            oracle::DerivativePoint pt{s.params, mode, profile, v, prices};
            const auto foc = oracle::numeric_derivative_check(
                oracle::DerivativeTarget::price_foc, pt,
                price_first_order_condition(s.params, profile, prices, v, fines));
            lines.push_back({"price_foc_" + to_string(v), foc.relative_error, 1e-7, foc.relative_error < 1e-7});
            pt.prices.reset();
            const auto loc = oracle::numeric_derivative_check(
                oracle::DerivativeTarget::location_derivative, pt,
                location_utility_derivative(s.params, v, profile, mode));
            lines.push_back({"location_derivative_" + to_string(v), loc.relative_error, 1e-5,
                             loc.relative_error < 1e-5});
            const bool at_kink = mode.has_fine() && profile.quality(v) == mode.fine->q_min;
            if (!at_kink) {
                const auto qd = oracle::numeric_derivative_check(
                    oracle::DerivativeTarget::quality_derivative, pt,
                    quality_utility_derivative(s.params, v, profile, mode));
                lines.push_back({"quality_derivative_" + to_string(v), qd.relative_error, 1e-5,
                                 qd.relative_error < 1e-5});
            }
        }

        const Shares shares = market_shares(s.params, profile, prices);
        const oracle::MonteCarloShare mc = oracle::monte_carlo_share(s.params, profile, prices, s.samples, s.seed);
        const double n = static_cast<double>(s.samples);
        const double bound = 3.0 * std::sqrt(shares.D1 * (1.0 - shares.D1) / n);
        const double miss = std::abs(mc.share - shares.D1);
        lines.push_back({"monte_carlo_share", miss, bound, miss <= bound});

        best_response_checks(s, mode, profile, lines, info);
        const MutualBestResponseReport mbr = is_mutual_best_response(s.params, mode, profile);
        lines.push_back({"mutual_best_response (max gain)", std::max(mbr.improvement1, mbr.improvement2), 1e-6,
                         mbr.certified});
    }

    Output out(g.out);
    bool all = true;
    if (g.format == "json") {
        json arr = json::array();
        for (const CheckLine& l : lines) {
            arr.push_back({{"check", l.name}, {"value", l.value}, {"threshold", l.threshold}, {"pass", l.pass}});
            all = all && l.pass;
        }
        out.stream() << json{{"checks", arr}, {"diagnostics", info}}.dump(2) << '\n';
    } else {
        for (const std::string& line : info)
            out.stream() << "INFO " << line << '\n';
        for (const CheckLine& l : lines) {
            out.stream() << (l.pass ? "PASS " : "FAIL ") << l.name << "  value=" << format_number(l.value)
                         << "  threshold=" << format_number(l.threshold) << '\n';
            all = all && l.pass;
        }
    }
    return all ? 0 : kExitFailure;
}

int cmd_demand(const GlobalOptions& g) {
    const Scenario s = build_scenario(g);
    const Mode mode = s.resolved_mode();
    const StrategyProfile profile = require_profile(s, "demand");
    const PriceVector prices = s.prices().value_or(price_equilibrium(s.params, mode, profile).prices);
    const double x = indifference_point(s.params, profile, prices);
    const Shares shares = market_shares(s.params, profile, prices);
    Output out(g.out);
    if (g.format == "json") {
        out.stream() << json{{"p1", prices.p1}, {"p2", prices.p2}, {"indifference_point", x},
                             {"D1", shares.D1}, {"D2", shares.D2}, {"clamped", shares.clamped}}
                            .dump(2)
                     << '\n';
    } else {
        out.stream() << "p1,p2,indifference_point,D1,D2,clamped\n"
                     << format_number(prices.p1) << ',' << format_number(prices.p2) << ',' << format_number(x)
                     << ',' << format_number(shares.D1) << ',' << format_number(shares.D2) << ','
                     << (shares.clamped ? "true" : "false") << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibria of the two-vendor Android customization and security game"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config, "Scenario file (flat YAML mapping)");
    app.add_option("--out", g.out, "Write output here instead of stdout");
    app.add_option("--seed", g.seed, "Seed for Monte-Carlo checks");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs", g.jobs, "Parallel solves")->check(CLI::PositiveNumber);
    app.add_flag("--allow-nonconverged", g.allow_nonconverged, "Exit 0 even if a solve did not converge");
    app.add_option("--mode", g.mode, "no_fine or with_fine")->check(CLI::IsMember({"no_fine", "with_fine"}));
    for (const char* key : {"Z_A", "T", "beta", "C1", "C2", "S1", "S2", "Q", "F", "q_min", "a", "b", "q1", "q2",
                            "p1", "p2", "damping", "tolerance", "max_iterations", "lattice", "grid_points",
                            "samples", "axis1_min", "axis1_max", "axis1_steps", "axis2_min", "axis2_max",
                            "axis2_steps"}) {
        const std::string k = key;
        app.add_option_function<double>("--" + k, [&g, k](double v) { g.overrides.emplace_back(k, v); },
                                        "Override " + k);
    }

    for (const char* key : {"axis1_name", "axis2_name"}) {
        const std::string k = key;
        app.add_option_function<std::string>(
            "--" + k, [&g, k](const std::string& v) { g.text_overrides.emplace_back(k, v); }, "Swept parameter");
    }

    std::string stage = "equilibrium";
    bool best_response_only = false;
    bool fine_conditions_only = false;

    auto* solve = app.add_subcommand("solve", "Solve for stage-1 equilibria (or stage-2 prices)");
    solve->add_option("--stage", stage, "equilibrium or prices")->check(CLI::IsMember({"equilibrium", "prices"}));
    app.add_subcommand("calibrate", "Recover T, beta, S_i, C_i from one observed market");
    app.add_subcommand("sweep", "Solve over a grid of one or two parameters");
    app.add_subcommand("compare-fine", "Paired equilibria with and without the fine");
    auto* verify = app.add_subcommand("verify", "Check analytic results against the oracles");
    verify->add_flag("--best-response", best_response_only, "Only compare best responses with the grid");
    verify->add_flag("--fine-conditions", fine_conditions_only, "Only evaluate the compliance conditions");
    app.add_subcommand("demand", "Indifference point and market shares");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "solve")
            return cmd_solve(g, stage);
        if (cmd == "calibrate")
            return cmd_calibrate(g);
        if (cmd == "sweep")
            return cmd_sweep(g);
        if (cmd == "compare-fine")
            return cmd_compare(g);
        if (cmd == "verify")
            return cmd_verify(g, best_response_only, fine_conditions_only);
        if (cmd == "demand")
            return cmd_demand(g);
    } catch (const ConfigError& e) {
        std::cerr << "fragsec: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "fragsec: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
