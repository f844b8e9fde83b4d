#include "fragsec/report.hpp"

#include <cmath>
#include <cstdio>

namespace fragsec {

const char* const kSweepCsvHeader =
    "mode,C1,C2,T,beta,S1,S2,Q,F,q_min,a,b,q1,q2,p1,p2,D1,D2,f1,f2,pi1,pi2,converged,iterations,n_equilibria";

const char* const kComparisonCsvHeader =
    "C1,C2,a_nofine,b_nofine,p1_nofine,p2_nofine,a_fine,b_fine,q1_fine,q2_fine,p1_fine,p2_fine,"
    "dp1,dp2,da,db,cond1,cond2,cond3,converged";

std::string format_number(double v) {
    if (std::isnan(v))
        return "nan";
    if (v == 0.0)
        return "0"; // also folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

namespace {

const char* flag(bool b) { return b ? "true" : "false"; }

double nan() { return std::nan(""); }

} // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& row : rows) {
        const ModelParams& p = row.params;
        const double F = row.mode.has_fine() ? row.mode.fine->F : 0.0;
        const double q_min = row.mode.has_fine() ? row.mode.fine->q_min : 0.0;
        out << row.mode.label();
        for (double v : {p.C1, p.C2, p.T, p.beta, p.S1, p.S2, p.Q, F, q_min})
            out << ',' << format_number(v);
        if (row.result.equilibria.empty()) {
            for (int i = 0; i < 12; ++i)
                out << ",nan";
            out << ",false,0,0\n";
            continue;
        }
        const EquilibriumPoint& e = row.result.primary();
        const MarketOutcome& o = e.outcome;
        for (double v : {e.profile.a, e.profile.b, e.profile.q1, e.profile.q2, e.prices.p1, e.prices.p2,
                         o.D1, o.D2, o.f1, o.f2, o.pi1, o.pi2})
            out << ',' << format_number(v);
        out << ',' << flag(row.ok()) << ',' << e.iterations << ',' << row.n_equilibria() << '\n';
    }
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << kComparisonCsvHeader << '\n';
    for (const ComparisonRow& row : rows) {
        const bool have = !row.no_fine.equilibria.empty() && !row.with_fine.equilibria.empty();
        const EquilibriumPoint* n = have ? &row.no_fine.primary() : nullptr;
        const EquilibriumPoint* f = have ? &row.with_fine.primary() : nullptr;
        auto val = [&](auto get) { return have ? get() : nan(); };
        out << format_number(row.params.C1) << ',' << format_number(row.params.C2);
        for (double v : {val([&] { return n->profile.a; }), val([&] { return n->profile.b; }),
                         val([&] { return n->prices.p1; }), val([&] { return n->prices.p2; }),
                         val([&] { return f->profile.a; }), val([&] { return f->profile.b; }),
                         val([&] { return f->profile.q1; }), val([&] { return f->profile.q2; }),
                         val([&] { return f->prices.p1; }), val([&] { return f->prices.p2; }),
                         val([&] { return f->prices.p1 - n->prices.p1; }),
                         val([&] { return f->prices.p2 - n->prices.p2; }),
                         val([&] { return f->profile.a - n->profile.a; }),
                         val([&] { return f->profile.b - n->profile.b; })})
            out << ',' << format_number(v);
        out << ',' << flag(row.conditions.vendor1_cost.holds) << ',' << flag(row.conditions.vendor2_cost.holds)
            << ',' << flag(row.conditions.price_margin.holds) << ',' << flag(row.ok()) << '\n';
    }
}

nlohmann::json to_json(const ModelParams& p) {
    return {{"Z_A", p.Z_A}, {"T", p.T}, {"beta", p.beta}, {"C1", p.C1}, {"C2", p.C2},
            {"S1", p.S1},   {"S2", p.S2}, {"Q", p.Q}};
}

nlohmann::json to_json(const StrategyProfile& s) {
    return {{"a", s.a}, {"b", s.b}, {"q1", s.q1}, {"q2", s.q2}};
}

nlohmann::json to_json(const EquilibriumPoint& e) {
    const MarketOutcome& o = e.outcome;
    return {{"profile", to_json(e.profile)},
            {"prices", {{"p1", e.prices.p1}, {"p2", e.prices.p2}}},
            {"outcome",
             {{"D1", o.D1}, {"D2", o.D2}, {"f1", o.f1}, {"f2", o.f2}, {"pi1", o.pi1}, {"pi2", o.pi2},
              {"clamped", o.clamped}}},
            {"iterations", e.iterations},
            {"residual", e.residual},
            {"converged", e.converged},
            {"certified", e.certified},
            {"improvement1", e.improvement1},
            {"improvement2", e.improvement2},
            {"method", e.method}};
}

nlohmann::json to_json(const EquilibriumResult& r) {
    nlohmann::json j;
    j["mode"] = r.mode.label();
    if (r.mode.has_fine())
        j["policy"] = {{"F", r.mode.fine->F}, {"q_min", r.mode.fine->q_min}};
    j["converged"] = r.converged();
    j["starts_tried"] = r.starts_tried;
    j["starts_rejected"] = r.starts_rejected;
    j["equilibria"] = nlohmann::json::array();
    for (const EquilibriumPoint& e : r.equilibria)
        j["equilibria"].push_back(to_json(e));
    return j;
}

nlohmann::json to_json(const SweepRow& row) {
    return {{"params", to_json(row.params)}, {"result", to_json(row.result)}, {"ok", row.ok()},
            {"n_equilibria", row.n_equilibria()}};
}

nlohmann::json to_json(const ComparisonRow& row) {
    auto cond = [](const ConditionCheck& c) { return nlohmann::json{{"holds", c.holds}, {"slack", c.slack}}; };
    return {{"params", to_json(row.params)},
            {"policy", {{"F", row.policy.F}, {"q_min", row.policy.q_min}}},
            {"no_fine", to_json(row.no_fine)},
            {"with_fine", to_json(row.with_fine)},
            {"conditions",
             {{"cond1", cond(row.conditions.vendor1_cost)},
              {"cond2", cond(row.conditions.vendor2_cost)},
              {"cond3", cond(row.conditions.price_margin)}}},
            {"ok", row.ok()}};
}

nlohmann::json to_json(const CalibratedConstants& c) {
    return {{"T", c.T}, {"beta", c.beta}, {"S1", c.S1}, {"C1", c.C1}, {"S2", c.S2}, {"C2", c.C2}};
}

nlohmann::json to_json(const StationarityResiduals& r) {
    return {{"dpi1_dq1", r.quality1}, {"dpi1_da", r.location1}, {"dpi2_dq2", r.quality2}, {"dpi2_db", r.location2}};
}

} // namespace fragsec
