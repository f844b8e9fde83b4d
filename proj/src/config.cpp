#include "fragsec/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace fragsec {

namespace {

using Setter = std::function<void(Scenario&, double)>;

std::size_t count_value(const std::string& key, double v) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15)
        throw ConfigError(key + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

DeviceObservation& device(Scenario& s, int which) {
    std::optional<DeviceObservation>& d = which == 1 ? s.device1 : s.device2;
    if (!d)
        d.emplace();
    return *d;
}

AxisSetting& axis(Scenario& s, int which) { return which == 1 ? s.axis1 : s.axis2; }

const std::vector<std::pair<std::string, Setter>>& setters() {
    static const std::vector<std::pair<std::string, Setter>> table = [] {
        std::vector<std::pair<std::string, Setter>> t = {
            {"Z_A", [](Scenario& s, double v) { s.params.Z_A = v; }},
            {"T", [](Scenario& s, double v) { s.params.T = v; }},
            {"beta", [](Scenario& s, double v) { s.params.beta = v; }},
            {"C1", [](Scenario& s, double v) { s.params.C1 = v; }},
            {"C2", [](Scenario& s, double v) { s.params.C2 = v; }},
            {"S1", [](Scenario& s, double v) { s.params.S1 = v; }},
            {"S2", [](Scenario& s, double v) { s.params.S2 = v; }},
            {"Q", [](Scenario& s, double v) { s.params.Q = v; }},
            {"F", [](Scenario& s, double v) { s.F = v; }},
            {"q_min", [](Scenario& s, double v) { s.q_min = v; }},
            {"a", [](Scenario& s, double v) { s.a = v; }},
            {"b", [](Scenario& s, double v) { s.b = v; }},
            {"q1", [](Scenario& s, double v) { s.q1 = v; }},
            {"q2", [](Scenario& s, double v) { s.q2 = v; }},
            {"p1", [](Scenario& s, double v) { s.p1 = v; }},
            {"p2", [](Scenario& s, double v) { s.p2 = v; }},
            {"damping", [](Scenario& s, double v) { s.solver.damping = v; }},
            {"tolerance", [](Scenario& s, double v) { s.solver.tolerance = v; }},
            {"max_iterations", [](Scenario& s, double v) { s.solver.max_iterations = count_value("max_iterations", v); }},
            {"lattice", [](Scenario& s, double v) { s.solver.lattice = count_value("lattice", v); }},
            {"grid_points", [](Scenario& s, double v) { s.solver.scan.grid_points = count_value("grid_points", v); }},
            {"seed", [](Scenario& s, double v) { s.seed = count_value("seed", v); }},
            {"samples", [](Scenario& s, double v) { s.samples = count_value("samples", v); }},
        };
        for (int which : {1, 2}) {
            const std::string p = "v" + std::to_string(which) + "_";
            t.push_back({p + "vendor_loc", [which](Scenario& s, double v) { device(s, which).vendor_loc_added = v; }});
            t.push_back({p + "thirdparty_loc", [which](Scenario& s, double v) { device(s, which).thirdparty_loc = v; }});
            t.push_back({p + "total_loc", [which](Scenario& s, double v) { device(s, which).total_loc = v; }});
            t.push_back({p + "vulns", [which](Scenario& s, double v) { device(s, which).customization_vulns = v; }});
            t.push_back({p + "max_vulns", [which](Scenario& s, double v) { device(s, which).max_vulns_in_cohort = v; }});
            t.push_back({p + "price_group", [which](Scenario& s, double v) { device(s, which).price_group = v; }});
        }
        for (int which : {1, 2}) {
            const std::string p = "axis" + std::to_string(which) + "_";
            t.push_back({p + "min", [which](Scenario& s, double v) { axis(s, which).min = v; }});
            t.push_back({p + "max", [which](Scenario& s, double v) { axis(s, which).max = v; }});
            t.push_back({p + "steps", [which](Scenario& s, double v) { axis(s, which).steps = v; }});
        }
        return t;
    }();
    return table;
}

const std::vector<std::string> string_keys = {"mode", "axis1_name", "axis2_name"};
const std::vector<std::string> list_keys = {"axis1_values", "axis2_values"};

} // namespace

const std::vector<std::string>& scenario_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k = {"mode"};
        for (const auto& [name, _] : setters())
            k.push_back(name);
        k.insert(k.end(), {"axis1_name", "axis1_values", "axis2_name", "axis2_values"});
        return k;
    }();
    return keys;
}

void Scenario::set(const std::string& key, double value) {
    if (!std::isfinite(value))
        throw ConfigError("value of " + key + " must be finite");
    for (const auto& [name, setter] : setters())
        if (name == key) {
            setter(*this, value);
            return;
        }
    throw ConfigError("unknown or non-numeric key: " + key);
}

void Scenario::set(const std::string& key, const std::string& value) {
    if (key == "mode") {
        if (value != "no_fine" && value != "with_fine")
            throw ConfigError("mode must be no_fine or with_fine, got " + value);
        mode = value;
    } else if (key == "axis1_name") {
        axis1.name = value;
    } else if (key == "axis2_name") {
        axis2.name = value;
    } else {
        throw ConfigError("unknown or non-text key: " + key);
    }
}

std::optional<FinePolicy> Scenario::policy() const {
    if (!F && !q_min)
        return std::nullopt;
    return FinePolicy{F.value_or(0.0), q_min.value_or(0.0)};
}

Mode Scenario::resolved_mode() const {
    const std::string m = mode.value_or(policy() ? "with_fine" : "no_fine");
    if (m == "no_fine")
        return Mode::no_fine();
    const std::optional<FinePolicy> p = policy();
    if (!p)
        throw ConfigError("mode with_fine needs F and q_min");
    return Mode::with_fine(*p);
}

std::optional<StrategyProfile> Scenario::profile() const {
    const int given = (a ? 1 : 0) + (b ? 1 : 0) + (q1 ? 1 : 0) + (q2 ? 1 : 0);
    if (given == 0)
        return std::nullopt;
    if (given != 4)
        throw ConfigError("a profile needs all of a, b, q1, q2");
    return StrategyProfile{*a, *b, *q1, *q2};
}

std::optional<PriceVector> Scenario::prices() const {
    if (!p1 && !p2)
        return std::nullopt;
    if (!p1 || !p2)
        throw ConfigError("prices need both p1 and p2");
    return PriceVector{*p1, *p2};
}

void Scenario::validate() const {
    try {
        params.validate();
        if (const auto p = policy())
            p->validate(params);
        solver.validate();
        if (const auto prof = profile())
            validate_profile(params, *prof);
        for (const auto* d : {&device1, &device2})
            if (*d)
                (*d)->validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    resolved_mode();
    prices();
}

Scenario parse_scenario(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed scenario: ") + e.what());
    }
    Scenario s;
    if (root.IsNull())
        return s;
    if (!root.IsMap())
        throw ConfigError("scenario must be a flat key/value mapping");

    for (const auto& entry : root) {
        const std::string key = entry.first.as<std::string>();
        const YAML::Node& value = entry.second;
        const bool is_list = std::find(list_keys.begin(), list_keys.end(), key) != list_keys.end();
        const bool is_text = std::find(string_keys.begin(), string_keys.end(), key) != string_keys.end();
        if (is_list) {
            if (!value.IsSequence())
                throw ConfigError(key + " must be a list of numbers");
            std::vector<double>& dst = key == "axis1_values" ? s.axis1.values : s.axis2.values;
            for (const auto& item : value) {
                try {
                    dst.push_back(item.as<double>());
                } catch (const YAML::Exception&) {
                    throw ConfigError(key + " must contain only numbers");
                }
            }
            continue;
        }
        if (!value.IsScalar())
            throw ConfigError("value of " + key + " must be a scalar");
        if (is_text) {
            s.set(key, value.as<std::string>());
            continue;
        }
        double v = 0.0;
        try {
            v = value.as<double>();
        } catch (const YAML::Exception&) {
            if (std::find(scenario_keys().begin(), scenario_keys().end(), key) == scenario_keys().end())
                throw ConfigError("unknown key: " + key);
            throw ConfigError("value of " + key + " is not a number: " + value.as<std::string>());
        }
        s.set(key, v);
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

} // namespace fragsec
