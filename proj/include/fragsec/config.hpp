#pragma once

// Scenario files: a flat YAML mapping of parameter names to values.
// Unknown keys are rejected so typos fail loudly.

#include "fragsec/calibration.hpp"
#include "fragsec/equilibrium.hpp"
#include "fragsec/model.hpp"
#include "fragsec/regulation.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fragsec {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A swept parameter: either min/max/steps or an explicit value list.
struct AxisSetting {
    std::string name;
    std::optional<double> min;
    std::optional<double> max;
    std::optional<double> steps;
    std::vector<double> values;

    bool present() const { return !name.empty() || min || max || steps || !values.empty(); }
};

struct Scenario {
    std::optional<std::string> mode; ///< "no_fine" or "with_fine"
    ModelParams params;
    std::optional<double> F;
    std::optional<double> q_min;
    std::optional<double> a, b, q1, q2;
    std::optional<double> p1, p2;
    std::optional<DeviceObservation> device1;
    std::optional<DeviceObservation> device2;
    AxisSetting axis1;
    AxisSetting axis2;
    SolverConfig solver;
    std::uint64_t seed = 20120101;
    std::size_t samples = 1000000; ///< Monte-Carlo consumers for `verify`

    /// Sets a numeric key; throws ConfigError for unknown keys or bad values.
    void set(const std::string& key, double value);
    void set(const std::string& key, const std::string& value);

    /// The policy given by F and q_min (missing ones default to 0), if any was set.
    std::optional<FinePolicy> policy() const;

    /// Explicit mode, else with_fine when F or q_min is set.
    Mode resolved_mode() const;

    /// All four of a, b, q1, q2, or nothing.
    std::optional<StrategyProfile> profile() const;
    std::optional<PriceVector> prices() const;

    /// Parameter, policy and profile validation, reported as ConfigError.
    void validate() const;
};

/// Every key accepted by Scenario::set, in documentation order.
const std::vector<std::string>& scenario_keys();

Scenario parse_scenario(const std::string& yaml_text);
Scenario load_scenario(const std::string& path);

} // namespace fragsec
