#include "fragsec/calibration.hpp"

#include "fragsec/best_response.hpp"

#include <algorithm>
#include <cmath>

namespace fragsec {

void DeviceObservation::validate() const {
    for (double v : {vendor_loc_added, thirdparty_loc, total_loc, customization_vulns, max_vulns_in_cohort})
        if (!std::isfinite(v) || v < 0.0)
            throw DomainError("device counts must be finite and non-negative");
    if (vendor_loc_added + thirdparty_loc > total_loc)
        throw DomainError("customized lines of code exceed the total");
    if (customization_vulns > max_vulns_in_cohort)
        throw DomainError("vulnerability count exceeds the cohort maximum");
}

double quantify_location(const DeviceObservation& obs, double Z_A, Side side) {
    obs.validate();
    if (!(obs.total_loc > 0.0))
        throw DomainError("total lines of code must be positive");
    if (Z_A < 0.0 || Z_A > 1.0)
        throw DomainError("Z_A must lie in [0, 1]");
    const double pct = (obs.vendor_loc_added + obs.thirdparty_loc) / obs.total_loc;
    const double bound = side == Side::left ? Z_A : 1.0 - Z_A;
    if (pct / 2.0 > bound)
        throw DomainError("customization share exceeds the representable range");
    return bound - pct / 2.0;
}

double quantify_quality(const DeviceObservation& obs) {
    obs.validate();
    if (!(obs.max_vulns_in_cohort > 0.0))
        throw DomainError("cohort maximum of vulnerabilities must be positive");
    // One rounding instead of two, so 33 of 40 gives exactly 0.175.
    return (obs.max_vulns_in_cohort - obs.customization_vulns) / obs.max_vulns_in_cohort;
}

MarketObservation quantify_market(const DeviceObservation& vendor1, const DeviceObservation& vendor2,
                                  double Z_A) {
    MarketObservation m;
    m.a = quantify_location(vendor1, Z_A, Side::left);
    m.b = quantify_location(vendor2, Z_A, Side::right);
    m.q1 = quantify_quality(vendor1);
    m.q2 = quantify_quality(vendor2);
    m.p1 = vendor1.price_group;
    m.p2 = vendor2.price_group;
    return m;
}

Preferences calibrate_preferences(const MarketObservation& obs) {
    const double gap = 1.0 - obs.a - obs.b;
    if (gap < kLocationEpsilon)
        throw DomainError("observed products are co-located");
    if (obs.q1 == obs.q2)
        throw CalibrationError(CalibrationError::Reason::singular, "beta",
                               "equal qualities leave beta unidentifiable");
    Preferences out;
    out.T = (obs.p1 + obs.p2) / (2.0 * gap);
    if (!(out.T > 0.0))
        throw CalibrationError(CalibrationError::Reason::inconsistent, "T",
                               "observed prices imply a non-positive T");
    const double location_part = 2.0 * out.T / 3.0 * gap * (obs.a - obs.b);
    out.beta = (obs.p1 - obs.p2 - location_part) * 3.0 / (2.0 * (obs.q1 - obs.q2));
    return out;
}

Costs calibrate_costs(const MarketObservation& obs, const Preferences& prefs, double Z_A) {
    const double a = obs.a;
    const double b = obs.b;
    const double gap = 1.0 - a - b;
    if (gap < kLocationEpsilon)
        throw DomainError("observed products are co-located");
    if (!(prefs.T > 0.0))
        throw DomainError("T must be positive");
    const double d1 = a - Z_A;
    const double d2 = 1.0 - b - Z_A;
    if (d1 == 0.0)
        throw CalibrationError(CalibrationError::Reason::unidentifiable, "S1/C1",
                               "vendor 1 does not customize: its cost constants drop out");
    if (d2 == 0.0)
        throw CalibrationError(CalibrationError::Reason::unidentifiable, "S2/C2",
                               "vendor 2 does not customize: its cost constants drop out");
    if (obs.q1 == 0.0)
        throw CalibrationError(CalibrationError::Reason::unidentifiable, "S1",
                               "zero quality leaves S1 unidentifiable");
    if (obs.q2 == 0.0)
        throw CalibrationError(CalibrationError::Reason::unidentifiable, "S2",
                               "zero quality leaves S2 unidentifiable");

    const double T = prefs.T;
    const double beta = prefs.beta;
    const double TL = T * gap;
    const double curvature = beta * beta / (9.0 * TL);
    const double B1 = beta / 9.0 * (3.0 + a - b - beta * obs.q2 / TL);
    const double B2 = beta / 9.0 * (3.0 + b - a - beta * obs.q1 / TL);

    Costs c;
    c.S1 = (curvature + B1 / obs.q1) / (2.0 * d1 * d1);
    c.S2 = (curvature + B2 / obs.q2) / (2.0 * d2 * d2);

    const double g1 = obs.p1 * ((-1.0 - 3.0 * a - b) / (6.0 * gap) +
                                beta * (obs.q1 - obs.q2) / (6.0 * TL * gap));
    const double g2 = obs.p2 * ((-1.0 - 3.0 * b - a) / (6.0 * gap) +
                                beta * (obs.q2 - obs.q1) / (6.0 * TL * gap));
    c.C1 = g1 / (2.0 * d1) - c.S1 * obs.q1 * obs.q1;
    c.C2 = -g2 / (2.0 * d2) - c.S2 * obs.q2 * obs.q2;
    return c;
}

ModelParams CalibratedConstants::params(double Z_A, double Q) const {
    ModelParams p;
    p.Z_A = Z_A;
    p.T = T;
    p.beta = beta;
    p.C1 = C1;
    p.C2 = C2;
    p.S1 = S1;
    p.S2 = S2;
    p.Q = Q;
    return p;
}

CalibratedConstants calibrate(const MarketObservation& obs, double Z_A) {
    const Preferences prefs = calibrate_preferences(obs);
    const Costs costs = calibrate_costs(obs, prefs, Z_A);
    return {prefs.T, prefs.beta, costs.S1, costs.C1, costs.S2, costs.C2};
}

double StationarityResiduals::max_abs() const {
    return std::max({std::abs(quality1), std::abs(location1), std::abs(quality2), std::abs(location2)});
}

StationarityResiduals stationarity_residuals(const ModelParams& params, const StrategyProfile& profile) {
    StationarityResiduals r;
    r.quality1 = quality_utility_derivative(params, Vendor::one, profile);
    r.location1 = location_utility_derivative(params, Vendor::one, profile);
    r.quality2 = quality_utility_derivative(params, Vendor::two, profile);
    r.location2 = location_utility_derivative(params, Vendor::two, profile);
    return r;
}

} // namespace fragsec
