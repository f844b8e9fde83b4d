#pragma once

// Recovering the model constants from one observed market: quantify the
// devices, then invert the price equilibrium and the four stage-1
// stationarity conditions.

#include "fragsec/model.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace fragsec {

/// Raw per-device data. Counts are doubles so large LoC totals stay exact.
struct DeviceObservation {
    double vendor_loc_added = 0.0;
    double thirdparty_loc = 0.0;
    double total_loc = 0.0;
    double customization_vulns = 0.0;
    double max_vulns_in_cohort = 0.0;
    double price_group = 0.0; ///< 1-10 scale, used directly as the price

    void validate() const;
};

enum class Side { left, right };

/// Z_A - pct/2 (left, vendor 1's a) or 1 - Z_A - pct/2 (right, vendor 2's b)
/// with pct = (vendor + third-party LoC) / total LoC.
double quantify_location(const DeviceObservation& obs, double Z_A, Side side);

/// 1 - customization_vulns / max_vulns_in_cohort.
double quantify_quality(const DeviceObservation& obs);

/// Quantified market: locations, qualities and prices of both vendors.
struct MarketObservation {
    double a = 0.0;
    double b = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;

    StrategyProfile profile() const { return {a, b, q1, q2}; }
};

MarketObservation quantify_market(const DeviceObservation& vendor1, const DeviceObservation& vendor2,
                                  double Z_A);

class CalibrationError : public std::runtime_error {
public:
    enum class Reason { singular, inconsistent, unidentifiable };

    CalibrationError(Reason reason, std::string parameter, const std::string& what)
        : std::runtime_error(what), reason_(reason), parameter_(std::move(parameter)) {}

    Reason reason() const { return reason_; }
    const std::string& parameter() const { return parameter_; }

private:
    Reason reason_;
    std::string parameter_;
};

struct Preferences {
    double T = 0.0;
    double beta = 0.0;
};

/// Inverts the equilibrium prices: T from their sum, beta from their
/// difference.
Preferences calibrate_preferences(const MarketObservation& obs);

struct Costs {
    double S1 = 0.0;
    double C1 = 0.0;
    double S2 = 0.0;
    double C2 = 0.0;
};

/// Solves dpi_i/dq_i = 0 for S_i, then dpi_i/d(offset) = 0 for C_i.
Costs calibrate_costs(const MarketObservation& obs, const Preferences& prefs, double Z_A);

struct CalibratedConstants {
    double T = 0.0;
    double beta = 0.0;
    double S1 = 0.0;
    double C1 = 0.0;
    double S2 = 0.0;
    double C2 = 0.0;

    /// Model parameters with these constants (Q = 1, qualities being
    /// fractions of AOSP's).
    ModelParams params(double Z_A, double Q = 1.0) const;
};

CalibratedConstants calibrate(const MarketObservation& obs, double Z_A);

/// dpi1/dq1, dpi1/da, dpi2/dq2, dpi2/db at the observed profile.
struct StationarityResiduals {
    double quality1 = 0.0;
    double location1 = 0.0;
    double quality2 = 0.0;
    double location2 = 0.0;

    double max_abs() const;
};

StationarityResiduals stationarity_residuals(const ModelParams& params, const StrategyProfile& profile);

} // namespace fragsec
