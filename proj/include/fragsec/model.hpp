#pragma once

// Primitive types of the two-vendor customization game: exogenous
// parameters, first-stage strategies, second-stage prices, and the
// vendor/consumer payoff functions everything else is built on.

#include <stdexcept>
#include <string>

namespace fragsec {

/// Smallest admissible gap 1 - a - b between the two products.
inline constexpr double kLocationEpsilon = 1e-9;

enum class Vendor { one = 1, two = 2 };

constexpr Vendor rival(Vendor v) { return v == Vendor::one ? Vendor::two : Vendor::one; }

constexpr int index(Vendor v) { return v == Vendor::one ? 0 : 1; }

/// Raised when an argument lies outside the model's domain (invalid
/// parameter, co-located products, out-of-range quality, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Exogenous constants of the game.
struct ModelParams {
    double Z_A = 0.5;  ///< AOSP position on [0,1]
    double T = 1.0;    ///< customization-importance
    double beta = 0.0; ///< security-importance (0 = naive consumers)
    double C1 = 0.0;
    double C2 = 0.0;
    double S1 = 0.0;
    double S2 = 0.0;
    double Q = 1.0; ///< AOSP patch quality, upper bound for q_i

    double customization_cost(Vendor v) const { return v == Vendor::one ? C1 : C2; }
    double security_cost(Vendor v) const { return v == Vendor::one ? S1 : S2; }

    /// Upper bound of the vendor's offset: Z_A for a, 1 - Z_A for b.
    double max_offset(Vendor v) const { return v == Vendor::one ? Z_A : 1.0 - Z_A; }

    void validate() const;
};

/// First-stage choices. Vendor 1 sits at z1 = a, vendor 2 at z2 = 1 - b.
struct StrategyProfile {
    double a = 0.0;
    double b = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;

    double gap() const { return 1.0 - a - b; }
    double offset(Vendor v) const { return v == Vendor::one ? a : b; }
    double quality(Vendor v) const { return v == Vendor::one ? q1 : q2; }
    double position(Vendor v) const { return v == Vendor::one ? a : 1.0 - b; }

    StrategyProfile with_offset(Vendor v, double x) const;
    StrategyProfile with_quality(Vendor v, double q) const;

    friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

/// Checks the profile against the parameter bounds; throws DomainError.
void validate_profile(const ModelParams& params, const StrategyProfile& profile);

/// Throws DomainError when 1 - a - b < kLocationEpsilon.
void require_separated(double a, double b);

struct PriceVector {
    double p1 = 0.0;
    double p2 = 0.0;

    double of(Vendor v) const { return v == Vendor::one ? p1 : p2; }
};

struct FineAmounts {
    double f1 = 0.0;
    double f2 = 0.0;

    double of(Vendor v) const { return v == Vendor::one ? f1 : f2; }
};

struct Shares {
    double D1 = 0.5;
    double D2 = 0.5;
    bool clamped = false; ///< the raw indifference point fell outside [0,1]

    double of(Vendor v) const { return v == Vendor::one ? D1 : D2; }
};

struct VendorUtilities {
    double pi1 = 0.0;
    double pi2 = 0.0;

    double of(Vendor v) const { return v == Vendor::one ? pi1 : pi2; }
};

/// Second-stage market result for a fixed profile and price vector.
struct MarketOutcome {
    double D1 = 0.5;
    double D2 = 0.5;
    double f1 = 0.0;
    double f2 = 0.0;
    double pi1 = 0.0;
    double pi2 = 0.0;
    bool clamped = false;
};

/// A product on offer as seen by a consumer.
struct Offer {
    double position = 0.0;
    double price = 0.0;
    double quality = 0.0;
};

/// Customization plus security cost C_i d^2 + S_i q^2 d^2, d = position - Z_A.
double vendor_cost(const ModelParams& params, Vendor vendor, double position, double quality);

/// pi_i = (p_i - f_i) D_i - vendor_cost_i. Pass zero fines for the
/// game without regulation.
VendorUtilities vendor_utility(const ModelParams& params, const StrategyProfile& profile,
                               const PriceVector& prices, const Shares& shares,
                               const FineAmounts& fines = {});

/// u = beta q - p - T (x - z)^2; may be negative.
double consumer_utility(const ModelParams& params, const Offer& offer, double x);

std::string to_string(Vendor v);

} // namespace fragsec
