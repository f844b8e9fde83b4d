#include "fragsec/model.hpp"

#include <cmath>
#include <sstream>

namespace fragsec {

namespace {

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x))
            return false;
    return true;
}

[[noreturn]] void fail(const std::string& what) { throw DomainError(what); }

} // namespace

void ModelParams::validate() const {
    if (!finite_all({Z_A, T, beta, C1, C2, S1, S2, Q}))
        fail("model parameters must be finite");
    if (Z_A < 0.0 || Z_A > 1.0)
        fail("Z_A must lie in [0,1]");
    if (T <= 0.0)
        fail("T must be positive");
    if (beta < 0.0)
        fail("beta must be non-negative");
    if (C1 < 0.0 || C2 < 0.0)
        fail("customization costs C1, C2 must be non-negative");
    if (S1 < 0.0 || S2 < 0.0)
        fail("security costs S1, S2 must be non-negative");
    if (Q <= 0.0)
        fail("Q must be positive");
}

StrategyProfile StrategyProfile::with_offset(Vendor v, double x) const {
    StrategyProfile p = *this;
    (v == Vendor::one ? p.a : p.b) = x;
    return p;
}

StrategyProfile StrategyProfile::with_quality(Vendor v, double q) const {
    StrategyProfile p = *this;
    (v == Vendor::one ? p.q1 : p.q2) = q;
    return p;
}

void require_separated(double a, double b) {
    if (!(1.0 - a - b >= kLocationEpsilon)) {
        std::ostringstream os;
        os << "co-located products: 1 - a - b = " << (1.0 - a - b) << " < " << kLocationEpsilon;
        fail(os.str());
    }
}

void validate_profile(const ModelParams& params, const StrategyProfile& s) {
    if (!finite_all({s.a, s.b, s.q1, s.q2}))
        fail("strategy profile must be finite");
    if (s.a < 0.0 || s.a > params.Z_A)
        fail("a must lie in [0, Z_A]");
    if (s.b < 0.0 || s.b > 1.0 - params.Z_A)
        fail("b must lie in [0, 1 - Z_A]");
    if (s.q1 < 0.0 || s.q1 > params.Q || s.q2 < 0.0 || s.q2 > params.Q)
        fail("qualities must lie in [0, Q]");
    require_separated(s.a, s.b);
}

double vendor_cost(const ModelParams& params, Vendor vendor, double position, double quality) {
    if (!(position >= 0.0 && position <= 1.0))
        fail("vendor position must lie in [0,1]");
    if (!(quality >= 0.0 && quality <= params.Q))
        fail("quality must lie in [0, Q]");
    const double d = position - params.Z_A;
    const double d2 = d * d;
    return params.customization_cost(vendor) * d2 + params.security_cost(vendor) * quality * quality * d2;
}

VendorUtilities vendor_utility(const ModelParams& params, const StrategyProfile& profile,
                               const PriceVector& prices, const Shares& shares,
                               const FineAmounts& fines) {
    if (std::abs(shares.D1 + shares.D2 - 1.0) > 1e-12)
        fail("market shares must sum to one");
    if (fines.f1 < 0.0 || fines.f2 < 0.0)
        fail("fines must be non-negative");
    const double cost1 = vendor_cost(params, Vendor::one, profile.position(Vendor::one), profile.q1);
    const double cost2 = vendor_cost(params, Vendor::two, profile.position(Vendor::two), profile.q2);
    return {(prices.p1 - fines.f1) * shares.D1 - cost1, (prices.p2 - fines.f2) * shares.D2 - cost2};
}

double consumer_utility(const ModelParams& params, const Offer& offer, double x) {
    const double dx = x - offer.position;
    return params.beta * offer.quality - offer.price - params.T * dx * dx;
}

std::string to_string(Vendor v) { return v == Vendor::one ? "vendor1" : "vendor2"; }

} // namespace fragsec
