#include "fragsec/best_response.hpp"

#include "fragsec/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fragsec {

std::string to_string(QualityCase c) {
    switch (c) {
    case QualityCase::AposBpos: return "AposBpos";
    case QualityCase::AnegBpos: return "AnegBpos";
    case QualityCase::AposBneg: return "AposBneg";
    case QualityCase::AnegBneg: return "AnegBneg";
    case QualityCase::beta_zero: return "beta_zero";
    }
    return "unknown";
}

namespace {

StrategyProfile make_profile(Vendor vendor, double own_offset, double opp_offset,
                             double own_quality, double opp_quality) {
    if (vendor == Vendor::one)
        return {own_offset, opp_offset, own_quality, opp_quality};
    return {opp_offset, own_offset, opp_quality, own_quality};
}

// Signed distance of the vendor's position from AOSP.
double aosp_distance(const ModelParams& params, Vendor vendor, double own_offset) {
    return vendor == Vendor::one ? own_offset - params.Z_A : 1.0 - own_offset - params.Z_A;
}

void check_offsets(const ModelParams& params, Vendor vendor, double own_offset, double opp_offset) {
    if (own_offset < 0.0 || own_offset > params.max_offset(vendor))
        throw DomainError("own offset out of range for " + to_string(vendor));
    if (opp_offset < 0.0 || opp_offset > params.max_offset(rival(vendor)))
        throw DomainError("opponent offset out of range for " + to_string(rival(vendor)));
    require_separated(own_offset, opp_offset);
}

} // namespace

QualityBestResponse quality_best_response(const ModelParams& params, Vendor vendor,
                                          double own_offset, double opp_offset,
                                          double opp_quality) {
    params.validate();
    check_offsets(params, vendor, own_offset, opp_offset);
    if (opp_quality < 0.0 || opp_quality > params.Q)
        throw DomainError("opponent quality must lie in [0, Q]");

    const double gap = 1.0 - own_offset - opp_offset;
    const double d = aosp_distance(params, vendor, own_offset);
    const double S = params.security_cost(vendor);
    const double beta = params.beta;
    const double T = params.T;

    QualityBestResponse br;
    QualityBRDiagnostics& diag = br.diagnostics;
    if (beta == 0.0) {
        diag.A = -2.0 * S * d * d;
        diag.B = 0.0;
        diag.case_tag = QualityCase::beta_zero;
        br.quality = 0.0;
        return br;
    }

    const double lead = 3.0 + own_offset - opp_offset;
    diag.A = -2.0 * S * d * d + beta * beta / (9.0 * T * gap);
    diag.B = beta / 9.0 * (lead - beta * opp_quality / (T * gap));
    const double q_bar = std::clamp(opp_quality - T / beta * gap * lead, 0.0, params.Q);
    diag.q_bar = q_bar;

    const double Q = params.Q;
    double q = Q;
    if (diag.A >= 0.0 && diag.B >= 0.0) {
        diag.case_tag = QualityCase::AposBpos;
        q = Q;
    } else if (diag.A < 0.0 && diag.B >= 0.0) {
        diag.case_tag = QualityCase::AnegBpos;
        q = std::min(-diag.B / diag.A, Q);
    } else if (diag.A >= 0.0) {
        diag.case_tag = QualityCase::AposBneg;
        const Mode plain;
        const double u_bar = price_equilibrated_utility(
            params, plain, make_profile(vendor, own_offset, opp_offset, q_bar, opp_quality), vendor);
        const double u_top = price_equilibrated_utility(
            params, plain, make_profile(vendor, own_offset, opp_offset, Q, opp_quality), vendor);
        q = u_top > u_bar ? Q : q_bar;
    } else {
        diag.case_tag = QualityCase::AnegBneg;
        q = q_bar;
    }
    br.quality = std::clamp(q, 0.0, Q);
    return br;
}

double quality_utility_derivative(const ModelParams& params, Vendor vendor,
                                  const StrategyProfile& profile, const Mode& mode) {
    params.validate();
    validate_profile(params, profile);
    const FineAmounts fines = fine_amounts(mode, profile);
    const PriceVector prices = price_equilibrium(params, profile, fines).prices;
    const double q = profile.quality(vendor);
    double fine_slope = 0.0;
    if (mode.has_fine() && q <= mode.fine->q_min)
        fine_slope = -mode.fine->F;
    const double d = aosp_distance(params, vendor, profile.offset(vendor));
    const double margin = prices.of(vendor) - fines.of(vendor);
    return margin * (params.beta - fine_slope) / (3.0 * params.T * profile.gap()) -
           2.0 * params.security_cost(vendor) * q * d * d;
}

double location_utility_derivative(const ModelParams& params, Vendor vendor,
                                   const StrategyProfile& profile, const Mode& mode) {
    params.validate();
    validate_profile(params, profile);
    const FineAmounts fines = fine_amounts(mode, profile);
    const PriceVector prices = price_equilibrium(params, profile, fines).prices;
    const double gap = profile.gap();
    const double T = params.T;
    const double a = profile.a;
    const double b = profile.b;

    if (vendor == Vendor::one) {
        const double demand_and_strategic =
            (-1.0 - 3.0 * a - b) / (6.0 * gap) +
            (params.beta * (profile.q1 - profile.q2) + fines.f2 - fines.f1) / (6.0 * T * gap * gap);
        return (prices.p1 - fines.f1) * demand_and_strategic -
               2.0 * (params.C1 + params.S1 * profile.q1 * profile.q1) * (a - params.Z_A);
    }
    const double demand_and_strategic =
        (-1.0 - 3.0 * b - a) / (6.0 * gap) +
        (params.beta * (profile.q2 - profile.q1) + fines.f1 - fines.f2) / (6.0 * T * gap * gap);
    return (prices.p2 - fines.f2) * demand_and_strategic +
           2.0 * (params.C2 + params.S2 * profile.q2 * profile.q2) * (1.0 - b - params.Z_A);
}

namespace {

LocationBestResponse naive_location_rule(const ModelParams& params, const Mode& mode,
                                         Vendor vendor, double opp_offset,
                                         double effective_cost, double assumed_quality) {
    const double T = params.T;
    const double z = params.max_offset(vendor);
    const double y = opp_offset;
    const double c = effective_cost;

    LocationBestResponse br;
    LocationBRDiagnostics& diag = br.diagnostics;
    diag.effective_cost = c;
    diag.A = -3.0 * T;
    diag.B = 2.0 * T * y - 10.0 * T - 36.0 * c;
    diag.C = T * (y * y - 2.0 * y - 3.0) + 36.0 * c * z;

    const double disc = diag.B * diag.B - 4.0 * diag.A * diag.C;
    if (disc >= 0.0) {
        // B < 0 always, so the stable form never divides by zero.
        const double s = -0.5 * (diag.B + std::copysign(std::sqrt(disc), diag.B));
        const double r1 = s / diag.A;
        const double r2 = diag.C / s;
        diag.root_low = std::min(r1, r2);
        diag.root_high = std::max(r1, r2);
    }

    auto interior = [&]() {
        if (!diag.root_high)
            throw std::logic_error("location rule requires a root but the discriminant is negative");
        return std::clamp(*diag.root_high, 0.0, z);
    };

    if (z == 0.0) {
        diag.rule = "no_room";
        br.offset = 0.0;
    } else {
        diag.lower_threshold = T / (12.0 * z);
        diag.upper_threshold = T / (9.0 * z);
        if (c <= diag.lower_threshold) {
            diag.rule = "maximal_differentiation";
            br.offset = 0.0;
        } else if (c >= diag.upper_threshold) {
            diag.rule = "root";
            br.offset = interior();
        } else {
            const double threshold = 1.0 - std::sqrt(4.0 - 36.0 * c * z / T);
            diag.opp_threshold = threshold;
            if (y <= threshold) {
                diag.rule = "root_below_threshold";
                br.offset = interior();
            } else {
                diag.rule = "maximal_differentiation_above_threshold";
                br.offset = 0.0;
            }
        }
    }
    diag.chosen = br.offset;
    if (1.0 - br.offset - opp_offset >= kLocationEpsilon) {
        const StrategyProfile p = make_profile(vendor, br.offset, opp_offset, assumed_quality, assumed_quality);
        diag.utility = price_equilibrated_utility(params, mode, p, vendor);
    } else {
        diag.utility = std::numeric_limits<double>::quiet_NaN();
    }
    return br;
}

} // namespace

LocationBestResponse naive_location_best_response(const ModelParams& params, Vendor vendor,
                                                  double opp_offset) {
    params.validate();
    if (params.beta != 0.0)
        throw DomainError("naive location best response requires beta = 0");
    if (opp_offset < 0.0 || opp_offset > params.max_offset(rival(vendor)))
        throw DomainError("opponent offset out of range");
    return naive_location_rule(params, Mode::no_fine(), vendor, opp_offset,
                               params.customization_cost(vendor), 0.0);
}

LocationBestResponse naive_location_best_response_with_fine(const ModelParams& params,
                                                            const FinePolicy& policy,
                                                            Vendor vendor, double opp_offset) {
    params.validate();
    policy.validate(params);
    if (params.beta != 0.0)
        throw DomainError("naive location best response requires beta = 0");
    if (opp_offset < 0.0 || opp_offset > params.max_offset(rival(vendor)))
        throw DomainError("opponent offset out of range");
    const double c = params.customization_cost(vendor) +
                     params.security_cost(vendor) * policy.q_min * policy.q_min;
    return naive_location_rule(params, Mode::with_fine(policy), vendor, opp_offset, c, policy.q_min);
}

namespace {

// Scans the vendor's offset range with quality set by `quality_at`, then
// refines the best bracket: bisection on the analytic slope when it changes
// sign there, golden section on the payoff otherwise.
template <class QualityAt>
JointBestResponse scan_offsets(const ModelParams& params, const Mode& mode, Vendor vendor,
                               double opp_offset, double opp_quality, const ScanOptions& scan,
                               QualityAt quality_at) {
    const double bound = params.max_offset(vendor);
    const std::size_t n = bound > 0.0 ? std::max<std::size_t>(scan.grid_points, 2) : 1;

    auto profile_at = [&](double x, double q) {
        return make_profile(vendor, x, opp_offset, q, opp_quality);
    };
    auto utility_at = [&](double x) {
        const double q = quality_at(x);
        return price_equilibrated_utility(params, mode, profile_at(x, q), vendor);
    };
    auto slope_at = [&](double x) {
        const double q = quality_at(x);
        return location_utility_derivative(params, vendor, profile_at(x, q), mode);
    };
    auto offset_at = [&](std::size_t k) {
        return n == 1 ? 0.0 : bound * (static_cast<double>(k) / static_cast<double>(n - 1));
    };
    auto valid = [&](double x) { return 1.0 - x - opp_offset >= kLocationEpsilon; };

    std::vector<double> utilities(n, -std::numeric_limits<double>::infinity());
    std::size_t best = n;
    for (std::size_t k = n; k-- > 0;) {
        const double x = offset_at(k);
        if (!valid(x))
            continue;
        utilities[k] = utility_at(x);
        if (best == n || utilities[k] > utilities[best])
            best = k;
    }
    if (best == n)
        throw DomainError("no admissible offset for " + to_string(vendor));

    JointBestResponse br;
    auto record = [&](const std::string& label, double x, double u) {
        br.candidates.push_back({label, x, quality_at(x), u});
    };
    if (std::isfinite(utilities[0]))
        record("boundary_low", 0.0, utilities[0]);
    if (n > 1 && std::isfinite(utilities[n - 1]))
        record("boundary_high", bound, utilities[n - 1]);
    record("grid_best", offset_at(best), utilities[best]);

    double best_x = offset_at(best);
    double best_u = utilities[best];

    std::optional<std::pair<double, double>> bracket;
    const double g_mid = slope_at(best_x);
    if (g_mid > 0.0 && best + 1 < n && std::isfinite(utilities[best + 1]) &&
        slope_at(offset_at(best + 1)) < 0.0)
        bracket = {best_x, offset_at(best + 1)};
    else if (g_mid < 0.0 && best > 0 && std::isfinite(utilities[best - 1]) &&
             slope_at(offset_at(best - 1)) > 0.0)
        bracket = {offset_at(best - 1), best_x};

    std::optional<double> refined;
    if (bracket) {
        auto [lo, hi] = *bracket;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            (slope_at(mid) > 0.0 ? lo : hi) = mid;
        }
        refined = 0.5 * (lo + hi);
    } else if (g_mid != 0.0 && best > 0 && best + 1 < n && std::isfinite(utilities[best - 1]) &&
               std::isfinite(utilities[best + 1])) {
        constexpr double inv_phi = 0.6180339887498949;
        double lo = offset_at(best - 1);
        double hi = offset_at(best + 1);
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        double u1 = utility_at(x1);
        double u2 = utility_at(x2);
        while (hi - lo > scan.refine_tolerance) {
            if (u1 < u2) {
                lo = x1;
                x1 = x2;
                u1 = u2;
                x2 = lo + inv_phi * (hi - lo);
                u2 = utility_at(x2);
            } else {
                hi = x2;
                x2 = x1;
                u2 = u1;
                x1 = hi - inv_phi * (hi - lo);
                u1 = utility_at(x1);
            }
        }
        refined = 0.5 * (lo + hi);
    }
    if (refined && valid(*refined)) {
        const double u = utility_at(*refined);
        record("refined", *refined, u);
        if (u >= best_u - 1e-14 * std::max(1.0, std::abs(best_u))) {
            best_x = *refined;
            best_u = u;
        }
    }

    br.offset = best_x;
    br.quality = quality_at(best_x);
    br.utility = best_u;
    return br;
}

} // namespace

JointBestResponse joint_best_response(const ModelParams& params, Vendor vendor,
                                      double opp_offset, double opp_quality,
                                      const ScanOptions& scan) {
    params.validate();
    if (opp_offset < 0.0 || opp_offset > params.max_offset(rival(vendor)))
        throw DomainError("opponent offset out of range");
    if (opp_quality < 0.0 || opp_quality > params.Q)
        throw DomainError("opponent quality must lie in [0, Q]");

    if (params.beta == 0.0) {
        const LocationBestResponse loc = naive_location_best_response(params, vendor, opp_offset);
        JointBestResponse br;
        br.offset = loc.offset;
        br.quality = 0.0;
        br.utility = price_equilibrated_utility(
            params, Mode::no_fine(), make_profile(vendor, br.offset, opp_offset, 0.0, opp_quality), vendor);
        br.candidates.push_back({"closed_form:" + loc.diagnostics.rule, br.offset, 0.0, br.utility});
        return br;
    }
    return scan_offsets(params, Mode::no_fine(), vendor, opp_offset, opp_quality, scan, [&](double x) {
        return quality_best_response(params, vendor, x, opp_offset, opp_quality).quality;
    });
}

JointBestResponse joint_best_response_with_fine(const ModelParams& params,
                                                const FinePolicy& policy, Vendor vendor,
                                                double opp_offset, double opp_quality,
                                                const ScanOptions& scan) {
    params.validate();
    policy.validate(params);
    if (opp_offset < 0.0 || opp_offset > params.max_offset(rival(vendor)))
        throw DomainError("opponent offset out of range");
    if (opp_quality < 0.0 || opp_quality > params.Q)
        throw DomainError("opponent quality must lie in [0, Q]");
    const double opp_fine = fine_amount(policy, opp_quality);
    return scan_offsets(params, Mode::with_fine(policy), vendor, opp_offset, opp_quality, scan,
                        [&](double x) {
                            const double a = vendor == Vendor::one ? x : opp_offset;
                            const double b = vendor == Vendor::one ? opp_offset : x;
                            if (params.beta == 0.0)
                                return fine_quality_best_response_naive(params, policy, vendor, a, b, opp_fine);
                            return fine_quality_best_response(params, policy, vendor, a, b, opp_quality);
                        });
}

} // namespace fragsec
