#pragma once

// Stage-1 best responses in quality and location.
//
// All functions take offsets rather than positions: vendor 1's offset is a
// (position a), vendor 2's is b (position 1 - b). "own" and "opp" refer to
// the responding vendor and its rival.

#include "fragsec/model.hpp"
#include "fragsec/regulation.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fragsec {

enum class QualityCase {
    AposBpos, ///< payoff increasing in q: choose Q
    AnegBpos, ///< concave with interior peak: min(-B/A, Q)
    AposBneg, ///< convex: better of q_bar and Q
    AnegBneg, ///< decreasing: lowest feasible q_bar
    beta_zero ///< naive consumers: zero investment
};

std::string to_string(QualityCase c);

/// dpi/dq = A q + B along the price-equilibrium manifold.
struct QualityBRDiagnostics {
    double A = 0.0;
    double B = 0.0;
    std::optional<double> q_bar; ///< price-zeroing quality, clamped to [0,Q]; empty when beta = 0
    QualityCase case_tag = QualityCase::beta_zero;
};

struct QualityBestResponse {
    double quality = 0.0;
    QualityBRDiagnostics diagnostics;
};

QualityBestResponse quality_best_response(const ModelParams& params, Vendor vendor,
                                          double own_offset, double opp_offset,
                                          double opp_quality);

/// Total derivative of the vendor's payoff in its own quality with prices
/// re-equilibrated; with a fine, the subgradient -F is used at q = q_min.
double quality_utility_derivative(const ModelParams& params, Vendor vendor,
                                  const StrategyProfile& profile, const Mode& mode = {});

/// Total derivative of the vendor's payoff in its own offset (a or b) at
/// fixed qualities, with prices re-equilibrated (demand effect plus
/// strategic effect minus marginal cost).
double location_utility_derivative(const ModelParams& params, Vendor vendor,
                                   const StrategyProfile& profile, const Mode& mode = {});

/// Naive-consumer location rule. The stationarity equation in the vendor's
/// own offset x is  A x^2 + B x + C = 0  with
///   A = -3T, B = 2T y - 10T - 36c, C = T(y^2 - 2y - 3) + 36 c z
/// where y is the rival offset, c the effective cost and z the vendor's
/// offset bound (Z_A or 1 - Z_A).
struct LocationBRDiagnostics {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    std::optional<double> root_low;
    std::optional<double> root_high;
    double effective_cost = 0.0;
    double lower_threshold = 0.0; ///< T / (12 z)
    double upper_threshold = 0.0; ///< T / (9 z)
    std::optional<double> opp_threshold; ///< 1 - sqrt(4 - 36 c z / T) in the middle band
    std::string rule;             ///< which branch of the rule fired
    double chosen = 0.0;
    double utility = 0.0;
};

struct LocationBestResponse {
    double offset = 0.0;
    LocationBRDiagnostics diagnostics;
};

LocationBestResponse naive_location_best_response(const ModelParams& params, Vendor vendor,
                                                  double opp_offset);

/// As above with effective cost C_i + S_i q_min^2 (vendors assumed compliant).
LocationBestResponse naive_location_best_response_with_fine(const ModelParams& params,
                                                            const FinePolicy& policy,
                                                            Vendor vendor, double opp_offset);

struct ScanOptions {
    std::size_t grid_points = 2001;
    double refine_tolerance = 1e-10;
};

struct Candidate {
    std::string label;
    double offset = 0.0;
    double quality = 0.0;
    double utility = 0.0;
};

struct JointBestResponse {
    double offset = 0.0;
    double quality = 0.0;
    double utility = 0.0;
    std::vector<Candidate> candidates; ///< boundaries, best grid point, refined point
};

/// Best (offset, quality) against the rival's (offset, quality). With
/// beta = 0 the closed-form location rule and zero quality are used;
/// otherwise the offset range is scanned with the quality set to its
/// closed-form best response at every point and the best bracket refined.
/// Ties prefer the larger offset, then the lower quality.
JointBestResponse joint_best_response(const ModelParams& params, Vendor vendor,
                                      double opp_offset, double opp_quality,
                                      const ScanOptions& scan = {});

/// Numeric joint best response with the fine inside the payoff; quality at
/// each offset from fine_quality_best_response.
JointBestResponse joint_best_response_with_fine(const ModelParams& params,
                                                const FinePolicy& policy, Vendor vendor,
                                                double opp_offset, double opp_quality,
                                                const ScanOptions& scan = {});

} // namespace fragsec
