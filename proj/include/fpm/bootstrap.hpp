#pragma once

#include <vector>

#include "fpm/rng.hpp"
#include "fpm/sensitivity.hpp"

namespace fpm {

/// Noise magnitudes of the measurement-free fabrication process, relative to
/// the length being handled.
struct NoiseModel {
    double copy_sigma_rel = 0.01;     // tactile copy of a link
    double closure_sigma_rel = 0.005; // sensing a polygon closure gap
    double cut_sigma_rel = 0.005;     // cutting to an estimated length
};

/// Normalized target lengths reachable by integer-multiple constructions of
/// the seed link A (the intermediate link K braces the D polygon's apex).
struct BootstrapTargets {
    double a = 1.0;
    double b = 2.2360679774997896;      // sqrt(5): legs A, 2A
    double c = 3.6055512754639893;      // sqrt(13): legs 2A, 3A
    double k = 2.8284271247461903;      // 2*sqrt(2): legs 2A, 2A
    double d = 3.6955181300451474;      // 2*sqrt(2+sqrt(2)): two 2A sides at the K-braced apex
};

struct BootstrapState {
    int iteration = 0;
    double len_a = 1.0, len_b = 2.0, len_c = 3.0, len_k = 2.0, len_d = 3.0;
    // relative per-type errors |len - target| / target for B, C, K, D
    std::array<double, 4> delta{};
    double delta_mean = 0.0;            // mean over the refined links B, C, K, D
    double delta_mean_with_seed = 0.0;  // mean including the exact seed link A
    double s_k = 0.0;                   // predicted sensitivity of (A, B, C, D)
};

struct ScalingStep {
    int iteration = 0;
    double estimated_length = 0.0;
    double relative_error = 0.0;
};

using ScalingTrace = std::vector<ScalingStep>;

/// Target lengths of the feedback-polygon constructions for seed length a.
/// B closes a right triangle with legs a and 2a; C with legs 2a and 3a;
/// K with legs 2a and 2a; D spans two 2a sides held at the K-braced apex
/// (the 2a,2a,K triangle fixes the half-apex at pi/8 on each side).
double polygon_target_b(double a);
double polygon_target_c(double a);
double polygon_target_k(double a);
double polygon_target_d(double a);

/// Closure distance of the feedback polygon for a candidate link laid against
/// its construction; zero exactly at the target length.
double closure_distance(double candidate, double target);

/// First-order closure-gap measurement: gain * (current - target) plus
/// comparison noise scaled by the target length.
double closure_gap(double current, double target, double polygon_gain,
                   const NoiseModel& noise, RandomStream& rng);

/// Simulates scaling a seed link to n times its length by chaining noisy
/// copies, then iteratively cutting a candidate against the chain span.
ScalingTrace scale_link_integer(double seed_length, int n, const NoiseModel& noise,
                                RandomStream rng, int max_iters);

/// Iterative feedback-polygon refinement from an integer initialization.
/// Every non-A link is corrected by its measured closure gap (full step) and
/// re-cut with cut noise; each state's s_k comes from kinematic_sensitivity.
std::vector<BootstrapState> bootstrap_refine(const BootstrapState& init,
                                             const NoiseModel& noise, RandomStream rng,
                                             int iters, const SensitivityConfig& sk_cfg,
                                             double relaxation = 1.0);

}  // namespace fpm
