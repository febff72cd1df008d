#pragma once

#include <cstdint>
#include <vector>

#include "fpm/design.hpp"
#include "fpm/kinematics.hpp"

namespace fpm {

/// Reference against which per-link deviations are measured in the
/// link RMSE. TypeMean measures each link against the mean of its own type
/// (the self-referenced scatter a caliper survey of a built mechanism sees);
/// Nominal measures against the unperturbed design.
enum class LinkRmseReference { TypeMean, Nominal };

/// How per-instance flatness/link-RMSE ratios are averaged into S_k.
enum class SensitivityAggregate { RmsOfRatios, MeanOfRatios, RatioOfMeans };

struct SensitivityConfig {
    double sigma_rel = 5e-4;      // noise std as a fraction of L_c
    int n_points = 50;            // workspace samples per instance
    int n_instances = 50;         // perturbation instances
    double workspace_rel = 0.4;   // W_d / L_c (disc diameter over L_c)
    std::uint64_t seed = 0;
    LinkRmseReference reference = LinkRmseReference::TypeMean;
    SensitivityAggregate aggregate = SensitivityAggregate::RmsOfRatios;
    bool perturb = true;          // debug path: false evaluates the exact design
    double max_failure_frac = 0.10;
};

struct InstanceOutcome {
    double flatness = 0.0;
    double link_rmse = 0.0;
};

struct SensitivityResult {
    double s_k = 0.0;
    double ci95 = 0.0;
    double flatness_rmse_mean = 0.0;
    double link_rmse_mean = 0.0;
    std::vector<InstanceOutcome> per_instance;
    int failures = 0;
    SensitivityConfig config;
};

struct LandscapeRow {
    double h = 0.0;
    double r = 0.0;
    double gamma = 0.0;
    double h_over_r = 0.0;
    double s_k = 0.0;     // NaN when the design is invalid
    double ci95 = 0.0;
    int failures = 0;
    bool valid = false;
};

struct TradeoffPoint {
    double w_rel = 0.0;
    double flatness_rmse = 0.0;
    double ci95 = 0.0;
    int failures = 0;
};

/// Deterministic golden-angle (sunflower) disc samples mapped to control
/// inputs: the i-th ideal endpoint lands at radius R*sqrt((i+0.5)/n).
std::vector<ControlInput> workspace_pattern(int n_points, double workspace_rel, double l_c);

/// Monte Carlo kinematic sensitivity S_k of one design.
SensitivityResult kinematic_sensitivity(const LinkSet& links, const SensitivityConfig& cfg);

/// S_k over an (H, R) grid at fixed gamma, normalized L_c = 1. Per-node
/// seeds derive from (cfg.seed, node index); results do not depend on the
/// thread count.
std::vector<LandscapeRow> sweep_landscape(const std::vector<double>& h_values,
                                          const std::vector<double>& r_values,
                                          double gamma,
                                          const SensitivityConfig& cfg,
                                          int threads = 1);

/// Mean flatness at several workspace levels, reusing the same perturbation
/// instances across levels for paired comparison.
std::vector<TradeoffPoint> workspace_flatness_curve(const LinkSet& links,
                                                    const SensitivityConfig& cfg,
                                                    const std::vector<double>& levels);

}  // namespace fpm
