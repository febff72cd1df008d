#include "fpm/sensitivity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "fpm/errors.hpp"
#include "fpm/fit.hpp"

namespace fpm {

namespace {

constexpr double kGoldenAngle = 2.3999632297286533222;  // pi * (3 - sqrt(5))

double rmse_vs_type_means(const LinkSet& instance) {
    const auto means = instance.type_means();
    LinkSet ref = LinkSet::from_types(means[0], means[1], means[2], means[3]);
    return link_rmse(ref, instance);
}

struct InstanceEval {
    bool ok = false;
    double flatness = 0.0;
    double link_dev = 0.0;
};

InstanceEval evaluate_instance(const LinkSet& nominal, double sigma,
                               const std::vector<ControlInput>& inputs,
                               const SensitivityConfig& cfg, RandomStream stream) {
    InstanceEval out;
    LinkSet instance = nominal;
    if (cfg.perturb) {
        try {
            instance = perturb_links(nominal, sigma, stream);
        } catch (const NonPositiveResult&) {
            return out;
        }
    }

    std::vector<Vec3> cloud;
    cloud.reserve(inputs.size());
    try {
        for (const ControlInput& in : inputs) cloud.push_back(forward(instance, in).first);
    } catch (const Error&) {
        return out;
    }

    out.flatness = fit_plane(cloud, PlaneFitMode::Orthogonal).rmse;
    out.link_dev = cfg.reference == LinkRmseReference::TypeMean
                       ? rmse_vs_type_means(instance)
                       : link_rmse(nominal, instance);
    out.ok = true;
    return out;
}

}  // namespace

std::vector<ControlInput> workspace_pattern(int n_points, double workspace_rel, double l_c) {
    const double radius = workspace_rel * l_c / 2.0;
    std::vector<ControlInput> inputs;
    inputs.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double r = radius * std::sqrt((i + 0.5) / n_points);
        const double phi = std::fmod(i * kGoldenAngle, 6.283185307179586476925286766559);
        inputs.push_back({2.0 * std::atan(r / l_c), phi});
    }
    return inputs;
}

SensitivityResult kinematic_sensitivity(const LinkSet& links, const SensitivityConfig& cfg) {
    if (cfg.n_points < 2 || cfg.n_instances < 2)
        throw Error("kinematic_sensitivity: counts must be at least 2");
    if (!(cfg.workspace_rel > 0.0 && cfg.workspace_rel < 2.0))
        throw Error("kinematic_sensitivity: workspace_rel out of range");
    if (!(cfg.sigma_rel > 0.0))
        throw Error("kinematic_sensitivity: sigma_rel must be positive");
    if (!validate_links(links).valid)
        throw InvalidLinks("kinematic_sensitivity: invalid link set");

    const double l_c = links.characteristic_length();
    const double sigma = cfg.sigma_rel * l_c;
    const std::vector<ControlInput> inputs = workspace_pattern(cfg.n_points, cfg.workspace_rel, l_c);

    SensitivityResult res;
    res.config = cfg;
    RandomStream root(cfg.seed);

    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(cfg.n_instances));
    double flat_sum = 0.0, dev_sum = 0.0;
    for (int i = 0; i < cfg.n_instances; ++i) {
        const InstanceEval ev =
            evaluate_instance(links, sigma, inputs, cfg, root.substream(static_cast<std::uint64_t>(i)));
        if (!ev.ok) {
            ++res.failures;
            continue;
        }
        res.per_instance.push_back({ev.flatness, ev.link_dev});
        flat_sum += ev.flatness;
        dev_sum += ev.link_dev;
        if (!cfg.perturb)
            ratios.push_back(0.0);
        else
            ratios.push_back(ev.flatness / ev.link_dev);
    }

    if (res.failures > cfg.max_failure_frac * cfg.n_instances)
        throw OutOfWorkspace("kinematic_sensitivity: too many instances left the workspace");
    const auto n = static_cast<double>(ratios.size());
    if (n < 2)
        throw OutOfWorkspace("kinematic_sensitivity: fewer than two feasible instances");

    res.flatness_rmse_mean = flat_sum / n;
    res.link_rmse_mean = dev_sum / n;

    switch (cfg.aggregate) {
        case SensitivityAggregate::RmsOfRatios: {
            double ss = 0.0;
            for (double r : ratios) ss += r * r;
            const double mean_sq = ss / n;
            res.s_k = std::sqrt(mean_sq);
            double var = 0.0;
            for (double r : ratios) var += (r * r - mean_sq) * (r * r - mean_sq);
            var /= (n - 1.0);
            // delta method on the mean of squared ratios
            res.ci95 = res.s_k > 0.0 ? 1.96 * std::sqrt(var / n) / (2.0 * res.s_k) : 0.0;
            break;
        }
        case SensitivityAggregate::MeanOfRatios: {
            double sum = 0.0;
            for (double r : ratios) sum += r;
            res.s_k = sum / n;
            double var = 0.0;
            for (double r : ratios) var += (r - res.s_k) * (r - res.s_k);
            var /= (n - 1.0);
            res.ci95 = 1.96 * std::sqrt(var / n);
            break;
        }
        case SensitivityAggregate::RatioOfMeans: {
            res.s_k = res.link_rmse_mean > 0.0 ? res.flatness_rmse_mean / res.link_rmse_mean : 0.0;
            double var = 0.0;
            for (double r : ratios) {
                const double c = r - res.s_k;
                var += c * c;
            }
            var /= (n - 1.0);
            res.ci95 = 1.96 * std::sqrt(var / n);
            break;
        }
    }
    return res;
}

std::vector<LandscapeRow> sweep_landscape(const std::vector<double>& h_values,
                                          const std::vector<double>& r_values,
                                          double gamma,
                                          const SensitivityConfig& cfg,
                                          int threads) {
    const std::size_t n_nodes = h_values.size() * r_values.size();
    std::vector<LandscapeRow> rows(n_nodes);

    auto eval_node = [&](std::size_t idx) {
        const double h = h_values[idx / r_values.size()];
        const double r = r_values[idx % r_values.size()];
        LandscapeRow row;
        row.h = h;
        row.r = r;
        row.gamma = gamma;
        row.h_over_r = r != 0.0 ? h / r : std::numeric_limits<double>::quiet_NaN();
        row.s_k = std::numeric_limits<double>::quiet_NaN();
        row.ci95 = std::numeric_limits<double>::quiet_NaN();

        SensitivityConfig node_cfg = cfg;
        node_cfg.seed = RandomStream(cfg.seed).substream(idx).next_u64();
        try {
            const LinkSet links = links_from_design({1.0, r, h, gamma});
            if (!validate_links(links).valid) {
                rows[idx] = row;
                return;
            }
            const SensitivityResult res = kinematic_sensitivity(links, node_cfg);
            row.s_k = res.s_k;
            row.ci95 = res.ci95;
            row.failures = res.failures;
            row.valid = true;
        } catch (const Error&) {
            // invalid or infeasible node: marked, not dropped
        }
        rows[idx] = row;
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < n_nodes; ++i) eval_node(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n_nodes) return;
                    eval_node(i);
                }
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::vector<TradeoffPoint> workspace_flatness_curve(const LinkSet& links,
                                                    const SensitivityConfig& cfg,
                                                    const std::vector<double>& levels) {
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i] > levels[i - 1]))
            throw Error("workspace_flatness_curve: levels must be ascending");

    std::vector<TradeoffPoint> curve;
    curve.reserve(levels.size());
    for (double level : levels) {
        SensitivityConfig level_cfg = cfg;
        level_cfg.workspace_rel = level;
        // same root seed: instance substreams, and so the perturbations,
        // are identical across levels
        const SensitivityResult res = kinematic_sensitivity(links, level_cfg);
        TradeoffPoint pt;
        pt.w_rel = level;
        pt.flatness_rmse = res.flatness_rmse_mean;
        pt.failures = res.failures;
        double var = 0.0;
        for (const auto& inst : res.per_instance) {
            const double c = inst.flatness - res.flatness_rmse_mean;
            var += c * c;
        }
        const auto n = static_cast<double>(res.per_instance.size());
        pt.ci95 = n > 1 ? 1.96 * std::sqrt(var / (n - 1.0) / n) : 0.0;
        curve.push_back(pt);
    }
    return curve;
}

}  // namespace fpm
