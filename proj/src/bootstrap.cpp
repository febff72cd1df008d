#include "fpm/bootstrap.hpp"

#include <cmath>
#include <limits>

#include "fpm/errors.hpp"

namespace fpm {

double polygon_target_b(double a) { return std::hypot(a, 2.0 * a); }
double polygon_target_c(double a) { return std::hypot(2.0 * a, 3.0 * a); }
double polygon_target_k(double a) { return std::hypot(2.0 * a, 2.0 * a); }

double polygon_target_d(double a) {
    // base of the isoceles pair of 2a sides at apex angle 3*pi/4
    return 2.0 * (2.0 * a) * std::sin(3.0 * 3.141592653589793238462643383279 / 8.0);
}

double closure_distance(double candidate, double target) {
    return std::abs(candidate - target);
}

double closure_gap(double current, double target, double polygon_gain,
                   const NoiseModel& noise, RandomStream& rng) {
    if (!(target > 0.0) || !(polygon_gain > 0.0))
        throw Error("closure_gap: target and gain must be positive");
    return polygon_gain * (current - target) +
           noise.closure_sigma_rel * target * rng.next_normal_truncated(6.0);
}

ScalingTrace scale_link_integer(double seed_length, int n, const NoiseModel& noise,
                                RandomStream rng, int max_iters) {
    if (n < 1 || max_iters < 1)
        throw Error("scale_link_integer: n and max_iters must be at least 1");

    const double target = n * seed_length;
    double span = 0.0;  // taut chain of n tactile copies
    for (int i = 0; i < n; ++i)
        span += seed_length * (1.0 + noise.copy_sigma_rel * rng.next_normal_truncated(6.0));

    double candidate = span * (1.0 + noise.cut_sigma_rel * rng.next_normal_truncated(6.0));
    const double fit_tol = noise.closure_sigma_rel * span;

    ScalingTrace trace;
    trace.push_back({0, candidate, std::abs(candidate - target) / target});
    for (int it = 1; it <= max_iters; ++it) {
        const double gap = (candidate - span) +
                           noise.closure_sigma_rel * span * rng.next_normal_truncated(6.0);
        if (std::abs(gap) <= fit_tol) break;
        candidate = candidate - gap +
                    noise.cut_sigma_rel * span * rng.next_normal_truncated(6.0);
        trace.push_back({it, candidate, std::abs(candidate - target) / target});
    }
    return trace;
}

namespace {

void fill_deltas(BootstrapState& st, const BootstrapTargets& tg) {
    st.delta = {std::abs(st.len_b - tg.b) / tg.b, std::abs(st.len_c - tg.c) / tg.c,
                std::abs(st.len_k - tg.k) / tg.k, std::abs(st.len_d - tg.d) / tg.d};
    st.delta_mean = (st.delta[0] + st.delta[1] + st.delta[2] + st.delta[3]) / 4.0;
    st.delta_mean_with_seed = (st.delta[0] + st.delta[1] + st.delta[2] + st.delta[3] +
                               std::abs(st.len_a - tg.a) / tg.a) / 5.0;
}

double predicted_s_k(const BootstrapState& st, const SensitivityConfig& cfg) {
    const LinkSet links = LinkSet::from_types(st.len_a, st.len_b, st.len_c, st.len_d);
    if (!validate_links(links).valid)
        return std::numeric_limits<double>::quiet_NaN();
    try {
        return kinematic_sensitivity(links, cfg).s_k;
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

std::vector<BootstrapState> bootstrap_refine(const BootstrapState& init,
                                             const NoiseModel& noise, RandomStream rng,
                                             int iters, const SensitivityConfig& sk_cfg,
                                             double relaxation) {
    if (iters < 1)
        throw Error("bootstrap_refine: iters must be at least 1");
    if (!(init.len_a > 0.0 && init.len_b > 0.0 && init.len_c > 0.0 &&
          init.len_k > 0.0 && init.len_d > 0.0))
        throw Error("bootstrap_refine: lengths must be positive");

    const BootstrapTargets tg;
    std::vector<BootstrapState> states;
    states.reserve(static_cast<std::size_t>(iters) + 1);

    BootstrapState st = init;
    st.iteration = 0;
    fill_deltas(st, tg);
    st.s_k = predicted_s_k(st, sk_cfg);
    states.push_back(st);

    for (int it = 1; it <= iters; ++it) {
        auto refine = [&](double current, double target) {
            const double gap = closure_gap(current, target, 1.0, noise, rng);
            const double cut = current - relaxation * gap +
                               noise.cut_sigma_rel * target * rng.next_normal_truncated(6.0);
            if (!(cut > 0.0))
                throw NonPositiveResult("bootstrap_refine: cut produced a non-positive length");
            return cut;
        };
        st.len_b = refine(st.len_b, tg.b);
        st.len_c = refine(st.len_c, tg.c);
        st.len_k = refine(st.len_k, tg.k);
        st.len_d = refine(st.len_d, tg.d);
        st.iteration = it;
        fill_deltas(st, tg);
        st.s_k = predicted_s_k(st, sk_cfg);
        states.push_back(st);
    }
    return states;
}

}  // namespace fpm
