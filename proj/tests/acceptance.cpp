// Acceptance suite: one line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <vector>

#include "fpm/bootstrap.hpp"
#include "fpm/fit.hpp"
#include "fpm/metrology.hpp"
#include "fpm/sensitivity.hpp"
#include "oracles.hpp"

using namespace fpm;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

int g_failures = 0;

void report(int id, bool pass, const char* name, const std::string& detail) {
    std::printf("%s  %2d  %-34s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, auto... v) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, v...);
    return buf;
}

// 1. optimal-design sensitivity at the default configuration
void criterion_1() {
    const LinkSet links = links_from_design({1.0, 0.5, 0.25, kPi / 2.0});
    SensitivityConfig cfg;
    cfg.seed = 1;  // sigma 0.05% L_c, 50 points, 50 instances, W_rel 0.4 are defaults
    const auto start = std::chrono::steady_clock::now();
    const SensitivityResult res = kinematic_sensitivity(links, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = res.s_k >= 0.057 && res.s_k <= 0.087 && secs < 30.0;
    report(1, pass, "optimal-design sensitivity",
           fmt("S_k = %.4f (band 0.057..0.087, reference 0.072), %.2f s", res.s_k, secs));
}

// 2. attenuation basin of the 20x20 landscape
void criterion_2() {
    SensitivityConfig cfg;
    cfg.seed = 7;
    cfg.n_instances = 50;

    // 20 nodes per axis with (0.25, 0.5) exactly on the grid
    std::vector<double> hs, rs;
    for (int i = 0; i < 20; ++i) hs.push_back(0.025 + 0.025 * i);  // 0.025 .. 0.5
    for (int i = 0; i < 20; ++i) rs.push_back(0.100 + 0.050 * i);  // 0.1 .. 1.05
    const auto rows = sweep_landscape(hs, rs, kPi / 2.0, cfg, 1);

    const std::size_t nr = rs.size();
    auto at = [&](std::size_t ih, std::size_t ir) -> const LandscapeRow& {
        return rows[ih * nr + ir];
    };

    // the node nearest (0.25, 0.5) is the exact node (index 9, 8)
    const std::size_t ih_star = 9, ir_star = 8;

    // grid minimum
    double best = 1e300;
    std::size_t best_ih = 0, best_ir = 0;
    for (std::size_t ih = 0; ih < hs.size(); ++ih)
        for (std::size_t ir = 0; ir < nr; ++ir)
            if (at(ih, ir).valid && at(ih, ir).s_k < best) {
                best = at(ih, ir).s_k;
                best_ih = ih;
                best_ir = ir;
            }

    // connected region with s_k < 0.1 grown from the optimum node
    std::set<std::pair<std::size_t, std::size_t>> region;
    if (at(ih_star, ir_star).valid && at(ih_star, ir_star).s_k < 0.1) {
        std::vector<std::pair<std::size_t, std::size_t>> stack{{ih_star, ir_star}};
        while (!stack.empty()) {
            const auto [ih, ir] = stack.back();
            stack.pop_back();
            if (!region.insert({ih, ir}).second) continue;
            const std::ptrdiff_t moves[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (const auto& m : moves) {
                const std::ptrdiff_t jh = static_cast<std::ptrdiff_t>(ih) + m[0];
                const std::ptrdiff_t jr = static_cast<std::ptrdiff_t>(ir) + m[1];
                if (jh < 0 || jr < 0 || jh >= static_cast<std::ptrdiff_t>(hs.size()) ||
                    jr >= static_cast<std::ptrdiff_t>(nr))
                    continue;
                const LandscapeRow& row = at(static_cast<std::size_t>(jh),
                                             static_cast<std::size_t>(jr));
                if (row.valid && row.s_k < 0.1)
                    stack.emplace_back(static_cast<std::size_t>(jh),
                                       static_cast<std::size_t>(jr));
            }
        }
    }

    const bool region_ok = region.size() >= 20;
    const bool argmin_ok = best_ih == ih_star && best_ir == ir_star;
    report(2, region_ok && argmin_ok, "attenuation basin",
           fmt("region |s_k<0.1| = %zu nodes around (0.25,0.5); grid min at (%.3f, %.3f), "
               "S_k = %.4f vs %.4f at (0.25, 0.5)",
               region.size(), hs[best_ih], rs[best_ir], best, at(ih_star, ir_star).s_k));
}

// 3. bootstrap trajectory endpoints
void criterion_3() {
    SensitivityConfig cfg;
    cfg.seed = 11;
    cfg.n_instances = 400;

    const SensitivityResult init =
        kinematic_sensitivity(LinkSet::from_types(1.0, 2.0, 3.0, 3.0), cfg);
    const bool init_ok = init.s_k >= 0.342 && init.s_k <= 0.442;

    const LinkSet targets = LinkSet::from_types(
        1.0, std::sqrt(5.0), std::sqrt(13.0), 2.0 * std::sqrt(2.0 + std::sqrt(2.0)));
    const SensitivityResult conv = kinematic_sensitivity(targets, cfg);
    const bool conv_ok = conv.s_k >= 0.063 && conv.s_k <= 0.083;

    BootstrapState start;  // integer initialization (1, 2, 3, 2, 3)
    SensitivityConfig sk_cfg;
    sk_cfg.seed = 11;
    sk_cfg.n_instances = 100;
    const auto states =
        bootstrap_refine(start, NoiseModel{0.0, 0.0, 0.0}, RandomStream(1), 1, sk_cfg);
    const BootstrapTargets tg;
    const bool exact_ok = std::abs(states[1].len_b - tg.b) < 1e-12 &&
                          std::abs(states[1].len_c - tg.c) < 1e-12 &&
                          std::abs(states[1].len_k - tg.k) < 1e-12 &&
                          std::abs(states[1].len_d - tg.d) < 1e-12;

    report(3, init_ok && conv_ok && exact_ok, "bootstrap trajectory",
           fmt("S_k init = %.4f (0.342..0.442), targets = %.4f (0.063..0.083), "
               "noiseless one-step convergence %s",
               init.s_k, conv.s_k, exact_ok ? "exact" : "FAILED"));
}

// 4. ideal planarity over a 30x30 workspace grid
void criterion_4() {
    const LinkSet links = links_from_design({4.0, 2.0, 1.0, kPi / 2.0});
    const double l_c = links.characteristic_length();
    std::vector<Vec3> cloud;
    double worst_z = 0.0;
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 30; ++j) {
            const double theta = 2.0 * std::atan(0.2 * (i + 0.5) / 30.0);
            const Vec3 p = forward(links, {theta, 2.0 * kPi * j / 30.0}).first;
            worst_z = std::max(worst_z, std::abs(p.z() - l_c));
            cloud.push_back(p);
        }
    const double rmse = fit_plane(cloud, PlaneFitMode::Orthogonal).rmse;
    report(4, worst_z < 1e-10 * l_c && rmse < 1e-10 * l_c, "ideal planarity",
           fmt("max |z - L_c| = %.2e, plane rmse = %.2e (tol %.1e)", worst_z, rmse, 1e-10 * l_c));
}

// 5. inversion identities and the unequal-link sphere case
void criterion_5() {
    const LinkSet links = links_from_design({4.0, 2.0, 1.0, kPi / 2.0});
    const double l_c = links.characteristic_length();
    double worst_col = 0.0, worst_k2 = 0.0;
    for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 25; ++j) {
            const InversionReport rep = inversion_invariants(
                links, {2.0 * std::atan(0.2) * (i + 0.5) / 25.0, 2.0 * kPi * j / 25.0});
            worst_col = std::max(worst_col, rep.collinearity_residual);
            worst_k2 = std::max(worst_k2, std::abs(rep.k_squared - rep.k_squared_expected));
        }

    LinkSet unequal = links;
    unequal.per_link[LinkSet::kA0] = 1.1 * unequal.per_link[LinkSet::kA1];
    std::vector<Vec3> cloud;
    for (int i = 1; i <= 12; ++i)
        for (int j = 0; j < 12; ++j)
            cloud.push_back(
                forward(unequal, {2.0 * std::atan(0.2) * i / 12.0, 2.0 * kPi * j / 12.0}).first);
    const double sphere_rmse = fit_sphere(cloud).rmse;

    const bool pass = worst_col < 1e-10 * l_c && worst_k2 < 1e-10 * l_c * l_c &&
                      sphere_rmse < 1e-9 * l_c;
    report(5, pass, "inversion identities",
           fmt("collinearity %.2e, |k^2 - (C^2-B^2)| %.2e, sphere rmse %.2e", worst_col,
               worst_k2, sphere_rmse));
}

// 6. IK -> FK round trip on the robotic geometry
void criterion_6() {
    const LinkSet robot = LinkSet::from_types(125.0, 224.06, 414.82, 329.10);
    const double l_c = robot.characteristic_length();
    RandomStream rng(5);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const double r = 0.2 * l_c * std::sqrt(rng.next_uniform());
        const double az = 2.0 * kPi * rng.next_uniform();
        const double x = r * std::cos(az), y = r * std::sin(az);
        IkTrace trace;
        inverse(robot, x, y, trace);
        const double theta_fk = 2.0 * std::acos(trace.b_point.z() / trace.b_point.norm());
        const double phi_fk = std::atan2(trace.b_point.y(), trace.b_point.x());
        const Vec3 p = forward(robot, {theta_fk, phi_fk}).first;
        worst = std::max(worst, std::hypot(p.x() - x, p.y() - y));
    }
    report(6, worst <= 1e-9 * l_c, "IK/FK round trip",
           fmt("max target error %.2e over 500 targets (tol %.2e)", worst, 1e-9 * l_c));
}

// 7. FK equivalence with the constraint-solver oracle, second order in sigma
void criterion_7() {
    const LinkSet links = links_from_design({1.0, 0.5, 0.25, kPi / 2.0});
    const double l_c = links.characteristic_length();
    RandomStream rng(17);
    double worst_full = 0.0, worst_half = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        std::array<double, 13> draw{};
        for (auto& z : draw) z = rng.next_normal_truncated();
        for (double scale : {1.0, 0.5}) {
            LinkSet perturbed = links;
            for (std::size_t j = 0; j < 13; ++j)
                perturbed.per_link[j] += scale * 5e-4 * l_c * draw[j];
            const ControlInput in{2.0 * std::atan(0.2 * ((inst % 5) + 1) / 5.0),
                                  2.0 * kPi * (inst % 7) / 7.0};
            const auto [endpoint, trace] = forward(perturbed, in);
            double resid = 0.0;
            const Vec3 truth = oracle::solve_mechanism(perturbed, in, trace, &resid);
            if (resid > 1e-11) {
                report(7, false, "FK oracle equivalence", "constraint solver did not converge");
                return;
            }
            double& worst = scale == 1.0 ? worst_full : worst_half;
            worst = std::max(worst, (endpoint - truth).norm());
        }
    }
    const double shrink = worst_full / worst_half;
    report(7, worst_full < 1e-5 * l_c && shrink >= 3.5, "FK oracle equivalence",
           fmt("max discrepancy %.2e at sigma, %.2e at sigma/2 (shrink %.1fx >= 3.5x)",
               worst_full, worst_half, shrink));
}

// 8. workspace-flatness trade-off is non-decreasing
void criterion_8() {
    const LinkSet links = links_from_design({1.0, 0.5, 0.25, kPi / 2.0});
    SensitivityConfig cfg;
    cfg.seed = 7;
    const auto curve = workspace_flatness_curve(links, cfg, {0.1, 0.2, 0.4});
    const bool pass = curve[0].flatness_rmse <= curve[1].flatness_rmse &&
                      curve[1].flatness_rmse <= curve[2].flatness_rmse;
    report(8, pass, "workspace-flatness trade-off",
           fmt("flatness %.3e <= %.3e <= %.3e", curve[0].flatness_rmse, curve[1].flatness_rmse,
               curve[2].flatness_rmse));
}

// 9. calibration: exact self-compensation and noise-floor recovery
void criterion_9() {
    auto planted = [](double x, double y) {
        return 0.05 * std::sin(x / 17.0) * std::cos(y / 23.0) + 1e-4 * x;
    };
    SurfaceScan calibration;
    for (int iy = 0; iy < 9; ++iy)
        for (int ix = 0; ix < 9; ++ix) {
            const double x = ix * 12.5, y = iy * 12.5;
            calibration.points.emplace_back(x, y, planted(x, y));
        }
    const ErrorField field = build_error_field(calibration);

    double worst_node = 0.0;
    const SurfaceScan self = compensate(calibration, field);
    for (const Vec3& p : self.points) {
        const double plane = field.a * p.x() + field.b * p.y() + field.c;
        worst_node = std::max(worst_node, std::abs(p.z() - plane));
    }

    const double sigma = 0.006;
    RandomStream rng(23);
    SurfaceScan noisy;
    for (int rep = 0; rep < 30; ++rep)
        for (int iy = 0; iy < 9; ++iy)
            for (int ix = 0; ix < 9; ++ix) {
                const double x = ix * 12.5, y = iy * 12.5;
                noisy.points.emplace_back(x, y, planted(x, y) + sigma * rng.next_normal());
            }
    const double recovered = flatness_rmse(compensate(noisy, field));

    const bool pass = worst_node < 1e-12 && std::abs(recovered - sigma) < 0.1 * sigma;
    report(9, pass, "calibration",
           fmt("self-compensation residual %.1e, post-compensation rmse %.4f vs sigma %.4f",
               worst_node, recovered, sigma));
}

// 10. parallelism: published tilt-to-runout consistency
void criterion_10() {
    const double runout_um = lateral_runout(0.021, 50.0) * 1000.0;
    report(10, std::abs(runout_um - 18.3) <= 0.05, "Z-parallelism runout",
           fmt("0.021 deg over 50 mm -> %.4f um (expect 18.3 to 3 s.f.)", runout_um));
}

// 11. hardware-scale results are declared out of reach, not asserted
void criterion_11() {
    report(11, true, "hardware metrics (declared)",
           "flatness/repeatability hardware numbers substituted by the property suites");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
