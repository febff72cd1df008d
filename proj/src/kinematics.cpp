#include "fpm/kinematics.hpp"

#include <cmath>

#include "fpm/errors.hpp"

namespace fpm {

namespace {

double checked_acos(double x, const char* where) {
    if (x > 1.0) {
        if (x < 1.0 + 1e-12) return 0.0;
        throw OutOfWorkspace(where);
    }
    if (x < -1.0) {
        if (x > -1.0 - 1e-12) return 3.141592653589793238462643383279;
        throw OutOfWorkspace(where);
    }
    return std::acos(x);
}

double checked_asin(double x, const char* where) {
    if (x > 1.0) {
        if (x < 1.0 + 1e-12) return 1.5707963267948966;
        throw OutOfWorkspace(where);
    }
    if (x < -1.0) {
        if (x > -1.0 - 1e-12) return -1.5707963267948966;
        throw OutOfWorkspace(where);
    }
    return std::asin(x);
}

struct Triangle {
    double chi;  // angle at B between B->O and B->node
    double z;    // node height above B along the virtual-link axis
    double rho;  // node radius from the virtual-link axis
};

Triangle solve_triangle(double l2, double b_link, double c_link, const char* where) {
    const double cos_chi = (l2 * l2 + b_link * b_link - c_link * c_link) / (2.0 * l2 * b_link);
    const double chi = checked_acos(cos_chi, where);
    return {chi, -b_link * std::cos(chi), b_link * std::sin(chi)};
}

}  // namespace

std::pair<Vec3, KinematicTrace> forward(const LinkSet& links, const ControlInput& input) {
    constexpr double kPi = 3.141592653589793238462643383279;
    const auto& L = links.per_link;
    const double a0 = L[LinkSet::kA0], a1 = L[LinkSet::kA1];

    KinematicTrace trace;

    // Step 1: virtual link O->B and the de-spun frame O2.
    const double l2 = std::sqrt(a0 * a0 + a1 * a1 -
                                2.0 * a0 * a1 * std::cos(kPi - input.theta));
    trace.l2 = l2;
    const double theta2 = checked_asin(a1 * std::sin(kPi - input.theta) / l2, "forward: theta2");
    const Mat3 tilt = rotation_z(input.phi) * rotation_y(theta2);
    const Mat3 r2 = tilt * rotation_z(-input.phi);
    const Vec3 b_point = tilt * Vec3(0.0, 0.0, l2);
    trace.b_point = b_point;

    trace.frames[0] = FrameTransform{};
    trace.frames[1] = FrameTransform{Mat3::Identity(), Vec3(0.0, 0.0, a0)};
    trace.frames[2] = FrameTransform{r2, b_point};

    // Step 2: nodes C, A, E in frame O2 from the three virtual-link triangles.
    const Triangle tc = solve_triangle(l2, L[LinkSet::kB0], L[LinkSet::kC0], "forward: triangle OBC");
    const Triangle ta = solve_triangle(l2, L[LinkSet::kB1], L[LinkSet::kC1], "forward: triangle OBA");
    const Triangle te = solve_triangle(l2, L[LinkSet::kB2], L[LinkSet::kC2], "forward: triangle OBE");

    // Projected chords between the node radii. The D links are parallel to the
    // O2 xy-plane only for exact C links; the height mismatch shortens the
    // projected chord. Heights enter through the C*cos(chi) form.
    const double dz_ca = L[LinkSet::kC1] * std::cos(ta.chi) - L[LinkSet::kC0] * std::cos(tc.chi);
    const double dz_ea = L[LinkSet::kC1] * std::cos(ta.chi) - L[LinkSet::kC2] * std::cos(te.chi);
    const double d_ca = L[LinkSet::kD1];  // chord C-A is the AC link
    const double d_ea = L[LinkSet::kD0];  // chord E-A is the AE link
    const double proj_ca = d_ca * std::cos(std::atan(dz_ca / d_ca));
    const double proj_ea = d_ea * std::cos(std::atan(dz_ea / d_ea));

    const double eta_c = checked_acos(
        (tc.rho * tc.rho + ta.rho * ta.rho - proj_ca * proj_ca) / (2.0 * tc.rho * ta.rho),
        "forward: azimuth C-A");
    const double eta_e = checked_acos(
        (te.rho * te.rho + ta.rho * ta.rho - proj_ea * proj_ea) / (2.0 * te.rho * ta.rho),
        "forward: azimuth E-A");

    // Node A sits at azimuth pi in O2; C and E flank it on opposite sides.
    const double az_a = kPi;
    const double az_c = kPi - eta_c;
    const double az_e = kPi + eta_e;

    auto place = [&](const Triangle& t, double az, std::size_t frame_idx) {
        const Vec3 local(t.rho * std::cos(az), t.rho * std::sin(az), t.z);
        const Vec3 global = b_point + r2 * local;
        const Mat3 orient = r2 * rotation_z(az) * rotation_y(kPi - t.chi);
        trace.frames[frame_idx] = FrameTransform{orient, global};
        return global;
    };
    const Vec3 node_c = place(tc, az_c, 3);
    const Vec3 node_a = place(ta, az_a, 4);
    const Vec3 node_e = place(te, az_e, 5);

    // Step 3: endpoint from the three spheres about C, A, E; the endpoint is
    // the larger-z root (the mirror root is the control node B).
    std::pair<Vec3, Vec3> roots;
    try {
        roots = three_sphere_intersection(node_c, L[LinkSet::kB3],
                                          node_a, L[LinkSet::kB4],
                                          node_e, L[LinkSet::kB5]);
    } catch (const DegenerateCenters&) {
        throw DegenerateFrame("forward: sphere centers project to a line");
    } catch (const NoIntersection&) {
        throw OutOfWorkspace("forward: endpoint spheres do not intersect");
    }
    trace.endpoint = roots.second;
    return {trace.endpoint, trace};
}

Vec3 ideal_endpoint(double l_c, const ControlInput& input) {
    const double r = l_c * std::tan(input.theta / 2.0);
    return {r * std::cos(input.phi), r * std::sin(input.phi), l_c};
}

JointAngles inverse(const LinkSet& links, double target_x, double target_y) {
    IkTrace trace;
    return inverse(links, target_x, target_y, trace);
}

JointAngles inverse(const LinkSet& links, double target_x, double target_y, IkTrace& trace) {
    const double a = links.a, b = links.b;
    const double l_c = links.characteristic_length();

    const Vec3 target(target_x, target_y, l_c);
    const double od = target.norm();
    const double az = std::atan2(target_x, l_c);
    const double el = std::atan2(target_y, std::hypot(target_x, l_c));
    const double theta = std::atan2(std::hypot(target_x, target_y), l_c);
    trace.theta = theta;

    const double ob = 2.0 * a * std::cos(theta);
    trace.ob = ob;
    const Vec3 b_point(ob * std::cos(el) * std::sin(az),
                       ob * std::sin(el),
                       ob * std::cos(el) * std::cos(az));
    trace.b_point = b_point;

    const double alpha = std::atan2(b_point.x(), b_point.z() - a);

    // Circle of node A about B, in the plane normal to the rotated x-axis;
    // cut by the perpendicular bisector plane of B-D through G.
    const Vec3 n_b = rotation_y(alpha) * Vec3::UnitX();
    const Vec3 n_g = target / od;
    const double lambda = (ob + od) / (2.0 * od);
    const Vec3 g_point = lambda * target;

    std::pair<Vec3, Vec3> pts;
    try {
        pts = circle_plane_intersection(b_point, b, n_b, n_g, g_point);
    } catch (const ParallelPlanes&) {
        throw DegenerateTarget("inverse: bisector plane is parallel to the joint circle");
    } catch (const NoIntersection&) {
        throw OutOfWorkspace("inverse: target outside the joint-2 reach");
    }
    const Vec3 a_point = pts.second;  // larger root; tangency doubles it
    trace.a_point = a_point;

    trace.beta_raw = std::atan2(a_point.y(), a_point.z());
    // home configuration: A sits at (0, -R, L_c - H)
    const double h = (l_c - 2.0 * a) / 2.0;
    const double r_bi = std::sqrt(b * b - h * h);
    trace.beta_home = std::atan2(-r_bi, l_c - h);

    return {alpha, trace.beta_raw - trace.beta_home};
}

InversionReport inversion_invariants(const LinkSet& links, const ControlInput& input) {
    auto [endpoint, trace] = forward(links, input);

    InversionReport rep;
    const Vec3 b_dir = trace.b_point.normalized();
    rep.collinearity_residual = (endpoint - endpoint.dot(b_dir) * b_dir).norm();
    rep.k_squared = trace.b_point.norm() * endpoint.norm();
    rep.k_squared_expected = links.c * links.c - links.b * links.b;
    return rep;
}

}  // namespace fpm
