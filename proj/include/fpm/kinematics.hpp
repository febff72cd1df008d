#pragma once

#include <array>
#include <utility>

#include "fpm/design.hpp"
#include "fpm/geom.hpp"

namespace fpm {

/// Control-link pose: theta is the deflection at joint F (angle between the
/// extended ground-link axis and the control link), phi the azimuth about the
/// ground-link axis.
struct ControlInput {
    double theta = 0.0;  // [0, pi)
    double phi = 0.0;    // [0, 2*pi)
};

/// Motor angles of the actuated FPM, zero at the home configuration.
struct JointAngles {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Frame chain and intermediate quantities of one forward solve.
/// Frames: O0 = base at O, O1 at F, O2 at B (z along the virtual link),
/// O3..O5 at nodes C, A, E. endpoint is the node-D position.
struct KinematicTrace {
    double l2 = 0.0;
    std::array<FrameTransform, 6> frames{};
    Vec3 endpoint = Vec3::Zero();
    Vec3 b_point = Vec3::Zero();
};

/// Inversion identities of the proof, evaluated at one pose.
struct InversionReport {
    double collinearity_residual = 0.0;  // distance of D from line O-B
    double k_squared = 0.0;              // |OB| * |OD|
    double k_squared_expected = 0.0;     // C^2 - B^2
};

/// Intermediate construction of one inverse solve.
struct IkTrace {
    double theta = 0.0;       // polar angle of the target ray
    double ob = 0.0;          // |OB|
    Vec3 b_point = Vec3::Zero();
    Vec3 a_point = Vec3::Zero();
    double beta_raw = 0.0;    // atan2(y_A, z_A) before home referencing
    double beta_home = 0.0;
};

/// Forward kinematics: control angles to endpoint, through the virtual-link
/// frame chain and the three-sphere intersection (larger-z root).
std::pair<Vec3, KinematicTrace> forward(const LinkSet& links, const ControlInput& input);

/// Closed-form endpoint of the ideal mechanism:
/// (r cos(phi), r sin(phi), L_c) with r = L_c * tan(theta / 2).
Vec3 ideal_endpoint(double l_c, const ControlInput& input);

/// Inverse kinematics of the actuated FPM for a planar target (x, y).
/// The characteristic length is derived from the link set.
JointAngles inverse(const LinkSet& links, double target_x, double target_y);
JointAngles inverse(const LinkSet& links, double target_x, double target_y, IkTrace& trace);

/// Collinearity of O, B, D and the inversion product |OB|*|OD| vs C^2 - B^2.
InversionReport inversion_invariants(const LinkSet& links, const ControlInput& input);

}  // namespace fpm
