#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <utility>

#include "fpm/errors.hpp"

namespace fpm {

template <class Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <class Scalar>
using Mat3T = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;

enum class Axis { X, Y, Z };

/// Elementary rotation about a coordinate axis, right-handed.
template <class Scalar>
Mat3T<Scalar> rotation(Axis axis, Scalar angle) {
    const Scalar c = std::cos(angle), s = std::sin(angle);
    Mat3T<Scalar> m;
    switch (axis) {
        case Axis::X:
            m << Scalar(1), Scalar(0), Scalar(0),
                 Scalar(0), c, -s,
                 Scalar(0), s, c;
            break;
        case Axis::Y:
            m << c, Scalar(0), s,
                 Scalar(0), Scalar(1), Scalar(0),
                 -s, Scalar(0), c;
            break;
        case Axis::Z:
            m << c, -s, Scalar(0),
                 s, c, Scalar(0),
                 Scalar(0), Scalar(0), Scalar(1);
            break;
    }
    return m;
}

inline Mat3 rotation_x(double a) { return rotation(Axis::X, a); }
inline Mat3 rotation_y(double a) { return rotation(Axis::Y, a); }
inline Mat3 rotation_z(double a) { return rotation(Axis::Z, a); }

/// Rigid transform: p_parent = rotation * p_child + translation.
struct FrameTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    FrameTransform then(const FrameTransform& child) const {
        return {rotation * child.rotation, rotation * child.translation + translation};
    }

    FrameTransform inverse() const {
        Mat3 rt = rotation.transpose();
        return {rt, -(rt * translation)};
    }
};

inline FrameTransform operator*(const FrameTransform& a, const FrameTransform& b) {
    return a.then(b);
}

/// Frame-chain element: rotate by R_x(phi)*R_y(theta)*R_z(psi), then advance
/// length L along the rotated z-axis.
inline FrameTransform homogeneous(double phi, double theta, double psi, double length) {
    Mat3 r = rotation_x(phi) * rotation_y(theta) * rotation_z(psi);
    return {r, r * Vec3(0, 0, length)};
}

/// Both solutions of the three-sphere intersection, ordered by ascending z.
///
/// Reduces the system to y = a1*z + b1, x = a2*z + b2 and a quadratic in z.
/// A discriminant within 1e-12*b^2 of zero is treated as tangency.
std::pair<Vec3, Vec3> three_sphere_intersection(const Vec3& c3, double r3,
                                                const Vec3& c4, double r4,
                                                const Vec3& c5, double r5);

/// Both intersection points of a circle with a plane, ordered by ascending
/// line parameter t. Tangency yields a doubled root.
std::pair<Vec3, Vec3> circle_plane_intersection(const Vec3& circle_center,
                                                double circle_radius,
                                                const Vec3& circle_normal,
                                                const Vec3& plane_normal,
                                                const Vec3& plane_point);

}  // namespace fpm
