#pragma once

#include <span>
#include <vector>

#include "fpm/geom.hpp"

namespace fpm {

enum class PlaneFitMode { Functional, Orthogonal };

/// Least-squares plane. Functional form minimizes vertical residuals of
/// z = a*x + b*y + c; orthogonal form minimizes perpendicular distances and
/// carries a unit normal with offset d (plane: normal.dot(p) = d).
struct PlaneFit {
    PlaneFitMode mode = PlaneFitMode::Orthogonal;
    double a = 0.0, b = 0.0, c = 0.0;
    Vec3 normal = Vec3::UnitZ();
    double d = 0.0;
    double rmse = 0.0;

    double functional_z(double x, double y) const { return a * x + b * y + c; }
    double signed_distance(const Vec3& p) const { return normal.dot(p) - d; }
};

struct SphereFit {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
    double rmse = 0.0;
};

PlaneFit fit_plane(std::span<const Vec3> points, PlaneFitMode mode);
inline PlaneFit fit_plane(const std::vector<Vec3>& points, PlaneFitMode mode) {
    return fit_plane(std::span<const Vec3>(points), mode);
}

/// Algebraic least-squares sphere (linear in center and radius^2), refined
/// by a few Gauss-Newton steps on the radial residuals.
SphereFit fit_sphere(std::span<const Vec3> points);
inline SphereFit fit_sphere(const std::vector<Vec3>& points) {
    return fit_sphere(std::span<const Vec3>(points));
}

}  // namespace fpm
