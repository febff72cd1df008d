#pragma once

#include <string>
#include <vector>

#include "fpm/fit.hpp"
#include "fpm/geom.hpp"

namespace fpm {

struct SurfaceScan {
    std::vector<Vec3> points;
    std::string frame = "fpm";
};

/// Plane-removed Z-residual field on a regular grid, with the removed plane
/// coefficients kept for reference. e[iy][ix] belongs to (xs[ix], ys[iy]).
struct ErrorField {
    double a = 0.0, b = 0.0, c = 0.0;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<std::vector<double>> e;
};

struct RepeatabilityStats {
    Vec3 mean = Vec3::Zero();
    Vec3 stddev = Vec3::Zero();
    int count = 0;
};

/// RMS perpendicular deviation from the orthogonal least-squares plane.
double flatness_rmse(const SurfaceScan& scan);

/// Functional-plane removal over a (possibly irregular) scan; irregular
/// scans are first resampled onto a regular grid by triangulated linear
/// interpolation.
ErrorField build_error_field(const SurfaceScan& calibration_scan);

/// Bilinear interpolation of the residual grid. Out-of-domain queries are
/// clamped to the boundary when clip is true, and rejected otherwise.
double interpolate_error(const ErrorField& field, double x, double y, bool clip = true);

/// Pointwise z-correction: z -> z - e_hat(x, y).
SurfaceScan compensate(const SurfaceScan& scan, const ErrorField& field, bool clip = true);

/// Angle between two plane normals, in degrees.
double tilt_between_planes(const Vec3& n_i, const Vec3& n_g);

/// Lateral runout of a tilted plane over a travel distance.
double lateral_runout(double tilt_deg, double travel);

RepeatabilityStats repeatability_stats(const std::vector<Vec3>& samples);

}  // namespace fpm
