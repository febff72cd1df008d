#include "fpm/geom.hpp"

#include <algorithm>
#include <cmath>

namespace fpm {

std::pair<Vec3, Vec3> three_sphere_intersection(const Vec3& c3, double r3,
                                                const Vec3& c4, double r4,
                                                const Vec3& c5, double r5) {
    const double x3 = c3.x(), y3 = c3.y(), z3 = c3.z();
    const double x4 = c4.x(), y4 = c4.y(), z4 = c4.z();
    const double x5 = c5.x(), y5 = c5.y(), z5 = c5.z();
    const double w3 = c3.squaredNorm() - r3 * r3;
    const double w4 = c4.squaredNorm() - r4 * r4;
    const double w5 = c5.squaredNorm() - r5 * r5;

    const double d = 2.0 * (y3 * (x4 - x5) + y4 * (x5 - x3) + y5 * (x3 - x4));
    const double scale = std::max({c3.norm(), c4.norm(), c5.norm(), r3, r4, r5, 1.0});
    if (std::abs(d) < 1e-12 * scale * scale)
        throw DegenerateCenters("three_sphere_intersection: projected centers are collinear");

    const double a1 = -(2.0 / d) * (z3 * (x4 - x5) + z4 * (x5 - x3) + z5 * (x3 - x4));
    const double b1 = (1.0 / d) * (x3 * (w5 - w4) + x4 * (w3 - w5) + x5 * (w4 - w3));
    const double a2 = (2.0 / d) * (z3 * (y4 - y5) + z4 * (y5 - y3) + z5 * (y3 - y4));
    const double b2 = -(1.0 / d) * (y3 * (w5 - w4) + y4 * (w3 - w5) + y5 * (w4 - w3));

    const double qa = a1 * a1 + a2 * a2 + 1.0;
    const double qb = 2.0 * a1 * (b1 - y3) - 2.0 * z3 + 2.0 * a2 * (b2 - x3);
    const double qc = z3 * z3 + (b1 - y3) * (b1 - y3) + (b2 - x3) * (b2 - x3) - r3 * r3;

    double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0 && std::abs(disc) < 1e-12 * qb * qb) disc = 0.0;
    if (disc < 0.0)
        throw NoIntersection("three_sphere_intersection: spheres do not meet");

    const double s = std::sqrt(disc);
    const double z_lo = (-qb - s) / (2.0 * qa);
    const double z_hi = (-qb + s) / (2.0 * qa);
    auto point = [&](double z) { return Vec3(a2 * z + b2, a1 * z + b1, z); };
    return {point(z_lo), point(z_hi)};
}

std::pair<Vec3, Vec3> circle_plane_intersection(const Vec3& circle_center,
                                                double circle_radius,
                                                const Vec3& circle_normal,
                                                const Vec3& plane_normal,
                                                const Vec3& plane_point) {
    if (circle_normal.norm() == 0.0 || plane_normal.norm() == 0.0)
        throw ZeroNormal("circle_plane_intersection: zero normal");

    const Vec3 nb = circle_normal.normalized();
    const Vec3 ng = plane_normal.normalized();
    const double db = nb.dot(circle_center);
    const double dg = ng.dot(plane_point);

    const Vec3 dir = nb.cross(ng);
    const double nd2 = dir.squaredNorm();
    // normals are unit here, so ||dir|| = sin(angle between planes)
    if (std::sqrt(nd2) < 1e-12)
        throw ParallelPlanes("circle_plane_intersection: planes are parallel");

    const Vec3 p0 = (db * ng.cross(dir) + dg * dir.cross(nb)) / nd2;
    const Vec3 p0p = p0 - circle_center;

    const double qa = nd2;
    const double qb = 2.0 * p0p.dot(dir);
    const double qc = p0p.squaredNorm() - circle_radius * circle_radius;

    double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0 && std::abs(disc) < 1e-12 * qb * qb) disc = 0.0;
    if (disc < 0.0)
        throw NoIntersection("circle_plane_intersection: no real intersection");

    const double s = std::sqrt(disc);
    const double t1 = (-qb - s) / (2.0 * qa);
    const double t2 = (-qb + s) / (2.0 * qa);
    return {p0 + t1 * dir, p0 + t2 * dir};
}

}  // namespace fpm
