#include "fpm/fit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>

namespace fpm {

namespace {

// Collinearity test on the centered scatter matrix: a plane needs two
// non-negligible principal directions.
bool points_collinear(std::span<const Vec3> points, const Vec3& centroid) {
    Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
    for (const Vec3& p : points) {
        Vec3 q = p - centroid;
        scatter += q * q.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(scatter);
    const auto& ev = es.eigenvalues();  // ascending
    return ev(1) <= 1e-20 * std::max(ev(2), 1e-300);
}

}  // namespace

PlaneFit fit_plane(std::span<const Vec3> points, PlaneFitMode mode) {
    if (points.size() < 3)
        throw DegenerateInput("fit_plane: need at least 3 points");

    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : points) centroid += p;
    centroid /= static_cast<double>(points.size());

    if (points_collinear(points, centroid))
        throw DegenerateInput("fit_plane: points are collinear");

    PlaneFit fit;
    fit.mode = mode;
    const auto n = static_cast<Eigen::Index>(points.size());

    if (mode == PlaneFitMode::Functional) {
        Eigen::MatrixXd design(n, 3);
        Eigen::VectorXd rhs(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            design(i, 0) = points[i].x();
            design(i, 1) = points[i].y();
            design(i, 2) = 1.0;
            rhs(i) = points[i].z();
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        // near-vertical data makes the xy design rank-deficient
        const auto& rdiag = qr.matrixR().diagonal();
        double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k) {
            rmax = std::max(rmax, std::abs(rdiag(k)));
            rmin = std::min(rmin, std::abs(rdiag(k)));
        }
        if (rmin <= 1e-12 * rmax)
            throw IllConditioned("fit_plane: functional fit on near-vertical data");
        Eigen::Vector3d coef = qr.solve(rhs);
        fit.a = coef(0);
        fit.b = coef(1);
        fit.c = coef(2);
        double ss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = rhs(i) - design.row(i).dot(coef);
            ss += r * r;
        }
        fit.rmse = std::sqrt(ss / static_cast<double>(n));
        // orthogonal-form fields for convenience
        Vec3 nrm(-fit.a, -fit.b, 1.0);
        nrm.normalize();
        fit.normal = nrm;
        fit.d = nrm.dot(Vec3(0.0, 0.0, fit.c));
        return fit;
    }

    Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
    for (const Vec3& p : points) {
        Vec3 q = p - centroid;
        scatter += q * q.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(scatter);
    Vec3 nrm = es.eigenvectors().col(0);  // smallest eigenvalue
    nrm.normalize();
    if (nrm.z() < 0.0) nrm = -nrm;
    fit.normal = nrm;
    fit.d = nrm.dot(centroid);
    double ss = 0.0;
    for (const Vec3& p : points) {
        const double r = nrm.dot(p) - fit.d;
        ss += r * r;
    }
    fit.rmse = std::sqrt(ss / static_cast<double>(points.size()));
    return fit;
}

SphereFit fit_sphere(std::span<const Vec3> points) {
    if (points.size() < 4)
        throw DegenerateInput("fit_sphere: need at least 4 points");

    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd design(n, 4);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec3& p = points[i];
        design(i, 0) = 2.0 * p.x();
        design(i, 1) = 2.0 * p.y();
        design(i, 2) = 2.0 * p.z();
        design(i, 3) = 1.0;
        rhs(i) = p.squaredNorm();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    const auto& rdiag = qr.matrixR().diagonal();
    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
        rmax = std::max(rmax, std::abs(rdiag(k)));
        rmin = std::min(rmin, std::abs(rdiag(k)));
    }
    if (rmin <= 1e-10 * rmax)
        throw DegenerateInput("fit_sphere: points are coplanar");

    Eigen::Vector4d sol = qr.solve(rhs);
    Vec3 center(sol(0), sol(1), sol(2));
    const double r2 = sol(3) + center.squaredNorm();
    if (r2 <= 0.0)
        throw DegenerateInput("fit_sphere: degenerate algebraic solution");
    double radius = std::sqrt(r2);

    // Gauss-Newton on the geometric (radial) residuals
    for (int iter = 0; iter < 8; ++iter) {
        Eigen::MatrixXd jac(n, 4);
        Eigen::VectorXd res(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            Vec3 q = points[i] - center;
            const double dist = q.norm();
            if (dist == 0.0) return {center, radius, 0.0};
            res(i) = dist - radius;
            jac.row(i) << -q.x() / dist, -q.y() / dist, -q.z() / dist, -1.0;
        }
        Eigen::Vector4d step = jac.colPivHouseholderQr().solve(-res);
        center += Vec3(step(0), step(1), step(2));
        radius += step(3);
        if (step.norm() < 1e-14 * std::max(radius, 1.0)) break;
    }

    double ss = 0.0;
    for (const Vec3& p : points) {
        const double r = (p - center).norm() - radius;
        ss += r * r;
    }
    return {center, radius, std::sqrt(ss / static_cast<double>(points.size()))};
}

}  // namespace fpm
