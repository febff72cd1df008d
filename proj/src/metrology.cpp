#include "fpm/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fpm/errors.hpp"

namespace fpm {

namespace {

std::vector<double> sorted_unique(std::vector<double> v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    return out;
}

// Grid detection: every (xs[i], ys[j]) cell filled exactly once.
bool detect_grid(const std::vector<Vec3>& pts, std::vector<double>& xs, std::vector<double>& ys,
                 std::vector<std::vector<double>>& z) {
    double span = 0.0;
    for (const Vec3& p : pts) span = std::max({span, std::abs(p.x()), std::abs(p.y())});
    const double tol = std::max(span, 1.0) * 1e-9;

    std::vector<double> all_x, all_y;
    all_x.reserve(pts.size());
    all_y.reserve(pts.size());
    for (const Vec3& p : pts) {
        all_x.push_back(p.x());
        all_y.push_back(p.y());
    }
    xs = sorted_unique(all_x, tol);
    ys = sorted_unique(all_y, tol);
    if (xs.size() < 2 || ys.size() < 2) return false;
    if (xs.size() * ys.size() != pts.size()) return false;

    auto index_of = [tol](const std::vector<double>& axis, double v) -> int {
        auto it = std::lower_bound(axis.begin(), axis.end(), v - tol);
        if (it == axis.end() || std::abs(*it - v) > tol) return -1;
        return static_cast<int>(it - axis.begin());
    };

    z.assign(ys.size(), std::vector<double>(xs.size(), std::numeric_limits<double>::quiet_NaN()));
    std::vector<std::vector<bool>> seen(ys.size(), std::vector<bool>(xs.size(), false));
    for (const Vec3& p : pts) {
        const int ix = index_of(xs, p.x());
        const int iy = index_of(ys, p.y());
        if (ix < 0 || iy < 0 || seen[iy][ix]) return false;
        seen[iy][ix] = true;
        z[iy][ix] = p.z();
    }
    return true;
}

// --- minimal Bowyer-Watson triangulation for the irregular-scan path ---

struct Tri {
    int a, b, c;
};

double circumradius_test(const Vec3& pa, const Vec3& pb, const Vec3& pc, double px, double py) {
    // > 0 when (px, py) is inside the circumcircle of the CCW triangle
    const double ax = pa.x() - px, ay = pa.y() - py;
    const double bx = pb.x() - px, by = pb.y() - py;
    const double cx = pc.x() - px, cy = pc.y() - py;
    return (ax * ax + ay * ay) * (bx * cy - cx * by) -
           (bx * bx + by * by) * (ax * cy - cx * ay) +
           (cx * cx + cy * cy) * (ax * by - bx * ay);
}

double orient2d(const Vec3& a, const Vec3& b, const Vec3& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

std::vector<Tri> delaunay(const std::vector<Vec3>& pts) {
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const Vec3& p : pts) {
        lo_x = std::min(lo_x, p.x());
        hi_x = std::max(hi_x, p.x());
        lo_y = std::min(lo_y, p.y());
        hi_y = std::max(hi_y, p.y());
    }
    const double dx = hi_x - lo_x, dy = hi_y - lo_y;
    const double dmax = std::max({dx, dy, 1e-12});
    const double mx = (lo_x + hi_x) / 2.0, my = (lo_y + hi_y) / 2.0;

    std::vector<Vec3> v = pts;
    const int n = static_cast<int>(pts.size());
    v.emplace_back(mx - 30.0 * dmax, my - dmax, 0.0);
    v.emplace_back(mx, my + 30.0 * dmax, 0.0);
    v.emplace_back(mx + 30.0 * dmax, my - dmax, 0.0);

    std::vector<Tri> tris{{n, n + 1, n + 2}};
    for (int i = 0; i < n; ++i) {
        std::vector<Tri> keep;
        std::map<std::pair<int, int>, int> edge_count;
        for (const Tri& t : tris) {
            Vec3 pa = v[t.a], pb = v[t.b], pc = v[t.c];
            if (orient2d(pa, pb, pc) < 0.0) std::swap(pb, pc);
            if (circumradius_test(pa, pb, pc, v[i].x(), v[i].y()) > 0.0) {
                auto add_edge = [&](int p, int q) {
                    if (p > q) std::swap(p, q);
                    edge_count[{p, q}] += 1;
                };
                add_edge(t.a, t.b);
                add_edge(t.b, t.c);
                add_edge(t.c, t.a);
            } else {
                keep.push_back(t);
            }
        }
        for (const auto& [edge, count] : edge_count)
            if (count == 1) keep.push_back({edge.first, edge.second, i});
        tris = std::move(keep);
    }

    std::vector<Tri> out;
    for (const Tri& t : tris)
        if (t.a < n && t.b < n && t.c < n) out.push_back(t);
    return out;
}

double interp_triangulated(const std::vector<Vec3>& pts, const std::vector<Tri>& tris,
                           double x, double y) {
    // barycentric evaluation in the triangle containing the query; outside
    // the hull, the least-negative-weight triangle extrapolates its plane
    const Vec3 q(x, y, 0.0);
    double best_score = -std::numeric_limits<double>::infinity();
    double best_z = 0.0;
    for (const Tri& t : tris) {
        const Vec3 &pa = pts[t.a], &pb = pts[t.b], &pc = pts[t.c];
        const double area = orient2d(pa, pb, pc);
        if (std::abs(area) < 1e-12) continue;
        const double wa = orient2d(pb, pc, q) / area;
        const double wb = orient2d(pc, pa, q) / area;
        const double wc = orient2d(pa, pb, q) / area;
        const double score = std::min({wa, wb, wc});
        if (score >= -1e-12)
            return wa * pa.z() + wb * pb.z() + wc * pc.z();
        if (score > best_score) {
            best_score = score;
            best_z = wa * pa.z() + wb * pb.z() + wc * pc.z();
        }
    }
    return best_z;
}

void functional_plane_of_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                              const std::vector<std::vector<double>>& z,
                              double& a, double& b, double& c) {
    std::vector<Vec3> pts;
    pts.reserve(xs.size() * ys.size());
    for (std::size_t iy = 0; iy < ys.size(); ++iy)
        for (std::size_t ix = 0; ix < xs.size(); ++ix)
            pts.emplace_back(xs[ix], ys[iy], z[iy][ix]);
    const PlaneFit fit = fit_plane(pts, PlaneFitMode::Functional);
    a = fit.a;
    b = fit.b;
    c = fit.c;
}

}  // namespace

double flatness_rmse(const SurfaceScan& scan) {
    if (scan.points.size() < 4)
        throw DegenerateInput("flatness_rmse: need at least 4 points");
    return fit_plane(scan.points, PlaneFitMode::Orthogonal).rmse;
}

ErrorField build_error_field(const SurfaceScan& calibration_scan) {
    const auto& pts = calibration_scan.points;
    if (pts.size() < 4)
        throw DegenerateInput("build_error_field: need at least 4 points");

    ErrorField field;
    std::vector<std::vector<double>> z;
    if (!detect_grid(pts, field.xs, field.ys, z)) {
        // irregular scan: resample z onto a regular grid spanning the data
        const auto tris = delaunay(pts);
        double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
        for (const Vec3& p : pts) {
            lo_x = std::min(lo_x, p.x());
            hi_x = std::max(hi_x, p.x());
            lo_y = std::min(lo_y, p.y());
            hi_y = std::max(hi_y, p.y());
        }
        const int n_side = std::max(2, static_cast<int>(std::ceil(std::sqrt(pts.size()))));
        field.xs.resize(n_side);
        field.ys.resize(n_side);
        for (int i = 0; i < n_side; ++i) {
            field.xs[i] = lo_x + (hi_x - lo_x) * i / (n_side - 1);
            field.ys[i] = lo_y + (hi_y - lo_y) * i / (n_side - 1);
        }
        z.assign(field.ys.size(), std::vector<double>(field.xs.size(), 0.0));
        for (std::size_t iy = 0; iy < field.ys.size(); ++iy)
            for (std::size_t ix = 0; ix < field.xs.size(); ++ix)
                z[iy][ix] = interp_triangulated(pts, tris, field.xs[ix], field.ys[iy]);
    }

    functional_plane_of_grid(field.xs, field.ys, z, field.a, field.b, field.c);
    field.e.assign(field.ys.size(), std::vector<double>(field.xs.size(), 0.0));
    for (std::size_t iy = 0; iy < field.ys.size(); ++iy)
        for (std::size_t ix = 0; ix < field.xs.size(); ++ix)
            field.e[iy][ix] = z[iy][ix] - (field.a * field.xs[ix] + field.b * field.ys[iy] + field.c);
    return field;
}

double interpolate_error(const ErrorField& field, double x, double y, bool clip) {
    if (field.xs.size() < 2 || field.ys.size() < 2)
        throw DegenerateInput("interpolate_error: field grid is degenerate");

    const double x_lo = field.xs.front(), x_hi = field.xs.back();
    const double y_lo = field.ys.front(), y_hi = field.ys.back();
    if (x < x_lo || x > x_hi || y < y_lo || y > y_hi) {
        if (!clip)
            throw OutOfDomain("interpolate_error: query outside the calibrated domain");
        x = std::clamp(x, x_lo, x_hi);
        y = std::clamp(y, y_lo, y_hi);
    }

    auto cell = [](const std::vector<double>& axis, double v) {
        auto it = std::upper_bound(axis.begin(), axis.end(), v);
        std::size_t hi = static_cast<std::size_t>(it - axis.begin());
        hi = std::clamp<std::size_t>(hi, 1, axis.size() - 1);
        return hi - 1;
    };
    const std::size_t ix = cell(field.xs, x);
    const std::size_t iy = cell(field.ys, y);
    const double tx = (x - field.xs[ix]) / (field.xs[ix + 1] - field.xs[ix]);
    const double ty = (y - field.ys[iy]) / (field.ys[iy + 1] - field.ys[iy]);

    const double e00 = field.e[iy][ix], e10 = field.e[iy][ix + 1];
    const double e01 = field.e[iy + 1][ix], e11 = field.e[iy + 1][ix + 1];
    return (1.0 - ty) * ((1.0 - tx) * e00 + tx * e10) + ty * ((1.0 - tx) * e01 + tx * e11);
}

SurfaceScan compensate(const SurfaceScan& scan, const ErrorField& field, bool clip) {
    SurfaceScan out = scan;
    for (Vec3& p : out.points) p.z() -= interpolate_error(field, p.x(), p.y(), clip);
    return out;
}

double tilt_between_planes(const Vec3& n_i, const Vec3& n_g) {
    const double ni = n_i.norm(), ng = n_g.norm();
    if (ni == 0.0 || ng == 0.0)
        throw ZeroNormal("tilt_between_planes: zero normal");
    const double c = std::clamp(n_i.dot(n_g) / (ni * ng), -1.0, 1.0);
    return std::acos(c) * 180.0 / 3.141592653589793238462643383279;
}

double lateral_runout(double tilt_deg, double travel) {
    return travel * std::tan(tilt_deg * 3.141592653589793238462643383279 / 180.0);
}

RepeatabilityStats repeatability_stats(const std::vector<Vec3>& samples) {
    if (samples.size() < 2)
        throw InsufficientSamples("repeatability_stats: need at least 2 samples");
    RepeatabilityStats st;
    st.count = static_cast<int>(samples.size());
    for (const Vec3& p : samples) st.mean += p;
    st.mean /= static_cast<double>(st.count);
    Vec3 ss = Vec3::Zero();
    for (const Vec3& p : samples) {
        const Vec3 d = p - st.mean;
        ss += d.cwiseProduct(d);
    }
    st.stddev = (ss / (st.count - 1.0)).cwiseSqrt();
    return st;
}

}  // namespace fpm
