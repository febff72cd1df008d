#include "fpm/design.hpp"

#include <cmath>
#include <limits>

#include "fpm/errors.hpp"

namespace fpm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_design(const DesignParams& p) {
    if (!(p.l_c > 0.0))
        throw InvalidDesign("design: L_c must be positive");
    if (!(p.h > 0.0 && p.h < p.l_c / 2.0))
        throw InvalidDesign("design: H must satisfy 0 < H < L_c/2");
    if (!(p.r > 0.0))
        throw InvalidDesign("design: R must be positive");
    if (!(p.gamma > 0.0 && p.gamma < kTwoPi))
        throw InvalidDesign("design: gamma must lie in (0, 2*pi)");
}

}  // namespace

LinkSet LinkSet::from_types(double a, double b, double c, double d) {
    LinkSet s;
    s.a = a;
    s.b = b;
    s.c = c;
    s.d = d;
    s.per_link = {a, a, b, b, b, b, b, b, c, c, c, d, d};
    return s;
}

std::array<double, 4> LinkSet::type_means() const {
    const auto& p = per_link;
    return {(p[0] + p[1]) / 2.0,
            (p[2] + p[3] + p[4] + p[5] + p[6] + p[7]) / 6.0,
            (p[8] + p[9] + p[10]) / 3.0,
            (p[11] + p[12]) / 2.0};
}

double LinkSet::characteristic_length() const {
    return (c * c - b * b) / (2.0 * a);
}

LinkSet links_from_design(const DesignParams& p) {
    check_design(p);
    const double a = (p.l_c - 2.0 * p.h) / 2.0;
    const double b = std::hypot(p.h, p.r);
    const double c = std::hypot(p.l_c - p.h, p.r);
    const double d = std::hypot(p.r + p.r * std::cos(p.gamma / 2.0),
                                p.r * std::sin(p.gamma / 2.0));
    return LinkSet::from_types(a, b, c, d);
}

DesignParams design_from_links(const LinkSet& links) {
    const ValidityReport report = validate_links(links);
    if (!report.valid)
        throw InvalidLinks("design_from_links: link set fails validity checks");

    DesignParams p;
    p.l_c = links.characteristic_length();
    p.h = (p.l_c - 2.0 * links.a) / 2.0;
    p.r = std::sqrt(links.b * links.b - p.h * p.h);
    p.gamma = 4.0 * std::acos(links.d / (2.0 * p.r));
    return p;
}

ValidityReport validate_links(const LinkSet& links) {
    ValidityReport rep;
    const double a = links.a, b = links.b, c = links.c, d = links.d;

    // boundaries are singular configurations; margins within rounding of
    // zero count as outside
    rep.margins[0] = c * c - (4.0 * a * a + b * b);
    rep.obtuse_check = rep.margins[0] > 1e-12 * c * c;

    rep.margins[1] = (2.0 * a + b) - c;
    rep.triangle_check = rep.margins[1] > 1e-12 * (2.0 * a + b);

    rep.margins[2] = d;
    rep.margins[3] = std::numeric_limits<double>::quiet_NaN();
    rep.apex_check = false;
    if (rep.obtuse_check && rep.triangle_check && d > 0.0) {
        // with the triangle checks holding, H < B and the bipyramid radius exists
        const double l_c = links.characteristic_length();
        const double h = (l_c - 2.0 * a) / 2.0;
        const double r2 = b * b - h * h;
        if (r2 > 0.0) {
            const double r = std::sqrt(r2);
            rep.margins[3] = 2.0 * r - d;
            // gamma = 4*acos(D / 2R) lies in (0, 2*pi) iff 0 < D < 2R
            rep.apex_check = rep.margins[3] > 1e-12 * 2.0 * r;
        }
    }

    rep.valid = rep.obtuse_check && rep.triangle_check && rep.apex_check;
    return rep;
}

LinkSet perturb_links(const LinkSet& links, double sigma, RandomStream& rng) {
    if (sigma < 0.0)
        throw InvalidLinks("perturb_links: sigma must be non-negative");
    LinkSet out = links;
    for (std::size_t j = 0; j < LinkSet::kCount; ++j) {
        const double noisy = links.per_link[j] + sigma * rng.next_normal_truncated(6.0);
        if (noisy <= 0.0)
            throw NonPositiveResult("perturb_links: perturbed length is non-positive");
        out.per_link[j] = noisy;
    }
    return out;
}

double link_rmse(const LinkSet& nominal, const LinkSet& instance) {
    double ss = 0.0;
    for (std::size_t j = 0; j < LinkSet::kCount; ++j) {
        const double d = instance.per_link[j] - nominal.per_link[j];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(LinkSet::kCount));
}

}  // namespace fpm
