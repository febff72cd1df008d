#pragma once

#include <array>
#include <cstddef>

#include "fpm/rng.hpp"

namespace fpm {

/// Bipyramid parameterization of an FPM design, all lengths in one unit.
struct DesignParams {
    double l_c = 0.0;   // characteristic (tip-to-base) length
    double r = 0.0;     // bipyramid radius
    double h = 0.0;     // bipyramid half-height offset
    double gamma = 0.0; // apex spread angle, radians
};

/// The four link-type lengths plus the 13 physical link lengths, ordered
/// A0,A1, B0..B5, C0..C2, D0,D1.
///
/// Physical identities: A = {OF, FB}; B = {BC, BA, BE, CD, AD, ED};
/// C = {OC, OA, OE}; D = {AE, AC}.
struct LinkSet {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    std::array<double, 13> per_link{};

    static constexpr std::size_t kCount = 13;
    static constexpr std::size_t kA0 = 0, kA1 = 1;
    static constexpr std::size_t kB0 = 2, kB1 = 3, kB2 = 4, kB3 = 5, kB4 = 6, kB5 = 7;
    static constexpr std::size_t kC0 = 8, kC1 = 9, kC2 = 10;
    static constexpr std::size_t kD0 = 11, kD1 = 12;  // D0 = AE, D1 = AC

    static LinkSet from_types(double a, double b, double c, double d);

    /// Mean length of each type over the current per_link values.
    std::array<double, 4> type_means() const;

    /// Characteristic length implied by the type lengths, (C^2 - B^2) / (2A).
    double characteristic_length() const;
};

struct ValidityReport {
    bool valid = false;
    bool obtuse_check = false;
    bool triangle_check = false;
    bool apex_check = false;
    // signed slack: {C^2 - 4A^2 - B^2, 2A + B - C, D, 2R - D}; positive = inside
    std::array<double, 4> margins{};
};

/// Design parameters -> link-type lengths (and nominal per-link lengths).
LinkSet links_from_design(const DesignParams& p);

/// Algebraic inversion of links_from_design.
DesignParams design_from_links(const LinkSet& links);

ValidityReport validate_links(const LinkSet& links);

/// Adds independent Gaussian noise (std sigma, truncated at +-6 sigma) to each
/// of the 13 physical links. Type lengths keep their nominal values.
LinkSet perturb_links(const LinkSet& links, double sigma, RandomStream& rng);

/// Root-mean-square per-link deviation: sqrt(sum_j delta_j^2 / 13).
double link_rmse(const LinkSet& nominal, const LinkSet& instance);

}  // namespace fpm
