#pragma once

// Linear change of coordinates that turns a correlated pair of increments
// into an uncorrelated, unit-variance pair.  The lower-triangular transform
//     M = [ 1/s1                    0                ]
//         [ -rho/(s1 sqrt(1-rho^2)) 1/(s2 sqrt(1-rho^2)) ]
// satisfies M Cov M^T = I, and the images of the axis directions span a
// cone of angle arccos(-rho): the quadrant-exit problem becomes a cone-exit
// problem with opening alpha and tail exponent 1/p, p = 2 alpha / pi.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "moments.hpp"

namespace quadwalk {

using Mat2 = std::array<std::array<double, 2>, 2>;

struct DecorrelationResult {
    Mat2 matrix{};       // the transform M
    double cone_angle = 0.0;  // angle between M e1 and M e2, in (0, pi)
    double p = 0.0;           // 2 * cone_angle / pi
    double rho = 0.0;
    double identity_error = 0.0;  // max abs deviation of M Cov M^T from I
    double cosine_error = 0.0;    // |cos(cone_angle) - (-rho)|
};

inline DecorrelationResult decorrelate(const Mat2& cov) {
    const double c11 = cov[0][0], c22 = cov[1][1];
    const double c12 = cov[0][1], c21 = cov[1][0];
    const double scale = std::max({std::abs(c11), std::abs(c22), std::abs(c12)});
    if (std::abs(c12 - c21) > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("decorrelate: covariance must be symmetric");
    if (!(c11 > 0.0) || !(c22 > 0.0))
        throw std::invalid_argument("decorrelate: variances must be positive");
    const double s1 = std::sqrt(c11), s2 = std::sqrt(c22);
    const double rho = c12 / (s1 * s2);
    if (!(std::abs(rho) < 1.0))
        throw std::invalid_argument("decorrelate: |rho| must be < 1 (singular covariance)");
    const double q = std::sqrt(1.0 - rho * rho);

    DecorrelationResult out;
    out.rho = rho;
    out.matrix = {{{1.0 / s1, 0.0}, {-rho / (s1 * q), 1.0 / (s2 * q)}}};

    const auto& m = out.matrix;
    // Verify M Cov M^T = I numerically rather than by construction.
    double max_dev = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double mc_ij = 0.0;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) mc_ij += m[i][k] * cov[k][l] * m[j][l];
            max_dev = std::max(max_dev, std::abs(mc_ij - (i == j ? 1.0 : 0.0)));
        }
    out.identity_error = max_dev;

    // Cone angle from the actual image vectors M e1, M e2 (the columns).
    const double a1 = m[0][0], a2 = m[1][0];  // M e1
    const double b1 = m[0][1], b2 = m[1][1];  // M e2
    const double dot = a1 * b1 + a2 * b2;
    const double na = std::sqrt(a1 * a1 + a2 * a2), nb = std::sqrt(b1 * b1 + b2 * b2);
    const double cosine = std::clamp(dot / (na * nb), -1.0, 1.0);
    out.cone_angle = std::acos(cosine);
    out.p = 2.0 * out.cone_angle / std::numbers::pi;
    out.cosine_error = std::abs(cosine - (-rho));
    return out;
}

inline DecorrelationResult decorrelate(const MomentReport& report) {
    return decorrelate(report.covariance);
}

}  // namespace quadwalk
