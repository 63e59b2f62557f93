#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "quadwalk/decorrelate.hpp"
#include "quadwalk/moments.hpp"
#include "quadwalk/rng.hpp"

using namespace quadwalk;

TEST(Decorrelate, IdentityCovariance) {
    const DecorrelationResult r = decorrelate(Mat2{{{1.0, 0.0}, {0.0, 1.0}}});
    EXPECT_NEAR(r.rho, 0.0, 1e-15);
    EXPECT_NEAR(r.cone_angle, std::numbers::pi / 2.0, 1e-12);
    EXPECT_NEAR(r.p, 1.0, 1e-12);
    EXPECT_LE(r.identity_error, 1e-14);
}

TEST(Decorrelate, NegativeCorrelationNarrowsTheCone) {
    const DecorrelationResult r = decorrelate(Mat2{{{1.0, -0.5}, {-0.5, 1.0}}});
    EXPECT_NEAR(r.rho, -0.5, 1e-14);
    // arccos(1/2) = pi/3 and the tail exponent parameter is 2/3.
    EXPECT_NEAR(r.cone_angle, std::numbers::pi / 3.0, 1e-10);
    EXPECT_NEAR(r.p, 2.0 / 3.0, 1e-10);
}

TEST(Decorrelate, PositiveCorrelationWidensTheCone) {
    const DecorrelationResult r = decorrelate(Mat2{{{4.0, 1.0}, {1.0, 1.0}}});
    EXPECT_NEAR(r.rho, 0.5, 1e-14);
    EXPECT_NEAR(r.cone_angle, 2.0 * std::numbers::pi / 3.0, 1e-10);
    EXPECT_NEAR(r.p, 4.0 / 3.0, 1e-10);
}

TEST(Decorrelate, MomentReportOverload) {
    const DecorrelationResult r = decorrelate(moments(qt::lattice_rho(-0.5)));
    EXPECT_NEAR(r.rho, -0.5, 1e-12);
    EXPECT_NEAR(r.cone_angle, std::acos(0.5), 1e-10);
}

TEST(Decorrelate, RandomSpdInvariants) {
    // Whitening and cone-cosine identities across 1000 random SPD
    // covariance matrices, both to 1e-10.
    RngStream rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        // Build SPD as A A^T + eps I from a random 2x2.
        double a = rng.uniform_sym() * 3.0, b = rng.uniform_sym() * 3.0;
        double c = rng.uniform_sym() * 3.0, d = rng.uniform_sym() * 3.0;
        Mat2 cov{{{a * a + b * b + 0.05, a * c + b * d},
                  {a * c + b * d, c * c + d * d + 0.05}}};
        const double rho =
            cov[0][1] / std::sqrt(cov[0][0] * cov[1][1]);
        if (std::abs(rho) > 0.999) continue;  // skip nearly degenerate draws
        const DecorrelationResult r = decorrelate(cov);
        EXPECT_LE(r.identity_error, 1e-10) << trial;
        EXPECT_LE(r.cosine_error, 1e-10) << trial;
        EXPECT_NEAR(std::cos(r.cone_angle), -rho, 1e-9) << trial;
        EXPECT_NEAR(r.p, 2.0 * r.cone_angle / std::numbers::pi, 1e-12) << trial;
    }
}

TEST(Decorrelate, RejectsDegenerateOrInvalid) {
    EXPECT_THROW(decorrelate(Mat2{{{1.0, 0.5}, {0.4, 1.0}}}), std::invalid_argument);
    EXPECT_THROW(decorrelate(Mat2{{{1.0, 1.0}, {1.0, 1.0}}}), std::invalid_argument);
    EXPECT_THROW(decorrelate(Mat2{{{0.0, 0.0}, {0.0, 1.0}}}), std::invalid_argument);
    EXPECT_THROW(decorrelate(Mat2{{{1.0, -2.0}, {-2.0, 1.0}}}), std::invalid_argument);
}
