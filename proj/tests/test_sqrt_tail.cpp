#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "quadwalk/sqrt_tail.hpp"

using namespace quadwalk;

TEST(SqrtTail, SymmetricWalkApproachesTheConstant) {
    const SqrtTailTable t = doney_check(Marginal{qt::pm1()}, 1.0, {100, 1000, 10000});
    ASSERT_TRUE(t.exact);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_NEAR(t.kappa, std::sqrt(2.0 / std::numbers::pi), 1e-14);
    // h1 is the identity here, so the reference constant is kappa itself.
    EXPECT_NEAR(t.h1_value, 1.0, 1e-10);
    EXPECT_NEAR(t.reference, std::sqrt(2.0 / std::numbers::pi), 1e-9);

    // sqrt(n) P[tau > n] decreases toward the limit: the gap shrinks and
    // the final ratio is within one percent of 1.
    const double g0 = std::abs(t.rows[0].ratio - 1.0);
    const double g1 = std::abs(t.rows[1].ratio - 1.0);
    const double g2 = std::abs(t.rows[2].ratio - 1.0);
    EXPECT_GT(g0, g1);
    EXPECT_GT(g1, g2);
    EXPECT_LT(g2, 0.01);
    // Exact route: intervals collapse onto the survival value.
    EXPECT_EQ(t.rows[2].ci_low, t.rows[2].survival);
    EXPECT_EQ(t.rows[2].ci_high, t.rows[2].survival);
}

TEST(SqrtTail, TwoStepDownExactRoute) {
    const SqrtTailTable t = doney_check(Marginal{qt::skip21()}, 2.0, {500, 5000});
    ASSERT_TRUE(t.exact);
    EXPECT_NEAR(t.kappa, std::sqrt(2.0 / (std::numbers::pi * 2.0)), 1e-12);
    EXPECT_GE(t.h1_value, 2.0);  // h1(x) >= x always
    // The scaled tail should already be within ~5% of the constant at n=5000.
    EXPECT_NEAR(t.rows[1].ratio, 1.0, 0.05);
}

TEST(SqrtTail, MonteCarloRouteForGaussian) {
    const SqrtTailTable t =
        doney_check(Marginal{GaussianMarginal{0.0, 1.0}}, 1.0, {10, 100, 1000}, 40000, 5);
    EXPECT_FALSE(t.exact);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.paths, 40000);
    for (const auto& r : t.rows) {
        EXPECT_LT(r.ci_low, r.ci_high);
        EXPECT_GT(r.survival, 0.0);
    }
    // Even the noisy route should land in the right ballpark at n = 1000.
    EXPECT_NEAR(t.rows[2].ratio, 1.0, 0.25);
}

TEST(SqrtTail, NonIntegerStartFallsBackToMonteCarlo) {
    const SqrtTailTable t = doney_check(Marginal{qt::pm1()}, 1.5, {10, 50}, 20000, 3);
    EXPECT_FALSE(t.exact);
}

TEST(SqrtTail, RejectsDriftingLaw) {
    EXPECT_THROW(doney_check(Marginal{qt::up_drift()}, 1.0, {10}), std::invalid_argument);
    EXPECT_THROW(doney_check(Marginal{qt::pm1()}, 0.0, {10}), std::invalid_argument);
    EXPECT_THROW(doney_check(Marginal{qt::pm1()}, 1.0, {}), std::invalid_argument);
}
