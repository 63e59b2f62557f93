#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "helpers.hpp"
#include "quadwalk/harmonic_halfline.hpp"
#include "quadwalk/harmonic_quadrant.hpp"
#include "quadwalk/ladder.hpp"

using namespace quadwalk;

// ---------------------------------------------------------------------------
// Half-line h1, Monte Carlo route.

TEST(H1MonteCarlo, SymmetricWalkIsIdentity) {
    // The +-1 walk exits exactly at 0, so x minus the mean exit value is x
    // with zero variance — the estimator is exact path by path.
    const HarmonicEstimate e = h1_estimate(Marginal{qt::pm1()}, 1.0, 2000, 20000, 3);
    EXPECT_DOUBLE_EQ(e.value, 1.0);
    EXPECT_DOUBLE_EQ(e.stat_error, 0.0);
    ASSERT_TRUE(e.truncation_bias_bound.has_value());
    EXPECT_DOUBLE_EQ(*e.truncation_bias_bound, 0.0);
    EXPECT_EQ(e.method, HarmonicMethod::monte_carlo);
    EXPECT_FALSE(e.positivity_violation);
    EXPECT_GT(e.censored_fraction, 0.0);
    EXPECT_LT(e.censored_fraction, 0.1);
}

TEST(H1MonteCarlo, EstimateNeverBelowStart) {
    const HarmonicEstimate e = h1_estimate(Marginal{qt::skip21()}, 2.0, 2000, 30000, 5);
    EXPECT_GE(e.value, 2.0);
    EXPECT_GT(e.stat_error, 0.0);
    EXPECT_GT(*e.truncation_bias_bound, 0.0);
}

TEST(H1MonteCarlo, DeterministicAcrossWorkers) {
    const HarmonicEstimate a = h1_estimate(Marginal{qt::skip21()}, 1.0, 500, 20000, 7, 1);
    const HarmonicEstimate b = h1_estimate(Marginal{qt::skip21()}, 1.0, 500, 20000, 7, 5);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.stat_error, b.stat_error);
    EXPECT_EQ(a.censored_fraction, b.censored_fraction);
}

TEST(H1MonteCarlo, RejectsDriftingMarginal) {
    EXPECT_THROW(h1_estimate(Marginal{qt::up_drift()}, 1.0, 100, 100, 1),
                 std::invalid_argument);
    EXPECT_THROW(h1_estimate(Marginal{qt::pm1()}, 0.0, 100, 100, 1), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Half-line h1, lattice-exact route.

TEST(H1Lattice, SymmetricWalkIsIdentity) {
    const LatticeHarmonic1D solver(qt::pm1(), 2000);
    for (const std::int64_t x : {1, 2, 10, 100, 1999})
        EXPECT_NEAR(solver.value(x), static_cast<double>(x), 1e-9) << x;
}

TEST(H1Lattice, ResidualsVanishForTwoStepDown) {
    const LatticeHarmonic1D solver(qt::skip21(), 10000);
    double worst = 0.0;
    for (std::int64_t x = 1; x <= 500; ++x)
        worst = std::max(worst, std::abs(solver.residual(x)));
    EXPECT_LE(worst, 1e-10);
    EXPECT_GE(solver.min_on_unit_interval(), 1.0);
    EXPECT_NEAR(solver.min_on_unit_interval(), solver.value(1), 0.0);
}

TEST(H1Lattice, ValuesDominateStartAndNormalize) {
    const LatticeHarmonic1D solver(qt::skip21(), 10000);
    for (const std::int64_t x : {1, 5, 50, 500})
        EXPECT_GE(solver.value(x), static_cast<double>(x));
    const double ratio = solver.value(1000) / 1000.0;
    EXPECT_GE(ratio, 1.0);
    EXPECT_LE(ratio, 1.05);
    // The closure h(y) = y above the truncation edge pulls the edge value
    // down by O(constant), so the relative gap there is O(1/L) -- possibly
    // just below one, but tiny for large L.
    const LatticeHarmonic1D big(qt::skip21(), 1000000);
    const double edge_ratio = big.value(1000000) / 1000000.0;
    EXPECT_NEAR(edge_ratio, 1.0, 1e-5);
}

TEST(H1Lattice, MonteCarloAgreesWithExact) {
    const LatticeHarmonic1D solver(qt::skip21(), 10000);
    const HarmonicEstimate mc = h1_estimate(Marginal{qt::skip21()}, 1.0, 20000, 200000, 11);
    const double slack = 4.0 * mc.stat_error + *mc.truncation_bias_bound + 1e-9;
    EXPECT_NEAR(mc.value, solver.value(1), slack);
}

TEST(H1Lattice, EstimateCarriesBiasBound) {
    const LatticeHarmonic1D solver(qt::skip21(), 1000);
    const HarmonicEstimate e = solver.estimate(7);
    EXPECT_EQ(e.method, HarmonicMethod::lattice_exact);
    EXPECT_EQ(e.truncation, 1000);
    EXPECT_DOUBLE_EQ(e.value, solver.value(7));
    ASSERT_TRUE(e.truncation_bias_bound.has_value());
    EXPECT_GT(*e.truncation_bias_bound, 0.0);
}

TEST(H1Lattice, RejectsBadInput) {
    EXPECT_THROW(LatticeHarmonic1D(qt::up_drift(), 1000), std::invalid_argument);
    const FiniteSupportMarginal frac{{{0.5, 0.5}, {-0.5, 0.5}}};
    EXPECT_THROW(LatticeHarmonic1D(frac, 1000), std::invalid_argument);
    EXPECT_THROW(LatticeHarmonic1D(qt::skip21(), 3), std::invalid_argument);
    const LatticeHarmonic1D solver(qt::skip21(), 100);
    EXPECT_THROW(solver.value(0), std::invalid_argument);
    EXPECT_THROW(solver.value(101), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Ladder structure and the potential kernel.

TEST(Ladder, SymmetricWalkHeightIsMinusOne) {
    RngStream rng(13);
    const MarginalSampler s{Marginal{qt::pm1()}};
    for (int i = 0; i < 50; ++i) {
        const LadderSample ls = ladder_height_sample(s, rng);
        EXPECT_DOUBLE_EQ(ls.height, -1.0);
        EXPECT_GE(ls.epoch, 1);
        EXPECT_EQ(ls.epoch % 2, 1);  // parity: odd epochs only
    }
}

TEST(Ladder, HeightDistributionMatchesAbsorptionRecursion) {
    // Oracle: forward probability recursion absorbing at the first step
    // below zero, truncated at N steps; the sampler with the same horizon
    // restarts on truncation, so it draws from the conditional law.
    const int N = 200;
    std::vector<double> mass(static_cast<std::size_t>(N) + 3, 0.0);
    mass[0] = 1.0;
    double abs1 = 0.0, abs2 = 0.0;
    for (int step = 0; step < N; ++step) {
        std::vector<double> next(mass.size(), 0.0);
        abs1 += mass[1] / 3.0;  // jump -2 from 1 lands at -1
        abs2 += mass[0] / 3.0;  // jump -2 from 0 lands at -2
        for (std::size_t j = 0; j + 1 < mass.size(); ++j) {
            if (mass[j] == 0.0) continue;
            next[j + 1] += mass[j] * (2.0 / 3.0);
            if (j >= 2) next[j - 2] += mass[j] / 3.0;
        }
        mass.swap(next);
    }
    const double p1 = abs1 / (abs1 + abs2);  // P[height = -1 | epoch <= N]

    RngStream rng(17);
    const MarginalSampler s{Marginal{qt::skip21()}};
    const int draws = 20000;
    int ones = 0;
    std::int64_t resamples = 0;
    for (int i = 0; i < draws; ++i) {
        const LadderSample ls = ladder_height_sample(s, rng, N);
        ASSERT_TRUE(ls.height == -1.0 || ls.height == -2.0);
        ASSERT_LE(ls.epoch, N);
        ones += ls.height == -1.0;
        resamples += ls.resamples;
    }
    EXPECT_NEAR(static_cast<double>(ones) / draws, p1,
                5.0 * std::sqrt(p1 * (1.0 - p1) / draws));
    // Restart rate matches the truncated mass: resamples are geometric
    // with success probability (abs1 + abs2).
    const double p_trunc = 1.0 - (abs1 + abs2);
    const double expected_rate = p_trunc / (1.0 - p_trunc);
    EXPECT_NEAR(static_cast<double>(resamples) / draws, expected_rate,
                5.0 * std::sqrt(expected_rate / draws) + 0.01);
}

TEST(PotentialKernel, SymmetricWalkCountsLevels) {
    // Ladder heights are exactly -1, so the chain visits every integer
    // level: U(x) counts {0, -1, ..., -(ceil(x)-1)}.
    const UEstimate u1 = potential_kernel_U_estimate(Marginal{qt::pm1()}, 1.0, 400, 3);
    EXPECT_DOUBLE_EQ(u1.value, 1.0);
    EXPECT_DOUBLE_EQ(u1.stat_error, 0.0);
    const UEstimate u2 = potential_kernel_U_estimate(Marginal{qt::pm1()}, 2.0, 400, 3);
    EXPECT_DOUBLE_EQ(u2.value, 2.0);
    EXPECT_DOUBLE_EQ(potential_kernel_U(Marginal{qt::pm1()}, 2.5, 400, 3), 3.0);
}

TEST(PotentialKernel, MonotoneInLevel) {
    const double u1 = potential_kernel_U(Marginal{qt::skip21()}, 1.0, 4000, 7);
    const double u3 = potential_kernel_U(Marginal{qt::skip21()}, 3.0, 4000, 7);
    const double u6 = potential_kernel_U(Marginal{qt::skip21()}, 6.0, 4000, 7);
    EXPECT_GE(u1, 1.0);  // the chain starts at 0, which always counts
    EXPECT_LT(u1, u3);
    EXPECT_LT(u3, u6);
}

// ---------------------------------------------------------------------------
// Two-dimensional h in the mixed-drift regime.

TEST(H2d, BoundedByCoordinateOneHarmonic) {
    // Coordinate 1 is the +-1 walk with h1(x) = x; killing in the plane
    // only removes paths, so h(x) <= x1 up to noise.
    const HarmonicEstimate e = h2d_estimate(qt::mixed_drift(), {1.0, 1.0}, 5000, 100000, 3);
    EXPECT_GT(e.value, 0.0);
    EXPECT_LE(e.value, 1.0 + 3.0 * e.stat_error);
    EXPECT_FALSE(e.positivity_violation);
    EXPECT_GT(e.censored_fraction, 0.0);
}

TEST(H2d, HighSecondCoordinateRecoversH1) {
    // With coordinate 2 far away, killing on it never happens in any
    // reasonable horizon: h(1, 1000) equals h1(1) = 1 up to bias.
    const HarmonicEstimate e =
        h2d_estimate(qt::mixed_drift(), {1.0, 1000.0}, 5000, 100000, 5);
    EXPECT_GE(e.value, 0.9);
    EXPECT_LE(e.value, 1.05);
}

TEST(H2d, OneStepHarmonicityAtInteriorPoint) {
    // h(x) = sum_v p(v) h(x + v) over surviving moves; estimate every
    // term and compare within joint noise.  Law: (+-1, +-1) with
    // coordinate 2 biased up: p(+1)=3/4, p(-1)=1/4, independent coords.
    const std::int64_t H = 5000, P = 60000;
    const Vec2 x{2.0, 2.0};
    const double pv[4] = {0.5 * 0.75, 0.5 * 0.75, 0.5 * 0.25, 0.5 * 0.25};
    const Vec2 moves[4] = {{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}};
    const HarmonicEstimate at_x = h2d_estimate(qt::mixed_drift(), x, H, P, 41);
    double mean = 0.0, var = at_x.stat_error * at_x.stat_error;
    for (int k = 0; k < 4; ++k) {
        const Vec2 y{x[0] + moves[k][0], x[1] + moves[k][1]};
        if (!(y[0] > 0.0 && y[1] > 0.0)) continue;  // killed move contributes zero
        const HarmonicEstimate at_y =
            h2d_estimate(qt::mixed_drift(), y, H, P, 43 + static_cast<std::uint64_t>(k));
        mean += pv[k] * at_y.value;
        var += pv[k] * pv[k] * at_y.stat_error * at_y.stat_error;
    }
    const double sigma = std::sqrt(var);
    EXPECT_NEAR(at_x.value, mean, 4.0 * sigma + 0.02)
        << "residual " << at_x.value - mean << " sigma " << sigma;
}

TEST(H2d, RejectsWrongRegime) {
    EXPECT_THROW(h2d_estimate(qt::pm1_squared(), {1.0, 1.0}, 100, 100, 1),
                 std::invalid_argument);
    try {
        h2d_estimate(exchange_coordinates(qt::mixed_drift()), {1.0, 1.0}, 100, 100, 1);
        FAIL() << "expected rejection of the exchanged orientation";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("exchange_coordinates"), std::string::npos);
    }
}
