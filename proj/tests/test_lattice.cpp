#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "helpers.hpp"
#include "quadwalk/lattice_tail.hpp"

using namespace quadwalk;

namespace {

// Brute-force oracle: enumerate every length-n atom sequence and add up
// the probability of paths that stay strictly positive through step n.
double enumerate_survival_1d(const FiniteSupportMarginal& m, std::int64_t x, int n) {
    const auto k = m.atoms.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    double total = 0.0;
    for (;;) {
        double prob = 1.0;
        double pos = static_cast<double>(x);
        bool alive = true;
        for (int s = 0; s < n && alive; ++s) {
            const auto& [v, p] = m.atoms[idx[static_cast<std::size_t>(s)]];
            prob *= p;
            pos += v;
            alive = pos > 0.0;
        }
        if (alive) total += prob;
        int carry = n - 1;
        while (carry >= 0 && ++idx[static_cast<std::size_t>(carry)] == k) {
            idx[static_cast<std::size_t>(carry)] = 0;
            --carry;
        }
        if (carry < 0) break;
    }
    return total;
}

double enumerate_survival_2d(const FiniteSupport2D& d, std::int64_t x1, std::int64_t x2,
                             int n) {
    const auto k = d.atoms.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    double total = 0.0;
    for (;;) {
        double prob = 1.0;
        double p1 = static_cast<double>(x1), p2 = static_cast<double>(x2);
        bool alive = true;
        for (int s = 0; s < n && alive; ++s) {
            const auto& a = d.atoms[idx[static_cast<std::size_t>(s)]];
            prob *= a.prob;
            p1 += a.value[0];
            p2 += a.value[1];
            alive = p1 > 0.0 && p2 > 0.0;
        }
        if (alive) total += prob;
        int carry = n - 1;
        while (carry >= 0 && ++idx[static_cast<std::size_t>(carry)] == k) {
            idx[static_cast<std::size_t>(carry)] = 0;
            --carry;
        }
        if (carry < 0) break;
    }
    return total;
}

}  // namespace

TEST(LatticeExact, SymmetricWalkSmallValues) {
    const std::vector<double> s = exact_survival_halfline(qt::pm1(), 1, 4);
    ASSERT_EQ(s.size(), 5u);
    EXPECT_EQ(s[0], 1.0);
    EXPECT_EQ(s[1], 0.5);
    EXPECT_EQ(s[2], 0.5);
    EXPECT_EQ(s[3], 0.375);
    EXPECT_EQ(s[4], 0.375);
}

TEST(LatticeExact, MatchesEnumerationSymmetric) {
    const std::vector<double> s = exact_survival_halfline(qt::pm1(), 1, 12);
    for (int n = 1; n <= 12; ++n)
        EXPECT_NEAR(s[static_cast<std::size_t>(n)], enumerate_survival_1d(qt::pm1(), 1, n),
                    1e-14)
            << n;
}

TEST(LatticeExact, MatchesEnumerationThreeAtoms) {
    const FiniteSupportMarginal law{{{1.0, 0.5}, {-1.0, 0.25}, {-2.0, 0.25}}};
    for (const std::int64_t x : {1, 2, 3}) {
        const std::vector<double> s = exact_survival_halfline(law, x, 10);
        for (int n = 1; n <= 10; ++n)
            EXPECT_NEAR(s[static_cast<std::size_t>(n)], enumerate_survival_1d(law, x, n),
                        1e-13)
                << "x=" << x << " n=" << n;
    }
}

TEST(LatticeExact, MatchesEnumerationTwoStepDown) {
    const std::vector<double> s = exact_survival_halfline(qt::skip21(), 2, 12);
    for (int n = 1; n <= 12; ++n)
        EXPECT_NEAR(s[static_cast<std::size_t>(n)], enumerate_survival_1d(qt::skip21(), 2, n),
                    1e-13)
            << n;
}

TEST(LatticeExact, QuadrantMatchesEnumeration) {
    const IncrementDistribution dist = qt::lattice_rho(-0.5);
    const auto& d = std::get<FiniteSupport2D>(dist);
    const std::vector<double> s = exact_survival_quadrant(d, {1, 2}, 8);
    for (int n = 1; n <= 8; ++n)
        EXPECT_NEAR(s[static_cast<std::size_t>(n)], enumerate_survival_2d(d, 1, 2, n), 1e-13)
            << n;
}

TEST(LatticeExact, QuadrantProductFactorizes) {
    // Independent coordinates: planar survival = product of half-line
    // survivals.  Express the product law with explicit planar atoms.
    FiniteSupport2D prod;
    for (const auto& [v1, p1] : qt::pm1().atoms)
        for (const auto& [v2, p2] : qt::skip21().atoms)
            prod.atoms.push_back({{v1, v2}, p1 * p2});
    const std::vector<double> s2 = exact_survival_quadrant(prod, {2, 3}, 30);
    const std::vector<double> a = exact_survival_halfline(qt::pm1(), 2, 30);
    const std::vector<double> b = exact_survival_halfline(qt::skip21(), 3, 30);
    for (int n = 0; n <= 30; ++n)
        EXPECT_NEAR(s2[static_cast<std::size_t>(n)],
                    a[static_cast<std::size_t>(n)] * b[static_cast<std::size_t>(n)], 1e-13)
            << n;
}

TEST(LatticeExact, SurvivalIsMonotone) {
    const std::vector<double> s = exact_survival_halfline(qt::skip21(), 1, 200);
    for (std::size_t n = 1; n < s.size(); ++n) EXPECT_LE(s[n], s[n - 1]);
    EXPECT_GT(s.back(), 0.0);
}

TEST(LatticeExact, BudgetGuard) {
    EXPECT_THROW(exact_survival_halfline(qt::pm1(), 1, 1000000, 1000), LatticeBudgetError);
    const IncrementDistribution dist = qt::lattice_rho(0.0);
    const auto& d = std::get<FiniteSupport2D>(dist);
    EXPECT_THROW(exact_survival_quadrant(d, {1, 1}, 100000, 1000), LatticeBudgetError);
}

TEST(LatticeExact, RejectsNonLatticeAndBadStart) {
    const FiniteSupportMarginal half{{{0.5, 0.5}, {-0.5, 0.5}}};
    EXPECT_THROW(exact_survival_halfline(half, 1, 10), std::invalid_argument);
    EXPECT_THROW(exact_survival_halfline(qt::pm1(), 0, 10), std::invalid_argument);
}

TEST(LatticeExact, DispatcherAliases) {
    const std::vector<double> a = exact_tail_lattice(qt::pm1(), 1, 4);
    EXPECT_EQ(a[2], 0.5);
    EXPECT_EQ(a[4], 0.375);
}
