#pragma once

// Square-root tail diagnostic for the centered one-dimensional exit time:
//     P[tau_x > n]  ~  kappa * h1(x) * n^{-1/2},   kappa = (pi Var(X)/2)^{-1/2}.
// Tabulates sqrt(n) * P[tau_x > n] against the constant kappa * h1(x) and
// reports their ratio, which should settle to 1 as n grows.  Integer-lattice
// laws started at integer points use the exact dynamic-programming tail and
// the lattice-exact h1; everything else falls back to shared-path Monte
// Carlo curves and the Monte Carlo h1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "distribution.hpp"
#include "harmonic_halfline.hpp"
#include "lattice_tail.hpp"
#include "moments.hpp"
#include "survival.hpp"

namespace quadwalk {

struct SqrtTailRow {
    std::int64_t n = 0;
    double survival = 0.0;
    double ci_low = 0.0, ci_high = 0.0;  // equal to survival on the exact route
    double scaled = 0.0;                 // sqrt(n) * survival
    double ratio = 0.0;                  // scaled / (kappa * h1)
};

struct SqrtTailTable {
    double variance = 0.0;
    double kappa = 0.0;
    double h1_value = 0.0;
    double h1_stat_error = 0.0;
    double reference = 0.0;  // kappa * h1(x)
    bool exact = false;      // exact DP + lattice h1 route
    std::vector<SqrtTailRow> rows;
    std::int64_t paths = 0;  // Monte Carlo route metadata (0 on the exact route)
    std::uint64_t seed = 0;
};

inline SqrtTailTable doney_check(const Marginal& marginal, double x,
                                 const std::vector<std::int64_t>& n_list,
                                 std::int64_t paths = 200'000, std::uint64_t master_seed = 1,
                                 int workers = 0) {
    if (n_list.empty()) throw std::invalid_argument("doney_check: empty n list");
    if (!(x > 0.0)) throw std::invalid_argument("doney_check: x must be > 0");
    const MarginalMoments mm = marginal_moments(marginal);
    detail::require_centered_finite_variance(mm, "doney_check");
    validate(marginal);
    const std::int64_t n_max = *std::max_element(n_list.begin(), n_list.end());

    SqrtTailTable table;
    table.variance = mm.variance;
    table.kappa = std::sqrt(2.0 / (std::numbers::pi * mm.variance));

    const auto* finite = std::get_if<FiniteSupportMarginal>(&marginal);
    const bool lattice_start = x == std::floor(x) && x >= 1.0;
    std::vector<double> exact_tail;
    if (finite != nullptr && is_integer_lattice(*finite) && lattice_start) {
        try {
            exact_tail = exact_survival_halfline(*finite,
                                                 static_cast<std::int64_t>(std::llround(x)),
                                                 n_max);
            table.exact = true;
        } catch (const LatticeBudgetError&) {
            // fall through to Monte Carlo
        }
    }

    if (table.exact) {
        std::int64_t width = 0;
        for (const auto& [v, p] : finite->atoms)
            width = std::max(width, static_cast<std::int64_t>(std::llround(std::abs(v))));
        const auto xi = static_cast<std::int64_t>(std::llround(x));
        const std::int64_t L = std::max<std::int64_t>({1000, 2 * xi, 16 * width});
        const LatticeHarmonic1D solver(*finite, L);
        table.h1_value = solver.value(xi);
        table.h1_stat_error = 0.0;
        table.reference = table.kappa * table.h1_value;
        for (const std::int64_t n : n_list) {
            SqrtTailRow row;
            row.n = n;
            row.survival = exact_tail[static_cast<std::size_t>(n)];
            row.ci_low = row.ci_high = row.survival;
            row.scaled = std::sqrt(static_cast<double>(n)) * row.survival;
            row.ratio = row.scaled / table.reference;
            table.rows.push_back(row);
        }
        return table;
    }

    std::vector<std::int64_t> grid = n_list;
    std::sort(grid.begin(), grid.end());
    const SurvivalCurve curve =
        survival_curve_halfline(marginal, x, grid, paths, master_seed, workers);
    const HarmonicEstimate h1 =
        h1_estimate(marginal, x, n_max, paths, master_seed + 1, workers);
    table.h1_value = h1.value;
    table.h1_stat_error = h1.stat_error;
    table.reference = table.kappa * table.h1_value;
    table.paths = paths;
    table.seed = master_seed;
    for (std::size_t j = 0; j < curve.n.size(); ++j) {
        SqrtTailRow row;
        row.n = curve.n[j];
        row.survival = curve.estimate[j];
        row.ci_low = curve.ci_low[j];
        row.ci_high = curve.ci_high[j];
        row.scaled = std::sqrt(static_cast<double>(row.n)) * row.survival;
        row.ratio = row.scaled / table.reference;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace quadwalk
