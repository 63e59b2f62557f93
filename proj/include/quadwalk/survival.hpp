#pragma once

// Monte Carlo survival curves P[tau_x > n] on a grid of n values.  All
// grid points share the same simulated paths (one exit time per path),
// which makes the curve exactly monotone in n.  Counts are integers, so
// results are bit-identical for every worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "distribution.hpp"
#include "exit_time.hpp"
#include "parallel.hpp"

namespace quadwalk {

inline constexpr double kZ95 = 1.959963984540054;   // two-sided 95% normal quantile
inline constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

struct WilsonInterval {
    double low = 0.0, high = 1.0;
};

inline WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                                      double z = kZ95) {
    if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be > 0");
    if (successes < 0 || successes > trials)
        throw std::invalid_argument("wilson_interval: successes out of range");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Roughly geometric integer grid 1..n_max with the given resolution;
// always contains n_max.
inline std::vector<std::int64_t> geometric_grid(std::int64_t n_max, int points_per_decade = 8) {
    if (n_max < 1) throw std::invalid_argument("geometric_grid: n_max must be >= 1");
    if (points_per_decade < 1)
        throw std::invalid_argument("geometric_grid: points_per_decade must be >= 1");
    std::vector<std::int64_t> grid;
    for (int k = 0;; ++k) {
        const double v = std::pow(10.0, static_cast<double>(k) / points_per_decade);
        if (v > static_cast<double>(n_max) * (1.0 + 1e-12)) break;
        const auto n = static_cast<std::int64_t>(std::llround(v));
        if (grid.empty() || n > grid.back()) grid.push_back(std::min(n, n_max));
    }
    if (grid.empty() || grid.back() != n_max) grid.push_back(n_max);
    return grid;
}

struct SurvivalCurve {
    std::vector<std::int64_t> n;          // ascending grid
    std::vector<std::int64_t> survivors;  // # paths with tau > n
    std::vector<double> estimate, ci_low, ci_high;
    std::int64_t paths = 0;
    std::uint64_t seed = 0;
    Vec2 start{0.0, 0.0};
    std::int64_t horizon = 0;  // censoring horizon = max grid point
    double z = kZ95;
};

namespace detail {

inline void check_grid(const std::vector<std::int64_t>& grid) {
    if (grid.empty()) throw std::invalid_argument("survival_curve: empty grid");
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (grid[j] < 1) throw std::invalid_argument("survival_curve: grid values must be >= 1");
        if (j > 0 && grid[j] <= grid[j - 1])
            throw std::invalid_argument("survival_curve: grid must be strictly increasing");
    }
}

// Shared accumulation: each path contributes the count of grid points it
// survives; per-block tallies are integers and merge exactly.
template <class TauOfPath>
SurvivalCurve accumulate_curve(const std::vector<std::int64_t>& grid, std::int64_t paths,
                               std::uint64_t seed, int workers, double z,
                               const TauOfPath& tau_of_path) {
    check_grid(grid);
    if (paths < 1) throw std::invalid_argument("survival_curve: need at least one path");
    const std::int64_t horizon = grid.back();
    const std::int64_t nblocks = (paths + kDefaultBlockSize - 1) / kDefaultBlockSize;
    // slot[b][k] = # paths in block b surviving exactly the first k grid points.
    std::vector<std::vector<std::int64_t>> slot(static_cast<std::size_t>(nblocks));
    for_each_block(paths, kDefaultBlockSize, workers,
                   [&](std::int64_t b, std::int64_t begin, std::int64_t end) {
                       std::vector<std::int64_t> local(grid.size() + 1, 0);
                       for (std::int64_t p = begin; p < end; ++p) {
                           RngStream rng = RngStream::for_path(seed, static_cast<std::uint64_t>(p));
                           const std::int64_t tau = tau_of_path(rng);  // > horizon if censored
                           const auto idx = static_cast<std::size_t>(
                               std::lower_bound(grid.begin(), grid.end(), tau) - grid.begin());
                           ++local[idx];  // survives grid points with n < tau
                       }
                       slot[static_cast<std::size_t>(b)] = std::move(local);
                   });
    std::vector<std::int64_t> first_k(grid.size() + 1, 0);
    for (const auto& local : slot)
        for (std::size_t k = 0; k < local.size(); ++k) first_k[k] += local[k];

    SurvivalCurve curve;
    curve.n = grid;
    curve.paths = paths;
    curve.seed = seed;
    curve.horizon = horizon;
    curve.z = z;
    curve.survivors.resize(grid.size());
    std::int64_t suffix = 0;
    for (std::size_t j = grid.size(); j-- > 0;) {
        suffix += first_k[j + 1];
        curve.survivors[j] = suffix;
    }
    curve.estimate.resize(grid.size());
    curve.ci_low.resize(grid.size());
    curve.ci_high.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        curve.estimate[j] =
            static_cast<double>(curve.survivors[j]) / static_cast<double>(paths);
        const auto ci = wilson_interval(curve.survivors[j], paths, z);
        curve.ci_low[j] = ci.low;
        curve.ci_high[j] = ci.high;
    }
    return curve;
}

}  // namespace detail

inline SurvivalCurve survival_curve(const IncrementDistribution& d, Vec2 x,
                                    const std::vector<std::int64_t>& grid, std::int64_t paths,
                                    std::uint64_t seed, int workers = 0, double z = kZ95) {
    if (!(x[0] > 0.0 && x[1] > 0.0))
        throw std::invalid_argument("survival_curve: start must lie in the open quadrant");
    validate(d);
    detail::check_grid(grid);  // before grid.back() below
    const IncrementSampler sampler(d);
    const std::int64_t horizon = grid.back();
    auto curve = detail::accumulate_curve(
        grid, paths, seed, workers, z, [&](RngStream& rng) -> std::int64_t {
            double p0 = x[0], p1 = x[1];
            for (std::int64_t n = 1; n <= horizon; ++n) {
                const Vec2 step = sampler.draw(rng);
                p0 += step[0];
                p1 += step[1];
                if (p0 <= 0.0 || p1 <= 0.0) return n;
            }
            return horizon + 1;
        });
    curve.start = x;
    return curve;
}

// One-dimensional analogue (exit from the positive half-line).
inline SurvivalCurve survival_curve_halfline(const Marginal& m, double x,
                                             const std::vector<std::int64_t>& grid,
                                             std::int64_t paths, std::uint64_t seed,
                                             int workers = 0, double z = kZ95) {
    if (!(x > 0.0)) throw std::invalid_argument("survival_curve_halfline: start must be > 0");
    validate(m);
    detail::check_grid(grid);  // before grid.back() below
    const MarginalSampler sampler(m);
    const std::int64_t horizon = grid.back();
    auto curve = detail::accumulate_curve(
        grid, paths, seed, workers, z, [&](RngStream& rng) -> std::int64_t {
            double p = x;
            for (std::int64_t n = 1; n <= horizon; ++n) {
                p += sampler.draw(rng);
                if (p <= 0.0) return n;
            }
            return horizon + 1;
        });
    curve.start = {x, kInf};
    return curve;
}

}  // namespace quadwalk
