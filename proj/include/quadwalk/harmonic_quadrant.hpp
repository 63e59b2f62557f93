#pragma once

// Harmonic function of the two-dimensional walk killed on leaving the open
// quadrant, in the mixed-drift regime (coordinate 1 centered, coordinate 2
// drifting up):  h(x) = x1 - E( x1 + S1(tau_x) ; tau_x < infinity ).
// Estimated by Monte Carlo over killed paths: each exited path contributes
// its first coordinate at the exit step, censored paths contribute zero,
// and the censored fraction feeds a one-sided bias bound.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "classify.hpp"
#include "distribution.hpp"
#include "harmonic_halfline.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace quadwalk {

inline HarmonicEstimate h2d_estimate(const IncrementDistribution& dist, Vec2 x,
                                     std::int64_t horizon, std::int64_t paths,
                                     std::uint64_t master_seed, int workers = 0) {
    if (!(x[0] > 0.0 && x[1] > 0.0))
        throw std::invalid_argument("h2d_estimate: start must lie in the open quadrant");
    if (horizon < 1 || paths < 1)
        throw std::invalid_argument("h2d_estimate: horizon and paths must be >= 1");
    validate(dist);
    const RegimeClassification cls = classify_regime(dist);
    if (cls.case_label != CaseLabel::mixed_drift)
        throw std::invalid_argument(
            "h2d_estimate: distribution is not in the mixed-drift regime "
            "(one centered coordinate, one with positive drift)");
    if (cls.exchanged)
        throw std::invalid_argument(
            "h2d_estimate: coordinate 1 must be the centered one; apply "
            "exchange_coordinates first");

    const IncrementSampler sampler(dist);
    const std::int64_t block = kDefaultBlockSize;
    const auto nblocks = static_cast<std::size_t>((paths + block - 1) / block);
    std::vector<detail::OvershootAccumulator> acc(nblocks);
    for_each_block(paths, block, workers,
                   [&](std::size_t bi, std::int64_t begin, std::int64_t end) {
                       auto& a = acc[bi];
                       for (std::int64_t p = begin; p < end; ++p) {
                           RngStream rng = RngStream::for_path(master_seed, p);
                           Vec2 pos = x;
                           bool exited = false;
                           for (std::int64_t n = 0; n < horizon; ++n) {
                               const Vec2 step = sampler.draw(rng);
                               pos[0] += step[0];
                               pos[1] += step[1];
                               if (pos[0] <= 0.0 || pos[1] <= 0.0) {
                                   exited = true;
                                   break;
                               }
                           }
                           // Contribution is the first coordinate at exit;
                           // it is <= 0 when coordinate 1 exited first but
                           // can be positive when coordinate 2 did.
                           if (exited) {
                               a.sum += pos[0];
                               a.sumsq += pos[0] * pos[0];
                           } else {
                               ++a.censored;
                           }
                       }
                   });
    double sum = 0.0, sumsq = 0.0;
    std::int64_t censored = 0;
    for (const auto& a : acc) {  // fixed block order => deterministic float sums
        sum += a.sum;
        sumsq += a.sumsq;
        censored += a.censored;
    }
    const double n = static_cast<double>(paths);
    const double mean_exit1 = sum / n;
    const double var_exit1 = std::max(0.0, sumsq / n - mean_exit1 * mean_exit1);

    HarmonicEstimate est;
    est.point = {x[0], x[1]};
    est.value = x[0] - mean_exit1;
    est.stat_error = std::sqrt(var_exit1 / n);
    est.method = HarmonicMethod::monte_carlo;
    est.horizon = horizon;
    est.paths = paths;
    est.censored_fraction = static_cast<double>(censored) / n;
    est.truncation_bias_bound = std::sqrt((sumsq / n) * est.censored_fraction);
    est.positivity_violation = est.value < -3.0 * est.stat_error;
    return est;
}

}  // namespace quadwalk
