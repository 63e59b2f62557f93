#pragma once

// Strict descending ladder structure of a centered one-dimensional walk:
// the first ladder epoch is the first n with S(n) < 0 and the ladder height
// is S at that step.  The potential kernel
//     U(x) = sum over k >= 0 of P[ S(ladder epoch k) in (-x, 0] ]
// is estimated by renewal counting: run the ladder-height chain downward
// from 0 and count the points (including the start) before it leaves (-x, 0].

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "distribution.hpp"
#include "moments.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace quadwalk {

struct LadderSample {
    double height = 0.0;      // S at the first strict descending ladder epoch, < 0
    std::int64_t epoch = 0;   // the epoch itself
    std::int64_t resamples = 0;  // horizon-exceeded restarts before this draw
};

// Simulates to the first strict descending ladder epoch.  A centered walk
// reaches one almost surely, but the epoch has infinite expectation, so a
// horizon guards the loop; runs that exhaust it restart with fresh
// randomness from the same stream and are counted in `resamples`.
inline LadderSample ladder_height_sample(const MarginalSampler& sampler, RngStream& rng,
                                         std::int64_t horizon = 1'000'000) {
    if (horizon < 1) throw std::invalid_argument("ladder_height_sample: horizon must be >= 1");
    LadderSample out;
    for (;;) {
        double s = 0.0;
        for (std::int64_t n = 1; n <= horizon; ++n) {
            s += sampler.draw(rng);
            if (s < 0.0) {
                out.height = s;
                out.epoch = n;
                return out;
            }
        }
        ++out.resamples;
    }
}

inline LadderSample ladder_height_sample(const Marginal& marginal, RngStream& rng,
                                         std::int64_t horizon = 1'000'000) {
    return ladder_height_sample(MarginalSampler(marginal), rng, horizon);
}

struct UEstimate {
    double value = 0.0;
    double stat_error = 0.0;
    std::int64_t chains = 0;
    std::int64_t resamples = 0;
};

inline UEstimate potential_kernel_U_estimate(const Marginal& marginal, double x,
                                             std::int64_t chains, std::uint64_t master_seed,
                                             int workers = 0,
                                             std::int64_t ladder_horizon = 1'000'000) {
    if (!(x > 0.0)) throw std::invalid_argument("potential_kernel_U: x must be > 0");
    if (chains < 1) throw std::invalid_argument("potential_kernel_U: chains must be >= 1");
    const MarginalMoments mm = marginal_moments(marginal);
    if (!(std::abs(mm.mean) < kCenteredTol))
        throw std::invalid_argument("potential_kernel_U: marginal must be centered");
    if (!std::isfinite(mm.variance))
        throw std::invalid_argument("potential_kernel_U: marginal needs a finite second moment");
    validate(marginal);
    const MarginalSampler sampler(marginal);

    struct Block {
        std::int64_t count_sum = 0;
        std::int64_t count_sumsq = 0;
        std::int64_t resamples = 0;
    };
    const std::int64_t block = kDefaultBlockSize;
    const auto nblocks = static_cast<std::size_t>((chains + block - 1) / block);
    std::vector<Block> acc(nblocks);
    for_each_block(chains, block, workers,
                   [&](std::size_t bi, std::int64_t begin, std::int64_t end) {
                       auto& a = acc[bi];
                       for (std::int64_t c = begin; c < end; ++c) {
                           RngStream rng = RngStream::for_path(master_seed, c);
                           double pos = 0.0;
                           std::int64_t count = 1;  // k = 0: the chain starts at 0 in (-x, 0]
                           for (;;) {
                               const LadderSample ls =
                                   ladder_height_sample(sampler, rng, ladder_horizon);
                               a.resamples += ls.resamples;
                               pos += ls.height;
                               if (pos > -x)
                                   ++count;
                               else
                                   break;
                           }
                           a.count_sum += count;
                           a.count_sumsq += count * count;
                       }
                   });
    std::int64_t sum = 0, sumsq = 0, resamples = 0;
    for (const auto& a : acc) {  // integer sums: merge order immaterial
        sum += a.count_sum;
        sumsq += a.count_sumsq;
        resamples += a.resamples;
    }
    const double n = static_cast<double>(chains);
    const double mean = static_cast<double>(sum) / n;
    const double var = std::max(0.0, static_cast<double>(sumsq) / n - mean * mean);
    return UEstimate{mean, std::sqrt(var / n), chains, resamples};
}

inline double potential_kernel_U(const Marginal& marginal, double x, std::int64_t chains,
                                 std::uint64_t master_seed, int workers = 0) {
    return potential_kernel_U_estimate(marginal, x, chains, master_seed, workers).value;
}

}  // namespace quadwalk
