#pragma once

// Occupation diagnostics for the two-dimensional reflected (queueing)
// process started at the origin.  The probability that the process sits in
// a positive box after n steps equals the probability that the dual free
// walk started at the box corner has not left the quadrant:
//     P[ W(n) in [0, x1) x [0, x2) ] = P[ tau_x > n ],  x = (x1, x2).
// occupation_series estimates the left side over shared reflected paths and
// the right side by an independent-seed survival curve, and reports both
// term-wise and as partial sums (the expected number of visits to the box).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "distribution.hpp"
#include "lindley.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "survival.hpp"

namespace quadwalk {

struct OccupationSeries {
    std::vector<std::int64_t> n;  // 0..n_max
    // Reflected-process route (shared paths from the origin).
    std::vector<double> occ_term, occ_stderr, occ_partial;
    // Exit-time route (independent seed), the duality cross-check.
    std::vector<double> exit_term, exit_ci_low, exit_ci_high, exit_partial;
    Vec2 box{0.0, 0.0};
    std::int64_t paths = 0;
    std::uint64_t seed = 0;
};

inline OccupationSeries occupation_series(const IncrementDistribution& dist, Vec2 box,
                                          std::int64_t n_max, std::int64_t paths,
                                          std::uint64_t master_seed, int workers = 0) {
    if (!(box[0] > 0.0 && box[1] > 0.0))
        throw std::invalid_argument("occupation_series: box must be strictly positive");
    if (n_max < 1 || paths < 1)
        throw std::invalid_argument("occupation_series: n_max and paths must be >= 1");
    validate(dist);
    const IncrementSampler sampler(dist);

    const auto terms = static_cast<std::size_t>(n_max) + 1;
    // Hit counts are integers, so merging is commutative and the result is
    // independent of the block partition; grow blocks if the per-block
    // count tables would get large.
    std::int64_t block = kDefaultBlockSize;
    while ((paths + block - 1) / block * static_cast<std::int64_t>(terms) > 2'000'000)
        block *= 2;
    const auto nblocks = static_cast<std::size_t>((paths + block - 1) / block);
    std::vector<std::vector<std::int64_t>> acc(nblocks);
    for_each_block(paths, block, workers,
                   [&](std::size_t bi, std::int64_t begin, std::int64_t end) {
                       auto& hits = acc[bi];
                       hits.assign(terms, 0);
                       for (std::int64_t p = begin; p < end; ++p) {
                           RngStream rng = RngStream::for_path(master_seed, p);
                           Vec2 w{0.0, 0.0};
                           ++hits[0];  // W(0) = 0 always sits in the box
                           for (std::int64_t k = 1; k <= n_max; ++k) {
                               w = lindley_step(w, sampler.draw(rng));
                               if (w[0] < box[0] && w[1] < box[1])
                                   ++hits[static_cast<std::size_t>(k)];
                           }
                       }
                   });
    std::vector<std::int64_t> hits(terms, 0);
    for (const auto& a : acc)
        for (std::size_t k = 0; k < terms; ++k) hits[k] += a[k];

    OccupationSeries out;
    out.box = box;
    out.paths = paths;
    out.seed = master_seed;
    const double np = static_cast<double>(paths);
    double cum = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
        const double est = static_cast<double>(hits[k]) / np;
        cum += est;
        out.n.push_back(static_cast<std::int64_t>(k));
        out.occ_term.push_back(est);
        out.occ_stderr.push_back(std::sqrt(std::max(0.0, est * (1.0 - est)) / np));
        out.occ_partial.push_back(cum);
    }

    std::vector<std::int64_t> grid(static_cast<std::size_t>(n_max));
    for (std::int64_t k = 1; k <= n_max; ++k) grid[static_cast<std::size_t>(k - 1)] = k;
    const SurvivalCurve curve =
        survival_curve(dist, box, grid, paths, master_seed + 1, workers);
    out.exit_term.push_back(1.0);  // tau >= 1 by definition
    out.exit_ci_low.push_back(1.0);
    out.exit_ci_high.push_back(1.0);
    out.exit_partial.push_back(1.0);
    double cum2 = 1.0;
    for (std::size_t j = 0; j < curve.n.size(); ++j) {
        cum2 += curve.estimate[j];
        out.exit_term.push_back(curve.estimate[j]);
        out.exit_ci_low.push_back(curve.ci_low[j]);
        out.exit_ci_high.push_back(curve.ci_high[j]);
        out.exit_partial.push_back(cum2);
    }
    return out;
}

}  // namespace quadwalk
