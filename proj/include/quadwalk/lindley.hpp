#pragma once

// Coordinate-wise Lindley recursion, its pathwise dual, and the
// absolute-value reflected walk.  The queueing process subtracts the
// increment: W(n) = max{0, W(n-1) - X(n)} in each coordinate, while the
// free walk S(n) adds increments, so small S means large W.

#include <span>
#include <vector>

#include "distribution.hpp"

namespace quadwalk {

inline Vec2 lindley_step(Vec2 w, Vec2 x) {
    return {std::max(0.0, w[0] - x[0]), std::max(0.0, w[1] - x[1])};
}

inline Vec2 reflected_step(Vec2 r, Vec2 x) {
    return {std::abs(r[0] - x[0]), std::abs(r[1] - x[1])};
}

// Trajectory W(0..n) driven by explicit increments; W(0) = w0.
inline std::vector<Vec2> lindley_path(std::span<const Vec2> increments, Vec2 w0) {
    std::vector<Vec2> path;
    path.reserve(increments.size() + 1);
    path.push_back(w0);
    for (const Vec2& x : increments) path.push_back(lindley_step(path.back(), x));
    return path;
}

inline std::vector<Vec2> reflected_path(std::span<const Vec2> increments, Vec2 r0) {
    std::vector<Vec2> path;
    path.reserve(increments.size() + 1);
    path.push_back(r0);
    for (const Vec2& x : increments) path.push_back(reflected_step(path.back(), x));
    return path;
}

// Random trajectory of length n from the given law.
inline std::vector<Vec2> lindley_path(const IncrementDistribution& d, Vec2 w0, std::int64_t n,
                                      RngStream& rng) {
    IncrementSampler sampler(d);
    std::vector<Vec2> path;
    path.reserve(static_cast<std::size_t>(n) + 1);
    path.push_back(w0);
    for (std::int64_t k = 0; k < n; ++k)
        path.push_back(lindley_step(path.back(), sampler.draw(rng)));
    return path;
}

// Value at time n of the Lindley process started at 0, written without
// the recursion: the coordinate-wise maximum over 0 <= k <= n of
// -(S(n) - S(n-k)), i.e. over negated suffix sums (k = 0 contributes 0).
inline Vec2 dual_waiting_time(std::span<const Vec2> increments) {
    Vec2 best{0.0, 0.0};
    Vec2 suffix{0.0, 0.0};
    for (std::size_t k = increments.size(); k-- > 0;) {
        suffix[0] += increments[k][0];
        suffix[1] += increments[k][1];
        best[0] = std::max(best[0], -suffix[0]);
        best[1] = std::max(best[1], -suffix[1]);
    }
    return best;
}

// Free-walk bookkeeping for a fixed increment sequence.
struct WalkPath {
    std::vector<Vec2> increments;
    std::vector<Vec2> partial_sums;  // S(0)=0, ..., S(n)
    std::vector<Vec2> running_min;   // min over k <= n of S(k), coordinate-wise
    std::vector<Vec2> running_max;

    static WalkPath from_increments(std::span<const Vec2> incr) {
        WalkPath p;
        p.increments.assign(incr.begin(), incr.end());
        p.partial_sums.reserve(incr.size() + 1);
        p.running_min.reserve(incr.size() + 1);
        p.running_max.reserve(incr.size() + 1);
        Vec2 s{0.0, 0.0}, lo{0.0, 0.0}, hi{0.0, 0.0};
        p.partial_sums.push_back(s);
        p.running_min.push_back(lo);
        p.running_max.push_back(hi);
        for (const Vec2& x : incr) {
            s[0] += x[0];
            s[1] += x[1];
            for (int i = 0; i < 2; ++i) {
                lo[static_cast<std::size_t>(i)] =
                    std::min(lo[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(i)]);
                hi[static_cast<std::size_t>(i)] =
                    std::max(hi[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(i)]);
            }
            p.partial_sums.push_back(s);
            p.running_min.push_back(lo);
            p.running_max.push_back(hi);
        }
        return p;
    }
};

}  // namespace quadwalk
