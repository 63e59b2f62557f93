#pragma once

// Exit time of the free walk from the open positive quadrant:
//   tau_x = inf { n >= 1 : x + S(n) has some coordinate <= 0 },
// with the boundary counted as outside (hitting 0 exits).  Runs are
// censored at a finite horizon; a censored result means tau > horizon.

#include <cstdint>
#include <stdexcept>

#include "distribution.hpp"

namespace quadwalk {

enum class ExitCoordinate { first, second, both, none };

struct ExitTimeResult {
    std::int64_t tau = 0;  // exit step when !censored, otherwise undefined
    bool censored = false; // true: survived past the horizon
    std::int64_t horizon = 0;
    ExitCoordinate exit_coordinate = ExitCoordinate::none;
    // Position coordinates at the exit step (x + S(tau)); only valid
    // when !censored.  The coordinate(s) named above are <= 0.
    Vec2 exit_position{0.0, 0.0};

    bool survived_past(std::int64_t n) const { return censored ? true : tau > n; }
};

// Walk forward with a prepared sampler; `Sampler::draw(RngStream&) -> Vec2`.
template <class Sampler>
ExitTimeResult exit_time(const Sampler& sampler, Vec2 x, std::int64_t horizon, RngStream& rng) {
    if (!(x[0] > 0.0 && x[1] > 0.0))
        throw std::invalid_argument("exit_time: start must lie in the open positive quadrant");
    if (horizon < 1) throw std::invalid_argument("exit_time: horizon must be >= 1");
    ExitTimeResult res;
    res.horizon = horizon;
    double p0 = x[0], p1 = x[1];
    for (std::int64_t n = 1; n <= horizon; ++n) {
        const Vec2 step = sampler.draw(rng);
        p0 += step[0];
        p1 += step[1];
        if (p0 <= 0.0 || p1 <= 0.0) {
            res.tau = n;
            res.exit_position = {p0, p1};
            res.exit_coordinate = (p0 <= 0.0 && p1 <= 0.0) ? ExitCoordinate::both
                                  : (p0 <= 0.0 ? ExitCoordinate::first : ExitCoordinate::second);
            return res;
        }
    }
    res.censored = true;
    res.exit_coordinate = ExitCoordinate::none;
    return res;
}

inline ExitTimeResult exit_time(const IncrementDistribution& d, Vec2 x, std::int64_t horizon,
                                RngStream& rng) {
    return exit_time(IncrementSampler(d), x, horizon, rng);
}

// One-dimensional exit time from the positive half-line, same conventions.
struct ExitTime1DResult {
    std::int64_t tau = 0;
    bool censored = false;
    std::int64_t horizon = 0;
    double exit_position = 0.0;  // x + S(tau) <= 0 when !censored

    bool survived_past(std::int64_t n) const { return censored ? true : tau > n; }
};

inline ExitTime1DResult exit_time_halfline(const MarginalSampler& sampler, double x,
                                           std::int64_t horizon, RngStream& rng) {
    if (!(x > 0.0)) throw std::invalid_argument("exit_time_halfline: start must be > 0");
    if (horizon < 1) throw std::invalid_argument("exit_time_halfline: horizon must be >= 1");
    ExitTime1DResult res;
    res.horizon = horizon;
    double p = x;
    for (std::int64_t n = 1; n <= horizon; ++n) {
        p += sampler.draw(rng);
        if (p <= 0.0) {
            res.tau = n;
            res.exit_position = p;
            return res;
        }
    }
    res.censored = true;
    return res;
}

}  // namespace quadwalk
