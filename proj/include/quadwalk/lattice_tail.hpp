#pragma once

// Exact survival probabilities P[tau_x > n] for integer-lattice laws by
// forward probability propagation over surviving positions.  Positions
// with a coordinate <= 0 are absorbing (mass dropped); the remaining
// mass at step n is the survival probability.  Work is bounded by an
// operation budget to keep state-space blowups explicit.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "distribution.hpp"

namespace quadwalk {

struct LatticeBudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 1-D: exact P[tau_x > n] for n = 0..n_max (index = n; entry 0 is 1).
inline std::vector<double> exact_survival_halfline(const FiniteSupportMarginal& m,
                                                   std::int64_t x, std::int64_t n_max,
                                                   std::int64_t op_budget = 4'000'000'000) {
    validate(m);
    if (!is_integer_lattice(m))
        throw std::invalid_argument("exact_survival_halfline: marginal must be integer-valued");
    if (x < 1) throw std::invalid_argument("exact_survival_halfline: start must be >= 1");
    if (n_max < 0) throw std::invalid_argument("exact_survival_halfline: n_max must be >= 0");

    std::vector<std::pair<std::int64_t, double>> atoms;
    std::int64_t vmax = 0;
    for (const auto& [v, p] : m.atoms) {
        const auto iv = static_cast<std::int64_t>(v);
        atoms.emplace_back(iv, p);
        vmax = std::max(vmax, iv);
    }
    const std::int64_t up = std::max<std::int64_t>(vmax, 0);
    const std::int64_t pmax = x + n_max * up;
    const double ops = static_cast<double>(pmax) * static_cast<double>(n_max) *
                       static_cast<double>(atoms.size());
    if (ops > static_cast<double>(op_budget))
        throw LatticeBudgetError("exact_survival_halfline: " + std::to_string(ops) +
                                 " cell updates exceed budget " + std::to_string(op_budget));

    std::vector<double> mass(static_cast<std::size_t>(pmax) + 1, 0.0);
    std::vector<double> next(static_cast<std::size_t>(pmax) + 1, 0.0);
    mass[static_cast<std::size_t>(x)] = 1.0;
    std::vector<double> surv(static_cast<std::size_t>(n_max) + 1, 0.0);
    surv[0] = 1.0;
    std::int64_t hi = x;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const std::int64_t next_hi = std::min(pmax, hi + up);
        std::fill(next.begin(), next.begin() + next_hi + 1, 0.0);
        for (std::int64_t p = 1; p <= hi; ++p) {
            const double w = mass[static_cast<std::size_t>(p)];
            if (w == 0.0) continue;
            for (const auto& [v, q] : atoms) {
                const std::int64_t np = p + v;
                if (np >= 1) next[static_cast<std::size_t>(np)] += w * q;
            }
        }
        hi = next_hi;
        mass.swap(next);
        double total = 0.0;
        for (std::int64_t p = 1; p <= hi; ++p) total += mass[static_cast<std::size_t>(p)];
        // Mass only ever leaves, so survival is non-increasing; on steps where
        // no exit is reachable the fresh re-summation can land an ulp above
        // the previous value, so clamp that roundoff away.
        surv[static_cast<std::size_t>(n)] = std::min(total, surv[static_cast<std::size_t>(n - 1)]);
    }
    return surv;
}

// 2-D: exact P[tau_x > n] for n = 0..n_max over the open quadrant.
inline std::vector<double> exact_survival_quadrant(const FiniteSupport2D& d,
                                                   std::array<std::int64_t, 2> x,
                                                   std::int64_t n_max,
                                                   std::int64_t op_budget = 4'000'000'000) {
    validate(d);
    if (!is_integer_lattice(d))
        throw std::invalid_argument("exact_survival_quadrant: law must be integer-valued");
    if (x[0] < 1 || x[1] < 1)
        throw std::invalid_argument("exact_survival_quadrant: start must be >= (1,1)");
    if (n_max < 0) throw std::invalid_argument("exact_survival_quadrant: n_max must be >= 0");

    struct IntAtom {
        std::int64_t v1, v2;
        double p;
    };
    std::vector<IntAtom> atoms;
    std::int64_t up1 = 0, up2 = 0;
    for (const auto& a : d.atoms) {
        const IntAtom ia{static_cast<std::int64_t>(a.value[0]),
                         static_cast<std::int64_t>(a.value[1]), a.prob};
        atoms.push_back(ia);
        up1 = std::max(up1, ia.v1);
        up2 = std::max(up2, ia.v2);
    }
    up1 = std::max<std::int64_t>(up1, 0);
    up2 = std::max<std::int64_t>(up2, 0);
    const std::int64_t w1 = x[0] + n_max * up1;
    const std::int64_t w2 = x[1] + n_max * up2;
    // Cost estimate: sum over steps of live-box area, bounded by the full box.
    const double ops = static_cast<double>(w1) * static_cast<double>(w2) *
                       static_cast<double>(n_max) * static_cast<double>(atoms.size());
    const double cells = (static_cast<double>(w1) + 1.0) * (static_cast<double>(w2) + 1.0);
    if (cells > 3e8 || ops > static_cast<double>(op_budget))
        throw LatticeBudgetError("exact_survival_quadrant: state space (" +
                                 std::to_string(w1) + " x " + std::to_string(w2) +
                                 ", n_max " + std::to_string(n_max) + ") exceeds budget");

    const std::size_t stride = static_cast<std::size_t>(w2) + 1;
    const std::size_t ncells = (static_cast<std::size_t>(w1) + 1) * stride;
    std::vector<double> mass(ncells, 0.0), next(ncells, 0.0);
    auto at = [stride](std::vector<double>& grid, std::int64_t p1, std::int64_t p2) -> double& {
        return grid[static_cast<std::size_t>(p1) * stride + static_cast<std::size_t>(p2)];
    };
    at(mass, x[0], x[1]) = 1.0;
    std::vector<double> surv(static_cast<std::size_t>(n_max) + 1, 0.0);
    surv[0] = 1.0;
    std::int64_t hi1 = x[0], hi2 = x[1];
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const std::int64_t nh1 = std::min(w1, hi1 + up1);
        const std::int64_t nh2 = std::min(w2, hi2 + up2);
        for (std::int64_t p1 = 1; p1 <= nh1; ++p1)
            std::fill(&at(next, p1, 0), &at(next, p1, 0) + nh2 + 1, 0.0);
        for (std::int64_t p1 = 1; p1 <= hi1; ++p1) {
            for (std::int64_t p2 = 1; p2 <= hi2; ++p2) {
                const double w = at(mass, p1, p2);
                if (w == 0.0) continue;
                for (const auto& a : atoms) {
                    const std::int64_t q1 = p1 + a.v1;
                    const std::int64_t q2 = p2 + a.v2;
                    if (q1 >= 1 && q2 >= 1) at(next, q1, q2) += w * a.p;
                }
            }
        }
        hi1 = nh1;
        hi2 = nh2;
        mass.swap(next);
        double total = 0.0;
        for (std::int64_t p1 = 1; p1 <= hi1; ++p1)
            for (std::int64_t p2 = 1; p2 <= hi2; ++p2) total += at(mass, p1, p2);
        // Same non-increasing clamp as the 1-D propagation above.
        surv[static_cast<std::size_t>(n)] = std::min(total, surv[static_cast<std::size_t>(n - 1)]);
    }
    return surv;
}

// Dispatcher names used by the estimate layer: the exact tail doubles as
// the desk-scale oracle for Monte Carlo survival curves.

inline std::vector<double> exact_tail_lattice(const FiniteSupportMarginal& m, std::int64_t x,
                                              std::int64_t n_max,
                                              std::int64_t op_budget = 4'000'000'000) {
    return exact_survival_halfline(m, x, n_max, op_budget);
}

inline std::vector<double> exact_tail_lattice(const FiniteSupport2D& d,
                                              std::array<std::int64_t, 2> x, std::int64_t n_max,
                                              std::int64_t op_budget = 4'000'000'000) {
    return exact_survival_quadrant(d, x, n_max, op_budget);
}

}  // namespace quadwalk
