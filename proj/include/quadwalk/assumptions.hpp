#pragma once

// Structural checks on an increment law: the standing hypotheses are
// (i) the support is not contained in a single line, and (ii) the open
// positive quadrant carries positive mass.  Per-coordinate sign-mass
// flags are also reported since several estimators need P[X_i < 0] > 0.

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "distribution.hpp"
#include "quadrature.hpp"

namespace quadwalk {

struct AssumptionCheck {
    std::string name;
    bool pass;
};

struct AssumptionReport {
    bool spans_plane = false;            // support not confined to a line
    bool positive_quadrant_mass = false; // P[X1 > 0, X2 > 0] > 0
    double quadrant_prob = 0.0;          // the probability itself
    std::array<bool, 2> nondegenerate{}; // marginal not a point mass
    std::array<bool, 2> negative_mass{}; // P[X_i < 0] > 0
    std::array<bool, 2> positive_mass{}; // P[X_i > 0] > 0
    std::vector<AssumptionCheck> checks;

    bool all_basic() const { return spans_plane && positive_quadrant_mass; }
};

namespace detail {

struct SignMass {
    bool pos = false, neg = false, degenerate = true;
};

inline SignMass sign_mass(const Marginal& m) {
    SignMass s;
    if (const auto* f = std::get_if<FiniteSupportMarginal>(&m)) {
        for (const auto& [v, p] : f->atoms) {
            if (v > 0.0) s.pos = true;
            if (v < 0.0) s.neg = true;
        }
        s.degenerate = f->atoms.size() < 2;
    } else if (const auto* g = std::get_if<GaussianMarginal>(&m)) {
        if (g->variance > 0.0) {
            s.pos = s.neg = true;
            s.degenerate = false;
        } else {
            s.pos = g->mean > 0.0;
            s.neg = g->mean < 0.0;
            s.degenerate = true;
        }
    } else {
        const auto& p = std::get<PowerNegativeTailMarginal>(m);
        s.neg = true;                  // weight on {-1,-2,...} is positive
        s.pos = p.pos_value > 0.0;
        s.degenerate = false;
    }
    return s;
}

inline double positive_prob(const Marginal& m) {
    if (const auto* f = std::get_if<FiniteSupportMarginal>(&m)) {
        double p = 0.0;
        for (const auto& [v, q] : f->atoms)
            if (v > 0.0) p += q;
        return p;
    }
    if (const auto* g = std::get_if<GaussianMarginal>(&m)) {
        if (g->variance > 0.0) return normal_sf(-g->mean / std::sqrt(g->variance));
        return g->mean > 0.0 ? 1.0 : 0.0;
    }
    const auto& p = std::get<PowerNegativeTailMarginal>(m);
    return p.pos_value > 0.0 ? 1.0 - p.neg_weight : 0.0;
}

}  // namespace detail

inline AssumptionReport check_assumptions(const IncrementDistribution& d) {
    AssumptionReport rep;
    if (const auto* f = std::get_if<FiniteSupport2D>(&d)) {
        // Collinearity of the support.
        const Vec2 v0 = f->atoms.front().value;
        bool collinear = true;
        Vec2 dir{0.0, 0.0};
        bool have_dir = false;
        for (const auto& a : f->atoms) {
            const Vec2 u{a.value[0] - v0[0], a.value[1] - v0[1]};
            if (u[0] == 0.0 && u[1] == 0.0) continue;
            if (!have_dir) {
                dir = u;
                have_dir = true;
            } else if (std::abs(dir[0] * u[1] - dir[1] * u[0]) >
                       1e-12 * (std::abs(dir[0] * u[1]) + std::abs(dir[1] * u[0]) + 1.0)) {
                collinear = false;
            }
        }
        rep.spans_plane = !collinear;
        for (const auto& a : f->atoms) {
            if (a.value[0] > 0.0 && a.value[1] > 0.0) {
                rep.positive_quadrant_mass = true;
                rep.quadrant_prob += a.prob;
            }
            for (int i = 0; i < 2; ++i) {
                const double v = a.value[static_cast<std::size_t>(i)];
                if (v > 0.0) rep.positive_mass[static_cast<std::size_t>(i)] = true;
                if (v < 0.0) rep.negative_mass[static_cast<std::size_t>(i)] = true;
            }
        }
        for (int i = 0; i < 2; ++i) {
            const double first = f->atoms.front().value[static_cast<std::size_t>(i)];
            for (const auto& a : f->atoms)
                if (a.value[static_cast<std::size_t>(i)] != first)
                    rep.nondegenerate[static_cast<std::size_t>(i)] = true;
        }
    } else if (const auto* g = std::get_if<BivariateGaussian>(&d)) {
        const double det = g->cov[0][0] * g->cov[1][1] - g->cov[0][1] * g->cov[1][0];
        const double scale =
            std::max({std::abs(g->cov[0][0]), std::abs(g->cov[1][1]), 1e-300});
        rep.spans_plane = det > 1e-12 * scale * scale;
        for (int i = 0; i < 2; ++i) {
            const bool nd = g->cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] > 0.0;
            rep.nondegenerate[static_cast<std::size_t>(i)] = nd;
            const double mu = g->mean[static_cast<std::size_t>(i)];
            rep.positive_mass[static_cast<std::size_t>(i)] = nd || mu > 0.0;
            rep.negative_mass[static_cast<std::size_t>(i)] = nd || mu < 0.0;
        }
        if (rep.spans_plane) {
            rep.positive_quadrant_mass = true;  // full support
            const double s1 = std::sqrt(g->cov[0][0]), s2 = std::sqrt(g->cov[1][1]);
            const double rho = g->cov[0][1] / (s1 * s2);
            if (rho == 0.0)
                rep.quadrant_prob =
                    normal_sf(-g->mean[0] / s1) * normal_sf(-g->mean[1] / s2);
            else
                rep.quadrant_prob = bivariate_normal_quadrant_sf(-g->mean[0] / s1,
                                                                 -g->mean[1] / s2, rho);
        } else {
            // Degenerate support {mean + t*u}: look for t putting both
            // coordinates strictly positive.
            const double a = g->cov[0][0], b = g->cov[0][1], c = g->cov[1][1];
            Vec2 u{0.0, 0.0};
            if (a > 0.0) {
                u = {std::sqrt(a), b / std::sqrt(a)};
            } else if (c > 0.0) {
                u = {0.0, std::sqrt(c)};
            }
            if (u[0] == 0.0 && u[1] == 0.0) {
                rep.positive_quadrant_mass = g->mean[0] > 0.0 && g->mean[1] > 0.0;
                rep.quadrant_prob = rep.positive_quadrant_mass ? 1.0 : 0.0;
            } else {
                double lo = -kInf, hi = kInf;
                bool feasible = true;
                for (int i = 0; i < 2; ++i) {
                    const double mu = g->mean[static_cast<std::size_t>(i)];
                    const double ui = u[static_cast<std::size_t>(i)];
                    if (ui == 0.0) {
                        if (!(mu > 0.0)) feasible = false;
                    } else if (ui > 0.0) {
                        lo = std::max(lo, -mu / ui);
                    } else {
                        hi = std::min(hi, -mu / ui);
                    }
                }
                rep.positive_quadrant_mass = feasible && lo < hi;
                if (rep.positive_quadrant_mass)
                    rep.quadrant_prob = std::max(0.0, normal_cdf(hi) - normal_cdf(lo));
            }
        }
    } else {
        const auto& p = std::get<ProductDistribution>(d);
        const auto s1 = detail::sign_mass(p.coord1);
        const auto s2 = detail::sign_mass(p.coord2);
        rep.nondegenerate = {!s1.degenerate, !s2.degenerate};
        rep.positive_mass = {s1.pos, s2.pos};
        rep.negative_mass = {s1.neg, s2.neg};
        rep.spans_plane = !s1.degenerate && !s2.degenerate;
        rep.positive_quadrant_mass = s1.pos && s2.pos;  // independence
        rep.quadrant_prob =
            detail::positive_prob(p.coord1) * detail::positive_prob(p.coord2);
    }
    rep.checks = {
        {"support_spans_plane", rep.spans_plane},
        {"positive_quadrant_mass", rep.positive_quadrant_mass},
        {"coord1_nondegenerate", rep.nondegenerate[0]},
        {"coord2_nondegenerate", rep.nondegenerate[1]},
        {"coord1_negative_mass", rep.negative_mass[0]},
        {"coord2_negative_mass", rep.negative_mass[1]},
    };
    return rep;
}

}  // namespace quadwalk
