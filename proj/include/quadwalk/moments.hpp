#pragma once

// Exact moment computation for increment laws.  Infinite moments are
// reported as +inf (or -inf for a mean whose negative part diverges);
// a finite-order ceiling records which absolute moments exist, so
// downstream hypothesis checks can ask for fractional orders.

#include <array>
#include <cmath>
#include <optional>
#include <variant>

#include "distribution.hpp"
#include "quadrature.hpp"

namespace quadwalk {

// Mean magnitudes below this are treated as zero ("assumed centered").
inline constexpr double kCenteredTol = 1e-12;

// Series zeta: sum over k >= 1 of k^{-s}; diverges for s <= 1.  The
// analytic continuation is deliberately not used here.
inline double zeta_series(double s) {
    if (!(s > 1.0)) return kInf;
    return std::riemann_zeta(s);
}

struct MarginalMoments {
    double mean = 0.0;       // may be -inf when the lower tail is too heavy
    double variance = 0.0;   // may be +inf
    double pos_mean = 0.0;   // E max(X,0), may be +inf
    double neg_mean = 0.0;   // E max(-X,0), may be +inf
    double neg_second = 0.0; // E max(-X,0)^2, may be +inf
    double abs_sup = kInf;   // sup { r : E|X|^r < inf }
    double neg_sup = kInf;   // sup { r : E max(-X,0)^r < inf }
    bool exact = true;
    double numeric_error = 0.0;
};

inline MarginalMoments marginal_moments(const Marginal& m) {
    MarginalMoments out;
    if (const auto* f = std::get_if<FiniteSupportMarginal>(&m)) {
        double mean = 0.0;
        for (const auto& [v, p] : f->atoms) mean += p * v;
        double var = 0.0, pos = 0.0, neg = 0.0, neg2 = 0.0;
        for (const auto& [v, p] : f->atoms) {
            var += p * (v - mean) * (v - mean);
            pos += p * std::max(v, 0.0);
            neg += p * std::max(-v, 0.0);
            neg2 += p * std::max(-v, 0.0) * std::max(-v, 0.0);
        }
        out.mean = mean;
        out.variance = var;
        out.pos_mean = pos;
        out.neg_mean = neg;
        out.neg_second = neg2;
        return out;
    }
    if (const auto* g = std::get_if<GaussianMarginal>(&m)) {
        const double mu = g->mean;
        const double var = g->variance;
        out.mean = mu;
        out.variance = var;
        if (var == 0.0) {
            out.pos_mean = std::max(mu, 0.0);
            out.neg_mean = std::max(-mu, 0.0);
            out.neg_second = out.neg_mean * out.neg_mean;
            return out;
        }
        const double sd = std::sqrt(var);
        const double z = mu / sd;
        // E max(X,0) = sd*phi(z) + mu*Phi(z);  E max(-X,0) = E max(X,0) - mu.
        out.pos_mean = sd * normal_pdf(z) + mu * normal_cdf(z);
        out.neg_mean = out.pos_mean - mu;
        // E X^2 1{X<0} = (mu^2+var)*Phi(-z) - mu*sd*phi(z).
        out.neg_second = (mu * mu + var) * normal_cdf(-z) - mu * sd * normal_pdf(z);
        return out;
    }
    const auto& p = std::get<PowerNegativeTailMarginal>(m);
    const double q = p.neg_weight;
    const double z = zeta_series(p.beta);
    out.exact = false;
    out.numeric_error = 1e-12;
    out.abs_sup = p.beta - 1.0;
    out.neg_sup = p.beta - 1.0;
    out.pos_mean = (1.0 - q) * p.pos_value;
    out.neg_mean = p.beta > 2.0 ? q * zeta_series(p.beta - 1.0) / z : kInf;
    out.neg_second = p.beta > 3.0 ? q * zeta_series(p.beta - 2.0) / z : kInf;
    out.mean = out.pos_mean - out.neg_mean;  // -inf when neg_mean diverges
    if (std::isfinite(out.neg_second)) {
        const double ex2 = out.neg_second + (1.0 - q) * p.pos_value * p.pos_value;
        out.variance = ex2 - out.mean * out.mean;
    } else {
        out.variance = kInf;
    }
    return out;
}

struct MomentReport {
    Vec2 mean{};
    std::array<std::array<double, 2>, 2> covariance{};
    std::optional<double> rho;             // undefined unless both variances finite and > 0
    Vec2 pos_part_mean{}, neg_part_mean{}; // entries may be +inf
    Vec2 neg_part_second{};                // E max(-X_i,0)^2
    Vec2 abs_moment_sup{kInf, kInf};
    Vec2 neg_moment_sup{kInf, kInf};
    bool exact = true;
    double numeric_error = 0.0;
    std::array<bool, 2> assumed_centered{false, false};

    // E|X_i|^r finite?  Strict threshold: order sup itself is excluded.
    bool moment_finite(int coord, double r) const {
        const double sup = abs_moment_sup[static_cast<std::size_t>(coord)];
        return sup == kInf || r < sup;
    }
    bool neg_moment_finite(int coord, double r) const {
        const double sup = neg_moment_sup[static_cast<std::size_t>(coord)];
        return sup == kInf || r < sup;
    }
    bool centered(int coord) const {
        const double m = mean[static_cast<std::size_t>(coord)];
        return std::isfinite(m) && std::abs(m) < kCenteredTol;
    }
};

inline MomentReport moments(const IncrementDistribution& d) {
    MomentReport rep;
    if (const auto* f = std::get_if<FiniteSupport2D>(&d)) {
        Vec2 mean{0.0, 0.0};
        for (const auto& a : f->atoms) {
            mean[0] += a.prob * a.value[0];
            mean[1] += a.prob * a.value[1];
        }
        std::array<std::array<double, 2>, 2> cov{{{0.0, 0.0}, {0.0, 0.0}}};
        for (const auto& a : f->atoms) {
            const double d0 = a.value[0] - mean[0];
            const double d1 = a.value[1] - mean[1];
            cov[0][0] += a.prob * d0 * d0;
            cov[0][1] += a.prob * d0 * d1;
            cov[1][1] += a.prob * d1 * d1;
            for (int i = 0; i < 2; ++i) {
                const double v = a.value[static_cast<std::size_t>(i)];
                rep.pos_part_mean[static_cast<std::size_t>(i)] += a.prob * std::max(v, 0.0);
                rep.neg_part_mean[static_cast<std::size_t>(i)] += a.prob * std::max(-v, 0.0);
                rep.neg_part_second[static_cast<std::size_t>(i)] +=
                    a.prob * std::max(-v, 0.0) * std::max(-v, 0.0);
            }
        }
        cov[1][0] = cov[0][1];
        rep.mean = mean;
        rep.covariance = cov;
        if (cov[0][0] > 0.0 && cov[1][1] > 0.0)
            rep.rho = cov[0][1] / std::sqrt(cov[0][0] * cov[1][1]);
    } else if (const auto* g = std::get_if<BivariateGaussian>(&d)) {
        rep.mean = g->mean;
        rep.covariance = g->cov;
        if (g->cov[0][0] > 0.0 && g->cov[1][1] > 0.0)
            rep.rho = g->cov[0][1] / std::sqrt(g->cov[0][0] * g->cov[1][1]);
        for (int i = 0; i < 2; ++i) {
            const auto mm = marginal_moments(
                GaussianMarginal{g->mean[static_cast<std::size_t>(i)],
                                 g->cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]});
            rep.pos_part_mean[static_cast<std::size_t>(i)] = mm.pos_mean;
            rep.neg_part_mean[static_cast<std::size_t>(i)] = mm.neg_mean;
            rep.neg_part_second[static_cast<std::size_t>(i)] = mm.neg_second;
        }
    } else {
        const auto& p = std::get<ProductDistribution>(d);
        const MarginalMoments m1 = marginal_moments(p.coord1);
        const MarginalMoments m2 = marginal_moments(p.coord2);
        rep.mean = {m1.mean, m2.mean};
        rep.covariance = {{{m1.variance, 0.0}, {0.0, m2.variance}}};
        if (std::isfinite(m1.variance) && m1.variance > 0.0 && std::isfinite(m2.variance) &&
            m2.variance > 0.0)
            rep.rho = 0.0;
        rep.pos_part_mean = {m1.pos_mean, m2.pos_mean};
        rep.neg_part_mean = {m1.neg_mean, m2.neg_mean};
        rep.neg_part_second = {m1.neg_second, m2.neg_second};
        rep.abs_moment_sup = {m1.abs_sup, m2.abs_sup};
        rep.neg_moment_sup = {m1.neg_sup, m2.neg_sup};
        rep.exact = m1.exact && m2.exact;
        rep.numeric_error = std::max(m1.numeric_error, m2.numeric_error);
    }
    for (int i = 0; i < 2; ++i) {
        const double m = rep.mean[static_cast<std::size_t>(i)];
        rep.assumed_centered[static_cast<std::size_t>(i)] =
            std::isfinite(m) && m != 0.0 && std::abs(m) < kCenteredTol;
    }
    return rep;
}

// Power-negative-tail marginal with the compensating positive atom placed
// so that the law has the requested mean:  the negative part has mean
// q * zeta(beta-1)/zeta(beta), so the atom sits at
// c = (mean + q * zeta(beta-1)/zeta(beta)) / (1 - q).
inline PowerNegativeTailMarginal make_power_negative_tail(double beta, double mean,
                                                          double neg_weight = 0.5) {
    if (!(beta > 2.0))
        throw std::invalid_argument(
            "power tail: targeting a mean needs beta > 2 (finite negative-part mean)");
    if (!(neg_weight > 0.0 && neg_weight < 1.0))
        throw std::invalid_argument("power tail: weight must lie in (0, 1)");
    const double neg_mean = neg_weight * zeta_series(beta - 1.0) / zeta_series(beta);
    const double c = (mean + neg_mean) / (1.0 - neg_weight);
    if (!(c >= 0.0))
        throw std::invalid_argument(
            "power tail: requested mean is unreachable with a nonnegative atom");
    PowerNegativeTailMarginal m;
    m.beta = beta;
    m.neg_weight = neg_weight;
    m.pos_value = c;
    return m;
}

}  // namespace quadwalk
