#pragma once

// Shared builders for the laws used across the test suite.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "quadwalk/distribution.hpp"

namespace qt {

using quadwalk::FiniteSupport2D;
using quadwalk::FiniteSupportMarginal;
using quadwalk::GaussianMarginal;
using quadwalk::IncrementDistribution;
using quadwalk::Marginal;
using quadwalk::ProductDistribution;
using quadwalk::Vec2;

// Symmetric simple walk step: +1 or -1 with probability 1/2.
inline FiniteSupportMarginal pm1() { return {{{1.0, 0.5}, {-1.0, 0.5}}}; }

// Centered lattice law with a two-step down move: +1 w.p. 2/3, -2 w.p. 1/3.
inline FiniteSupportMarginal skip21() { return {{{1.0, 2.0 / 3.0}, {-2.0, 1.0 / 3.0}}}; }

// Upward drift: +1 w.p. 3/4, -1 w.p. 1/4 (mean +1/2).
inline FiniteSupportMarginal up_drift() { return {{{1.0, 0.75}, {-1.0, 0.25}}}; }

// Downward drift: +1 w.p. 1/4, -1 w.p. 3/4 (mean -1/2).
inline FiniteSupportMarginal down_drift() { return {{{1.0, 0.25}, {-1.0, 0.75}}}; }

inline IncrementDistribution product2d(Marginal a, Marginal b) {
    return ProductDistribution{std::move(a), std::move(b)};
}

// Independent symmetric +-1 coordinates (correlation 0).
inline IncrementDistribution pm1_squared() { return product2d(pm1(), pm1()); }

// Lattice law on {-1,+1}^2 with both coordinates centered and
// correlation rho (requires |rho| <= 1 representable: rho = 2b - 2a).
inline IncrementDistribution lattice_rho(double rho) {
    const double b = 0.25 * (1.0 + rho);  // mass on (+1,+1) and (-1,-1)
    const double a = 0.25 * (1.0 - rho);  // mass on (+1,-1) and (-1,+1)
    FiniteSupport2D d;
    d.atoms = {{{1.0, 1.0}, b}, {{-1.0, -1.0}, b}, {{1.0, -1.0}, a}, {{-1.0, 1.0}, a}};
    return d;
}

// Standard bivariate Gaussian with correlation rho.
inline IncrementDistribution gauss2d(double rho) {
    quadwalk::BivariateGaussian g;
    g.mean = {0.0, 0.0};
    g.cov = {{{1.0, rho}, {rho, 1.0}}};
    return g;
}

// Mixed regime: coordinate 1 centered +-1, coordinate 2 drifts up by 1/2.
inline IncrementDistribution mixed_drift() { return product2d(pm1(), up_drift()); }

}  // namespace qt
