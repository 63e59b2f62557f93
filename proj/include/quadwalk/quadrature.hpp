#pragma once

// Adaptive Simpson quadrature plus standard normal helpers.  The
// integrator splits an interval until the classical Richardson error
// estimate for the pair of half-interval Simpson rules is below the
// per-interval share of the absolute tolerance.

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace quadwalk {

inline double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// P[Z <= z] for standard normal, via erfc for accuracy in both tails.
inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// P[Z > z].
inline double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Integrate f over [a,b] to absolute tolerance abs_tol.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol, int max_depth = 48) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

// P[Z1 > a, Z2 > b] for standard bivariate normal with correlation rho,
// reduced to a one-dimensional integral over the first coordinate:
//   integral_a^inf phi(z) * Phi_bar((b - rho z) / sqrt(1-rho^2)) dz.
inline double bivariate_normal_quadrant_sf(double a, double b, double rho,
                                           double abs_tol = 1e-8) {
    if (!(rho > -1.0 && rho < 1.0)) {
        throw std::invalid_argument("bivariate_normal_quadrant_sf: |rho| must be < 1");
    }
    const double s = std::sqrt(1.0 - rho * rho);
    const auto integrand = [&](double z) {
        return normal_pdf(z) * normal_sf((b - rho * z) / s);
    };
    // Truncate where the first-coordinate density is negligible.
    const double hi = std::max(a, 0.0) + 40.0;
    if (hi <= a) return 0.0;
    return integrate(integrand, a, hi, abs_tol);
}

}  // namespace quadwalk
