#pragma once

// Power-law fit of a survival curve: weighted least squares of
// log(estimate) on log(n), weights the inverse of each point's
// confidence-interval width in log scale.  The decay exponent is the
// negated slope.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "survival.hpp"

namespace quadwalk {

struct InsufficientSurvivorsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExponentFit {
    double exponent = 0.0;        // decay rate r in estimate ~ amplitude * n^{-r}
    double slope = 0.0;           // = -exponent
    double intercept = 0.0;       // log amplitude
    double amplitude = 0.0;
    double stderr_exponent = 0.0;
    double r_squared = 0.0;
    std::int64_t window_lo = 0, window_hi = 0;
    int points_used = 0;
};

// Default window is [n_max/100, n_max]; points with fewer than
// min_survivors surviving paths are dropped.
inline ExponentFit fit_tail_exponent(const SurvivalCurve& curve, std::int64_t window_lo = 0,
                                     std::int64_t window_hi = 0,
                                     std::int64_t min_survivors = 30) {
    if (curve.n.empty()) throw std::invalid_argument("fit_tail_exponent: empty curve");
    const std::int64_t n_max = curve.n.back();
    if (window_hi <= 0) window_hi = n_max;
    if (window_lo <= 0) window_lo = std::max<std::int64_t>(1, n_max / 100);
    if (window_lo >= window_hi)
        throw std::invalid_argument("fit_tail_exponent: window must satisfy lo < hi");

    std::vector<double> t, y, w;
    std::int64_t worst_survivors = -1;
    for (std::size_t j = 0; j < curve.n.size(); ++j) {
        if (curve.n[j] < window_lo || curve.n[j] > window_hi) continue;
        if (curve.survivors[j] < min_survivors) {
            worst_survivors = std::max(worst_survivors, curve.survivors[j]);
            continue;
        }
        const double width = std::log(curve.ci_high[j]) - std::log(curve.ci_low[j]);
        t.push_back(std::log(static_cast<double>(curve.n[j])));
        y.push_back(std::log(curve.estimate[j]));
        w.push_back(1.0 / width);
    }
    if (t.size() < 3) {
        std::string msg = "fit_tail_exponent: only " + std::to_string(t.size()) +
                          " usable points in window [" + std::to_string(window_lo) + ", " +
                          std::to_string(window_hi) + "] with >= " +
                          std::to_string(min_survivors) + " survivors";
        if (worst_survivors >= 0 && worst_survivors < min_survivors) {
            // Scale the path count so the thinnest point clears the threshold.
            const double factor =
                static_cast<double>(min_survivors) /
                std::max(1.0, static_cast<double>(worst_survivors));
            msg += "; rerun with at least " +
                   std::to_string(static_cast<std::int64_t>(
                       std::ceil(static_cast<double>(curve.paths) * 2.0 * factor))) +
                   " paths";
        }
        throw InsufficientSurvivorsError(msg);
    }

    double sw = 0.0, st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sw += w[i];
        st += w[i] * t[i];
        sy += w[i] * y[i];
    }
    const double tbar = st / sw, ybar = sy / sw;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += w[i] * (t[i] - tbar) * (t[i] - tbar);
        sty += w[i] * (t[i] - tbar) * (y[i] - ybar);
    }
    if (!(stt > 0.0)) throw std::invalid_argument("fit_tail_exponent: degenerate abscissae");
    const double slope = sty / stt;
    const double intercept = ybar - slope * tbar;

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - (intercept + slope * t[i]);
        ss_res += w[i] * r * r;
        ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
    }
    const double dof = static_cast<double>(t.size()) - 2.0;
    // Tiny floor keeps the reported uncertainty strictly positive even on
    // noiseless synthetic curves.
    const double s2 = std::max(ss_res / dof, 1e-300);

    ExponentFit fit;
    fit.slope = slope;
    fit.exponent = -slope;
    fit.intercept = intercept;
    fit.amplitude = std::exp(intercept);
    fit.stderr_exponent = std::sqrt(s2 / stt);
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.points_used = static_cast<int>(t.size());
    return fit;
}

}  // namespace quadwalk
