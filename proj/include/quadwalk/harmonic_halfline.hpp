#pragma once

// Harmonic function of the centered one-dimensional walk killed when it
// leaves (0, inf):  h1(x) = x - g1(x), where g1(x) = E(x + S(tau_x); tau_x
// < infinity) <= 0 is the expected (signed) overshoot at the exit step.
// Two constructions:
//   * h1_estimate      - Monte Carlo over killed paths with a fixed horizon;
//                        paths still alive at the horizon contribute zero
//                        overshoot, and the induced one-sided bias is bounded
//                        via Cauchy-Schwarz from the censored fraction.
//   * h1_exact_lattice - solves the killed harmonicity equations
//                        h1(i) = E( h1(i + X) ; i + X >= 1 ) on {1, ..., L}
//                        with boundary closure h1(y) = y for y > L, as a
//                        banded linear system.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "distribution.hpp"
#include "lyapunov.hpp"
#include "moments.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace quadwalk {

enum class HarmonicMethod { monte_carlo, lattice_exact };

inline const char* to_string(HarmonicMethod m) {
    return m == HarmonicMethod::monte_carlo ? "monte_carlo" : "lattice_exact";
}

struct HarmonicEstimate {
    std::vector<double> point;  // one coordinate for h1, two for the quadrant h
    double value = 0.0;
    double stat_error = 0.0;  // zero for the exact solver
    // Absent = "none": no truncation/censoring error source applies.
    std::optional<double> truncation_bias_bound;
    HarmonicMethod method = HarmonicMethod::monte_carlo;
    std::int64_t horizon = 0;        // monte_carlo
    std::int64_t paths = 0;          // monte_carlo
    std::int64_t truncation = 0;     // lattice_exact: closure level L
    double censored_fraction = 0.0;  // monte_carlo diagnostic
    bool positivity_violation = false;
};

namespace detail {

struct OvershootAccumulator {
    double sum = 0.0;     // sum of exit values (x + S(tau)), censored -> 0
    double sumsq = 0.0;   // sum of their squares
    std::int64_t censored = 0;
};

inline void require_centered_finite_variance(const MarginalMoments& mm, const char* who) {
    if (!(std::abs(mm.mean) < kCenteredTol))
        throw std::invalid_argument(std::string(who) + ": marginal must be centered");
    if (!std::isfinite(mm.variance))
        throw std::invalid_argument(std::string(who) + ": marginal needs a finite second moment");
}

}  // namespace detail

inline HarmonicEstimate h1_estimate(const Marginal& marginal, double x, std::int64_t horizon,
                                    std::int64_t paths, std::uint64_t master_seed,
                                    int workers = 0) {
    if (!(x > 0.0)) throw std::invalid_argument("h1_estimate: x must be > 0");
    if (horizon < 1 || paths < 1)
        throw std::invalid_argument("h1_estimate: horizon and paths must be >= 1");
    detail::require_centered_finite_variance(marginal_moments(marginal), "h1_estimate");
    validate(marginal);
    const MarginalSampler sampler(marginal);

    const std::int64_t block = kDefaultBlockSize;
    const auto nblocks = static_cast<std::size_t>((paths + block - 1) / block);
    std::vector<detail::OvershootAccumulator> acc(nblocks);
    for_each_block(paths, block, workers,
                           [&](std::size_t bi, std::int64_t begin, std::int64_t end) {
                               auto& a = acc[bi];
                               for (std::int64_t p = begin; p < end; ++p) {
                                   RngStream rng = RngStream::for_path(master_seed, p);
                                   double pos = x;
                                   bool exited = false;
                                   for (std::int64_t n = 0; n < horizon; ++n) {
                                       pos += sampler.draw(rng);
                                       if (pos <= 0.0) {
                                           exited = true;
                                           break;
                                       }
                                   }
                                   if (exited) {
                                       a.sum += pos;
                                       a.sumsq += pos * pos;
                                   } else {
                                       ++a.censored;
                                   }
                               }
                           });
    double sum = 0.0, sumsq = 0.0;
    std::int64_t censored = 0;
    for (const auto& a : acc) {  // fixed block order => deterministic float sums
        sum += a.sum;
        sumsq += a.sumsq;
        censored += a.censored;
    }
    const double n = static_cast<double>(paths);
    const double mean_o = sum / n;
    const double var_o = std::max(0.0, sumsq / n - mean_o * mean_o);

    HarmonicEstimate est;
    est.point = {x};
    est.value = x - mean_o;
    est.stat_error = std::sqrt(var_o / n);
    est.method = HarmonicMethod::monte_carlo;
    est.horizon = horizon;
    est.paths = paths;
    est.censored_fraction = static_cast<double>(censored) / n;
    // Censoring drops overshoot terms that are <= 0, so the estimate sits
    // below the limit value; Cauchy-Schwarz with the empirical second
    // moment of observed exit values bounds the gap.
    est.truncation_bias_bound = std::sqrt((sumsq / n) * est.censored_fraction);
    return est;
}

class LatticeHarmonic1D {
  public:
    LatticeHarmonic1D(const FiniteSupportMarginal& marginal, std::int64_t truncation)
        : truncation_(truncation) {
        validate(marginal);
        detail::require_centered_finite_variance(marginal_moments(Marginal{marginal}),
                                                 "lattice harmonic solver");
        std::int64_t vmin = 0, vmax = 0;
        std::vector<std::pair<std::int64_t, double>> atoms;
        for (const auto& [v, p] : marginal.atoms) {
            if (v != std::floor(v) || std::abs(v) > 1e15)
                throw std::invalid_argument(
                    "lattice harmonic solver: support must lie on the integer lattice");
            const auto iv = static_cast<std::int64_t>(std::llround(v));
            atoms.emplace_back(iv, p);
            vmin = std::min(vmin, iv);
            vmax = std::max(vmax, iv);
        }
        if (vmin >= 0 || vmax <= 0)
            throw std::invalid_argument(
                "lattice harmonic solver: centered law must step both ways");
        const std::int64_t width = vmax - vmin;
        if (truncation < 2 * width)
            throw std::invalid_argument(
                "lattice harmonic solver: truncation L must exceed twice the support width");

        solve(atoms, vmin, vmax);
        atoms_ = std::move(atoms);

        const LyapunovSpec lyap = LyapunovSpec::build(Marginal{marginal});
        // h1 is squeezed between x and V(x) = x + A m(x) + R, so values
        // beyond the closure level satisfy |h1(y)/y - 1| <= (A m(L) + R)/L;
        // scaled by L this caps the closure-induced error.
        bias_bound_ = lyap.A() * lyap.m(static_cast<double>(truncation)) + lyap.R();
    }

    std::int64_t truncation() const { return truncation_; }
    double truncation_bias_bound() const { return bias_bound_; }

    double value(std::int64_t x) const {
        if (x < 1 || x > truncation_)
            throw std::invalid_argument("lattice harmonic value: x must be in {1, ..., L}");
        return h_[static_cast<std::size_t>(x - 1)];
    }

    // Residual of h1(x) = E( h1(x + X) ; x + X >= 1 ) with the closure
    // extension; machine-zero at every interior point by construction.
    double residual(std::int64_t x) const {
        double e = 0.0;
        for (const auto& [v, p] : atoms_) {
            const std::int64_t y = x + v;
            if (y >= 1) e += p * extended(y);
        }
        return value(x) - e;
    }

    double min_on_unit_interval() const { return h_.front(); }  // lattice point x = 1

    HarmonicEstimate estimate(std::int64_t x) const {
        HarmonicEstimate est;
        est.point = {static_cast<double>(x)};
        est.value = value(x);
        est.stat_error = 0.0;
        est.truncation_bias_bound = bias_bound_;
        est.method = HarmonicMethod::lattice_exact;
        est.truncation = truncation_;
        return est;
    }

  private:
    double extended(std::int64_t y) const {
        if (y > truncation_) return static_cast<double>(y);
        return h_[static_cast<std::size_t>(y - 1)];
    }

    void solve(const std::vector<std::pair<std::int64_t, double>>& atoms, std::int64_t vmin,
               std::int64_t vmax) {
        const auto L = static_cast<std::size_t>(truncation_);
        const auto kl = static_cast<std::size_t>(-vmin);
        const auto ku = static_cast<std::size_t>(vmax);
        const std::size_t width = kl + ku + 1;
        // band[i][d + kl] holds matrix entry (i, i + d), d in [-kl, ku].
        std::vector<double> band(L * width, 0.0);
        std::vector<double> rhs(L, 0.0);
        auto at = [&](std::size_t i, std::size_t j) -> double& {
            return band[i * width + (j + kl - i)];
        };
        for (std::size_t i = 0; i < L; ++i) {
            const auto xi = static_cast<std::int64_t>(i) + 1;
            at(i, i) += 1.0;
            for (const auto& [v, p] : atoms) {
                const std::int64_t y = xi + v;
                if (y < 1) continue;  // killed
                if (y > truncation_)
                    rhs[i] += p * static_cast<double>(y);  // closure h1(y) = y
                else
                    at(i, static_cast<std::size_t>(y - 1)) -= p;
            }
        }
        // Banded Gaussian elimination without pivoting; the system is an
        // irreducibly diagonally dominant M-matrix, so pivots stay away
        // from zero unless the law is degenerate.
        for (std::size_t k = 0; k < L; ++k) {
            const double piv = at(k, k);
            if (std::abs(piv) < 1e-12)
                throw std::runtime_error("lattice harmonic solver: singular system");
            const std::size_t ilast = std::min(k + kl, L - 1);
            const std::size_t jlast = std::min(k + ku, L - 1);
            for (std::size_t i = k + 1; i <= ilast; ++i) {
                const double f = at(i, k) / piv;
                if (f == 0.0) continue;
                for (std::size_t j = k; j <= jlast; ++j) at(i, j) -= f * at(k, j);
                rhs[i] -= f * rhs[k];
            }
        }
        h_.assign(L, 0.0);
        for (std::size_t k = L; k-- > 0;) {
            double s = rhs[k];
            const std::size_t jlast = std::min(k + ku, L - 1);
            for (std::size_t j = k + 1; j <= jlast; ++j) s -= at(k, j) * h_[j];
            h_[k] = s / at(k, k);
        }
    }

    std::int64_t truncation_;
    std::vector<std::pair<std::int64_t, double>> atoms_;
    std::vector<double> h_;
    double bias_bound_ = 0.0;
};

inline HarmonicEstimate h1_exact_lattice(const FiniteSupportMarginal& marginal, std::int64_t x,
                                         std::int64_t truncation) {
    return LatticeHarmonic1D(marginal, truncation).estimate(x);
}

}  // namespace quadwalk
