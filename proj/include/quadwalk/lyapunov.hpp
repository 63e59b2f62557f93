#pragma once

// Superharmonic (Lyapunov) function V(x) = x + A*m(x) + R for the
// centered one-dimensional walk killed on leaving (0, inf), built from
//   a(x) = -E(x+X ; x+X <= 0)      (equivalently E (X^- - x)^+ )
//   b(x) = (1/2) E ((X^- - x)^+)^2
//   m(x) = integral of b over [0, x]
//   A    = 4 / E (X^-)^2
//   x0   = smallest root of 2 A b(x/2) - 1   (the map is non-increasing,
//          starts at 3 > 0)
//   R    = 3 E(X^-) / F(-x0) if F(-x0) > 0, else 3 x0
// Finite-support laws use exact piecewise-polynomial closed forms via
// suffix power sums.  Other laws are handled by layered quadrature:
// a and b from cached composite Gauss-Legendre tail integrals of the
// lower-tail CDF (absolute error well under 1e-10), and m by cumulative
// integration on a geometric grid with linear interpolation in between.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "distribution.hpp"
#include "moments.hpp"
#include "quadrature.hpp"

namespace quadwalk {

namespace detail {

template <class F>
double gauss5(const F& f, double lo, double hi) {
    static constexpr double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                     0.5384693101056831, 0.9061798459386640};
    static constexpr double ws[5] = {0.2369268850561891, 0.4786286704993665,
                                     0.5688888888888889, 0.4786286704993665,
                                     0.2369268850561891};
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += ws[i] * f(c + r * xs[i]);
    return s * r;
}

}  // namespace detail

class LyapunovSpec {
  public:
    static LyapunovSpec build(const Marginal& marginal) {
        LyapunovSpec spec;
        const MarginalMoments mm = marginal_moments(marginal);
        if (!(std::abs(mm.mean) < kCenteredTol))
            throw std::invalid_argument("lyapunov: marginal must be centered");
        if (!(mm.neg_second > 0.0) || !std::isfinite(mm.neg_second))
            throw std::invalid_argument(
                "lyapunov: need 0 < E(X^-)^2 < infinity (negative part not a.s. 0)");
        spec.neg_mean_ = mm.neg_mean;
        spec.neg_second_ = mm.neg_second;
        spec.A_ = 4.0 / mm.neg_second;

        if (const auto* f = std::get_if<FiniteSupportMarginal>(&marginal)) {
            spec.init_atoms(f->atoms);
        } else if (const auto* g = std::get_if<GaussianMarginal>(&marginal)) {
            spec.init_gaussian(std::sqrt(g->variance));
        } else {
            const auto& p = std::get<PowerNegativeTailMarginal>(marginal);
            spec.init_atoms(truncated_power_atoms(p));
            spec.truncated_tail_ = true;
        }
        spec.solve_x0();
        const double f0 = spec.neg_tail_cdf(spec.x0_);
        spec.R_ = f0 > 0.0 ? 3.0 * spec.neg_mean_ / f0 : 3.0 * spec.x0_;
        return spec;
    }

    double A() const { return A_; }
    double x0() const { return x0_; }
    double R() const { return R_; }
    double neg_mean() const { return neg_mean_; }
    double neg_second() const { return neg_second_; }
    bool exact_closed_form() const {
        return std::holds_alternative<FiniteRep>(rep_) && !truncated_tail_;
    }

    double a(double x) const {
        if (x < 0.0) throw std::invalid_argument("lyapunov a: x must be >= 0");
        if (const auto* f = std::get_if<FiniteRep>(&rep_)) {
            const std::size_t k = f->suffix_index(x);
            return f->s1[k] - x * f->s0[k];
        }
        const auto& g = std::get<GaussRep>(rep_);
        return g.tail_eval(g.suffix_a, x, [&](double s) { return normal_cdf(-s / g.sigma); });
    }

    double b(double x) const {
        if (x < 0.0) throw std::invalid_argument("lyapunov b: x must be >= 0");
        if (const auto* f = std::get_if<FiniteRep>(&rep_)) {
            const std::size_t k = f->suffix_index(x);
            return 0.5 * (f->s2[k] - 2.0 * x * f->s1[k] + x * x * f->s0[k]);
        }
        const auto& g = std::get<GaussRep>(rep_);
        return g.tail_eval(g.suffix_b, x, [&](double s) { return this->a(s); });
    }

    double m(double x) const {
        if (x < 0.0) throw std::invalid_argument("lyapunov m: x must be >= 0");
        if (const auto* f = std::get_if<FiniteRep>(&rep_)) {
            const std::size_t k = f->suffix_index(x);
            const double cube =
                f->s3[k] - 3.0 * x * f->s2[k] + 3.0 * x * x * f->s1[k] - x * x * x * f->s0[k];
            return (f->t3_total - cube) / 6.0;
        }
        const auto& g = std::get<GaussRep>(rep_);
        if (x >= g.m_knots.back()) return g.m_vals.back();
        const auto it = std::upper_bound(g.m_knots.begin(), g.m_knots.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - g.m_knots.begin());
        // k >= 1 since m_knots[0] = 0 <= x.
        const double xl = g.m_knots[k - 1], xr = g.m_knots[k];
        const double f01 = (x - xl) / (xr - xl);
        return g.m_vals[k - 1] + f01 * (g.m_vals[k] - g.m_vals[k - 1]);
    }

    double m_limit() const {
        if (const auto* f = std::get_if<FiniteRep>(&rep_)) return f->t3_total / 6.0;
        return std::get<GaussRep>(rep_).m_vals.back();
    }

    double V(double x) const { return x + A_ * m(x) + R_; }

    // F(-t) = P[X <= -t] for t >= 0.
    double neg_tail_cdf(double t) const {
        if (const auto* f = std::get_if<FiniteRep>(&rep_)) {
            const auto it = std::lower_bound(f->t.begin(), f->t.end(), t);
            return f->s0[static_cast<std::size_t>(it - f->t.begin())];
        }
        const auto& g = std::get<GaussRep>(rep_);
        return normal_cdf(-t / g.sigma);
    }

    // One-step drift of V for the killed walk:
    //   delta(x) = E[ V(x + X) ; x + X > 0 ] - V(x),  x >= 0.
    double delta(double x) const {
        if (x < 0.0) throw std::invalid_argument("lyapunov delta: x must be >= 0");
        if (const auto* f = std::get_if<FiniteRep>(&rep_)) {
            double e = 0.0;
            for (const auto& [v, p] : f->atoms)
                if (x + v > 0.0) e += p * V(x + v);
            return e - V(x);
        }
        const auto& g = std::get<GaussRep>(rep_);
        const double hi = x + 12.0 * g.sigma;
        const double e = integrate(
            [&](double z) { return V(z) * normal_pdf((z - x) / g.sigma) / g.sigma; }, 0.0, hi,
            1e-9);
        return e - V(x);
    }

  private:
    struct FiniteRep {
        std::vector<std::pair<double, double>> atoms;  // full law
        std::vector<double> t;                         // ascending magnitudes of negative atoms
        // Suffix power sums: sN[k] = sum over i >= k of p_i * t_i^N (size t.size()+1).
        std::vector<double> s0, s1, s2, s3;
        double t3_total = 0.0;

        // First index with t[i] > x; atoms at exactly x contribute zero to
        // a/b/m so either side of the tie is equivalent there.
        std::size_t suffix_index(double x) const {
            return static_cast<std::size_t>(
                std::upper_bound(t.begin(), t.end(), x) - t.begin());
        }
    };

    struct GaussRep {
        double sigma = 1.0;
        double h = 0.0, xmax = 0.0;
        std::vector<double> suffix_a, suffix_b;  // tail integrals at segment left edges
        std::vector<double> m_knots, m_vals;

        // Tail integral from x to xmax of f, using cached suffix values at
        // segment boundaries plus a partial Gauss-Legendre piece.
        template <class F>
        double tail_eval(const std::vector<double>& suffix, double x, const F& f) const {
            if (x >= xmax) return 0.0;
            const auto k = static_cast<std::size_t>(x / h);
            const double edge = h * static_cast<double>(k + 1);
            if (k + 1 >= suffix.size()) return detail::gauss5(f, x, xmax);
            return detail::gauss5(f, x, edge) + suffix[k + 1];
        }
    };

    void init_atoms(const std::vector<std::pair<double, double>>& atoms) {
        FiniteRep rep;
        rep.atoms = atoms;
        std::vector<std::pair<double, double>> neg;  // (t, p), t > 0
        for (const auto& [v, p] : atoms)
            if (v < 0.0) neg.emplace_back(-v, p);
        std::sort(neg.begin(), neg.end());
        const std::size_t n = neg.size();
        rep.t.resize(n);
        rep.s0.assign(n + 1, 0.0);
        rep.s1.assign(n + 1, 0.0);
        rep.s2.assign(n + 1, 0.0);
        rep.s3.assign(n + 1, 0.0);
        for (std::size_t i = n; i-- > 0;) {
            rep.t[i] = neg[i].first;
            const double p = neg[i].second, t = neg[i].first;
            rep.s0[i] = rep.s0[i + 1] + p;
            rep.s1[i] = rep.s1[i + 1] + p * t;
            rep.s2[i] = rep.s2[i + 1] + p * t * t;
            rep.s3[i] = rep.s3[i + 1] + p * t * t * t;
        }
        rep.t3_total = rep.s3.empty() ? 0.0 : rep.s3[0];
        rep_ = std::move(rep);
    }

    void init_gaussian(double sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("lyapunov: zero-variance gaussian");
        GaussRep g;
        g.sigma = sigma;
        const int nseg = 600;
        g.xmax = 12.0 * sigma;
        g.h = g.xmax / nseg;
        auto cdf_tail = [&](double s) { return normal_cdf(-s / sigma); };
        g.suffix_a.assign(nseg + 1, 0.0);
        for (int k = nseg; k-- > 0;)
            g.suffix_a[static_cast<std::size_t>(k)] =
                g.suffix_a[static_cast<std::size_t>(k) + 1] +
                detail::gauss5(cdf_tail, g.h * k, g.h * (k + 1));
        rep_ = g;  // a() now works; build b on top of it
        auto& gr = std::get<GaussRep>(rep_);
        auto a_eval = [&](double s) { return this->a(s); };
        gr.suffix_b.assign(nseg + 1, 0.0);
        for (int k = nseg; k-- > 0;)
            gr.suffix_b[static_cast<std::size_t>(k)] =
                gr.suffix_b[static_cast<std::size_t>(k) + 1] +
                detail::gauss5(a_eval, gr.h * k, gr.h * (k + 1));
        // Geometric knots for m with linear interpolation between them.
        gr.m_knots.push_back(0.0);
        gr.m_vals.push_back(0.0);
        const double ratio = 1.001;
        double xk = 1e-4 * sigma;
        auto b_eval = [&](double s) { return this->b(s); };
        while (true) {
            const double prev = gr.m_knots.back();
            const double node = std::min(xk, gr.xmax);
            gr.m_knots.push_back(node);
            gr.m_vals.push_back(gr.m_vals.back() + detail::gauss5(b_eval, prev, node));
            if (node >= gr.xmax) break;
            xk *= ratio;
        }
    }

    // Tail sum  sum_{k > K} k^{-s}  by Euler-Maclaurin; relative error
    // O(K^-4), and free of the catastrophic cancellation a zeta-minus-partial
    // difference would have.
    static double power_tail_sum(double s, double k_last) {
        const double k = k_last;
        return std::pow(k, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(k, -s) +
               s * std::pow(k, -s - 1.0) / 12.0 -
               s * (s + 1.0) * (s + 2.0) * std::pow(k, -s - 3.0) / 720.0;
    }

    static std::vector<std::pair<double, double>> truncated_power_atoms(
        const PowerNegativeTailMarginal& p) {
        if (!(p.beta > 3.0))
            throw std::invalid_argument(
                "lyapunov: power-tail marginal needs beta > 3 for a finite E(X^-)^2");
        const double z = zeta_series(p.beta);
        const double total_second = p.neg_weight * zeta_series(p.beta - 2.0) / z;
        std::vector<std::pair<double, double>> atoms;
        atoms.emplace_back(p.pos_value, 1.0 - p.neg_weight);
        double covered = 0.0, covered_second = 0.0;
        constexpr std::int64_t kAtomBudget = 400'000;
        for (std::int64_t k = 1;; ++k) {
            const double pk =
                p.neg_weight * std::pow(static_cast<double>(k), -p.beta) / z;
            atoms.emplace_back(-static_cast<double>(k), pk);
            covered += pk;
            covered_second += pk * static_cast<double>(k) * static_cast<double>(k);
            if (total_second - covered_second < 1e-12 * total_second) {
                // Park the residual mass at 0 so the law still sums to one.
                // An atom at 0 never contributes to a, b, or m; parking on the
                // last atom instead would add mass * k^2 to the second moment,
                // amplifying even summation roundoff to visible size.
                const double resid = p.neg_weight - covered;
                if (resid > 0.0) atoms.emplace_back(0.0, resid);
                break;
            }
            if (k == kAtomBudget) {
                // Slowly converging tail (beta not far above 3).  Close it
                // with a surrogate pair of atoms that reproduces the residual
                // tail's mass, first and second moments exactly: one atom at
                // t* = mu2/mu1 carrying mu1^2/mu2, and the mass balance at 0
                // (which never contributes to a, b, or m).
                const double kk = static_cast<double>(k);
                const double mu0 = p.neg_weight * power_tail_sum(p.beta, kk) / z;
                const double mu1 = p.neg_weight * power_tail_sum(p.beta - 1.0, kk) / z;
                const double mu2 = p.neg_weight * power_tail_sum(p.beta - 2.0, kk) / z;
                const double t_star = mu2 / mu1;
                const double w_star = mu1 * mu1 / mu2;
                atoms.emplace_back(-t_star, w_star);
                if (mu0 > w_star) atoms.emplace_back(0.0, mu0 - w_star);
                break;
            }
        }
        return atoms;
    }

    void solve_x0() {
        const auto g = [&](double x) { return 2.0 * A_ * b(0.5 * x) - 1.0; };
        double lo = 0.0, hi = 1.0;
        int grow = 0;
        while (g(hi) > 0.0) {
            lo = hi;
            hi *= 2.0;
            if (++grow > 200)
                throw std::runtime_error("lyapunov: no sign change found for x0 bracket");
        }
        // b is non-increasing, so g is non-increasing: bisection converges
        // to the smallest root.
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            if (g(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        x0_ = 0.5 * (lo + hi);
    }

    // monostate first: nested alternatives with default member initializers
    // are not yet default-constructible when this member is declared.
    std::variant<std::monostate, FiniteRep, GaussRep> rep_;
    double A_ = 0.0, x0_ = 0.0, R_ = 0.0;
    double neg_mean_ = 0.0, neg_second_ = 0.0;
    bool truncated_tail_ = false;  // heavy-tail law represented by truncated atoms
};

inline LyapunovSpec build_lyapunov(const Marginal& centered) {
    return LyapunovSpec::build(centered);
}

struct SuperharmonicReport {
    std::vector<double> grid, delta;
    double max_delta = -kInf;
    double argmax = 0.0;

    bool pass(double tol) const { return max_delta <= tol; }
};

inline SuperharmonicReport superharmonic_check(const LyapunovSpec& spec,
                                               const std::vector<double>& grid) {
    SuperharmonicReport rep;
    rep.grid = grid;
    rep.delta.reserve(grid.size());
    for (const double x : grid) {
        const double d = spec.delta(x);
        rep.delta.push_back(d);
        if (d > rep.max_delta) {
            rep.max_delta = d;
            rep.argmax = x;
        }
    }
    return rep;
}

}  // namespace quadwalk
