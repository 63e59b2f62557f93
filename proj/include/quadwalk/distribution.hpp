#pragma once

// Increment distribution model for the planar walk.  A distribution is
// one of: a finite set of atoms in R^2, a bivariate Gaussian, or a
// product of two independent marginals.  Marginals are finite-support,
// Gaussian, or the heavy-lower-tail family with P[X = -k] proportional
// to k^{-beta} on k >= 1 plus one compensating positive atom.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rng.hpp"

namespace quadwalk {

using Vec2 = std::array<double, 2>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Marginal (one-dimensional) laws.

struct FiniteSupportMarginal {
    // (value, probability) atoms; probabilities sum to 1 within 1e-12.
    std::vector<std::pair<double, double>> atoms;
};

struct GaussianMarginal {
    double mean = 0.0;
    double variance = 1.0;
};

// P[X = -k] = weight * k^{-beta} / zeta(beta) for integer k >= 1,
// P[X = pos_value] = 1 - weight.
struct PowerNegativeTailMarginal {
    double beta = 3.0;
    double neg_weight = 0.5;
    double pos_value = 0.0;
};

using Marginal =
    std::variant<FiniteSupportMarginal, GaussianMarginal, PowerNegativeTailMarginal>;

// ---------------------------------------------------------------------------
// Planar increment laws.

struct FiniteSupport2D {
    struct Atom {
        Vec2 value;
        double prob;
    };
    std::vector<Atom> atoms;
};

struct BivariateGaussian {
    Vec2 mean{0.0, 0.0};
    std::array<std::array<double, 2>, 2> cov{{{1.0, 0.0}, {0.0, 1.0}}};
};

struct ProductDistribution {
    Marginal coord1;
    Marginal coord2;
};

using IncrementDistribution =
    std::variant<FiniteSupport2D, BivariateGaussian, ProductDistribution>;

// ---------------------------------------------------------------------------
// Validation.  Throws std::invalid_argument with a descriptive message.

inline void validate(const FiniteSupportMarginal& m) {
    if (m.atoms.empty()) throw std::invalid_argument("finite marginal: no atoms");
    double total = 0.0;
    for (const auto& [v, p] : m.atoms) {
        if (!std::isfinite(v)) throw std::invalid_argument("finite marginal: non-finite value");
        if (!(p > 0.0)) throw std::invalid_argument("finite marginal: probabilities must be > 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("finite marginal: probabilities sum to " +
                                    std::to_string(total) + ", expected 1");
}

inline void validate(const GaussianMarginal& m) {
    if (!std::isfinite(m.mean) || !std::isfinite(m.variance) || m.variance < 0.0)
        throw std::invalid_argument("gaussian marginal: need finite mean and variance >= 0");
}

inline void validate(const PowerNegativeTailMarginal& m) {
    if (!(m.beta > 1.0))
        throw std::invalid_argument("power tail marginal: beta must be > 1");
    if (!(m.neg_weight > 0.0 && m.neg_weight < 1.0))
        throw std::invalid_argument("power tail marginal: weight must lie in (0,1)");
    if (!std::isfinite(m.pos_value) || m.pos_value < 0.0)
        throw std::invalid_argument("power tail marginal: positive atom must be >= 0");
}

inline void validate(const Marginal& m) {
    std::visit([](const auto& x) { validate(x); }, m);
}

inline void validate(const FiniteSupport2D& d) {
    if (d.atoms.empty()) throw std::invalid_argument("finite 2d law: no atoms");
    double total = 0.0;
    for (const auto& a : d.atoms) {
        if (!std::isfinite(a.value[0]) || !std::isfinite(a.value[1]))
            throw std::invalid_argument("finite 2d law: non-finite atom");
        if (!(a.prob > 0.0))
            throw std::invalid_argument("finite 2d law: probabilities must be > 0");
        total += a.prob;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("finite 2d law: probabilities sum to " +
                                    std::to_string(total) + ", expected 1");
}

inline void validate(const BivariateGaussian& d) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!std::isfinite(d.cov[i][j]))
                throw std::invalid_argument("bivariate gaussian: non-finite covariance");
    if (!std::isfinite(d.mean[0]) || !std::isfinite(d.mean[1]))
        throw std::invalid_argument("bivariate gaussian: non-finite mean");
    const double scale = std::max({std::abs(d.cov[0][0]), std::abs(d.cov[1][1]), 1.0});
    if (std::abs(d.cov[0][1] - d.cov[1][0]) > 1e-12 * scale)
        throw std::invalid_argument("bivariate gaussian: covariance not symmetric");
    if (d.cov[0][0] < 0.0 || d.cov[1][1] < 0.0)
        throw std::invalid_argument("bivariate gaussian: negative variance");
    const double det = d.cov[0][0] * d.cov[1][1] - d.cov[0][1] * d.cov[1][0];
    if (det < -1e-12 * scale * scale)
        throw std::invalid_argument("bivariate gaussian: covariance not positive semidefinite");
}

inline void validate(const ProductDistribution& d) {
    validate(d.coord1);
    validate(d.coord2);
}

inline void validate(const IncrementDistribution& d) {
    std::visit([](const auto& x) { validate(x); }, d);
}

// ---------------------------------------------------------------------------
// Sampling.

// Zipf(beta) on {1,2,...}: P[K = k] = k^{-beta}/zeta(beta).  Rejection
// from the Pareto envelope (Devroye, ch. X.6); expected O(1) trials.
inline std::uint64_t zipf_sample(double beta, RngStream& rng) {
    const double am1 = beta - 1.0;
    const double b = std::pow(2.0, am1);
    for (;;) {
        const double u = 1.0 - rng.uniform01();  // (0,1]
        const double v = rng.uniform01();
        const double x = std::floor(std::pow(u, -1.0 / am1));
        if (x < 1.0 || x >= 9.007199254740992e15) continue;
        const double t = std::pow(1.0 + 1.0 / x, am1);
        if (v * x * (t - 1.0) / (b - 1.0) <= t / b) return static_cast<std::uint64_t>(x);
    }
}

class MarginalSampler {
  public:
    explicit MarginalSampler(const Marginal& m) {
        if (const auto* f = std::get_if<FiniteSupportMarginal>(&m)) {
            kind_ = Kind::finite;
            double cum = 0.0;
            for (const auto& [v, p] : f->atoms) {
                cum += p;
                values_.push_back(v);
                cum_.push_back(cum);
            }
            cum_.back() = 1.0;  // absorb the <=1e-12 rounding slack
        } else if (const auto* g = std::get_if<GaussianMarginal>(&m)) {
            kind_ = Kind::gaussian;
            mean_ = g->mean;
            sd_ = std::sqrt(g->variance);
        } else {
            const auto& p = std::get<PowerNegativeTailMarginal>(m);
            kind_ = Kind::power_tail;
            beta_ = p.beta;
            neg_weight_ = p.neg_weight;
            pos_value_ = p.pos_value;
        }
    }

    double draw(RngStream& rng) const {
        switch (kind_) {
            case Kind::finite: {
                const double u = rng.uniform01();
                const auto it = std::lower_bound(cum_.begin(), cum_.end(), u,
                                                 [](double c, double x) { return c <= x; });
                return values_[static_cast<std::size_t>(it - cum_.begin())];
            }
            case Kind::gaussian:
                return mean_ + sd_ * rng.normal();
            default:
                if (rng.uniform01() < neg_weight_)
                    return -static_cast<double>(zipf_sample(beta_, rng));
                return pos_value_;
        }
    }

  private:
    enum class Kind { finite, gaussian, power_tail };
    Kind kind_;
    std::vector<double> values_, cum_;
    double mean_ = 0.0, sd_ = 0.0;
    double beta_ = 0.0, neg_weight_ = 0.0, pos_value_ = 0.0;
};

class IncrementSampler {
  public:
    explicit IncrementSampler(const IncrementDistribution& d) {
        if (const auto* f = std::get_if<FiniteSupport2D>(&d)) {
            kind_ = Kind::finite;
            double cum = 0.0;
            for (const auto& a : f->atoms) {
                cum += a.prob;
                values_.push_back(a.value);
                cum_.push_back(cum);
            }
            cum_.back() = 1.0;
        } else if (const auto* g = std::get_if<BivariateGaussian>(&d)) {
            kind_ = Kind::gaussian;
            mean_ = g->mean;
            // Lower Cholesky factor; tolerates semidefinite input.
            l11_ = std::sqrt(std::max(g->cov[0][0], 0.0));
            l21_ = l11_ > 0.0 ? g->cov[0][1] / l11_ : 0.0;
            l22_ = std::sqrt(std::max(g->cov[1][1] - l21_ * l21_, 0.0));
        } else {
            const auto& p = std::get<ProductDistribution>(d);
            kind_ = Kind::product;
            m1_.emplace(p.coord1);
            m2_.emplace(p.coord2);
        }
    }

    Vec2 draw(RngStream& rng) const {
        switch (kind_) {
            case Kind::finite: {
                const double u = rng.uniform01();
                const auto it = std::lower_bound(cum_.begin(), cum_.end(), u,
                                                 [](double c, double x) { return c <= x; });
                return values_[static_cast<std::size_t>(it - cum_.begin())];
            }
            case Kind::gaussian: {
                double z1, z2;
                rng.normal_pair(z1, z2);
                return {mean_[0] + l11_ * z1, mean_[1] + l21_ * z1 + l22_ * z2};
            }
            default:
                // Coordinate 1 draws first; fixed order keeps streams stable.
                return {m1_->draw(rng), m2_->draw(rng)};
        }
    }

  private:
    enum class Kind { finite, gaussian, product };
    Kind kind_;
    std::vector<Vec2> values_;
    std::vector<double> cum_;
    Vec2 mean_{0.0, 0.0};
    double l11_ = 0.0, l21_ = 0.0, l22_ = 0.0;
    std::optional<MarginalSampler> m1_, m2_;
};

// ---------------------------------------------------------------------------
// Structure helpers.

inline bool is_integer_lattice(const FiniteSupportMarginal& m) {
    for (const auto& [v, p] : m.atoms)
        if (v != std::floor(v)) return false;
    return true;
}

inline bool is_integer_lattice(const FiniteSupport2D& d) {
    for (const auto& a : d.atoms)
        if (a.value[0] != std::floor(a.value[0]) || a.value[1] != std::floor(a.value[1]))
            return false;
    return true;
}

// Marginal law of one coordinate of a planar law.  Atoms of a finite 2-d
// law are collapsed (equal coordinate values merged).
inline Marginal marginal_of(const IncrementDistribution& d, int coord) {
    if (coord != 0 && coord != 1) throw std::invalid_argument("marginal_of: coord must be 0 or 1");
    if (const auto* f = std::get_if<FiniteSupport2D>(&d)) {
        std::vector<std::pair<double, double>> atoms;
        for (const auto& a : f->atoms) {
            const double v = a.value[static_cast<std::size_t>(coord)];
            auto it = std::find_if(atoms.begin(), atoms.end(),
                                   [&](const auto& q) { return q.first == v; });
            if (it == atoms.end())
                atoms.emplace_back(v, a.prob);
            else
                it->second += a.prob;
        }
        std::sort(atoms.begin(), atoms.end());
        return FiniteSupportMarginal{std::move(atoms)};
    }
    if (const auto* g = std::get_if<BivariateGaussian>(&d)) {
        return GaussianMarginal{g->mean[static_cast<std::size_t>(coord)],
                                g->cov[static_cast<std::size_t>(coord)]
                                      [static_cast<std::size_t>(coord)]};
    }
    const auto& p = std::get<ProductDistribution>(d);
    return coord == 0 ? p.coord1 : p.coord2;
}

// Product of two finite marginals as an explicit finite planar law.
inline FiniteSupport2D product_atoms(const FiniteSupportMarginal& m1,
                                     const FiniteSupportMarginal& m2) {
    FiniteSupport2D out;
    for (const auto& [v1, p1] : m1.atoms)
        for (const auto& [v2, p2] : m2.atoms)
            out.atoms.push_back({{v1, v2}, p1 * p2});
    return out;
}

// Swap the two coordinates.
inline IncrementDistribution exchange_coordinates(const IncrementDistribution& d) {
    if (const auto* f = std::get_if<FiniteSupport2D>(&d)) {
        FiniteSupport2D out = *f;
        for (auto& a : out.atoms) std::swap(a.value[0], a.value[1]);
        return out;
    }
    if (const auto* g = std::get_if<BivariateGaussian>(&d)) {
        BivariateGaussian out;
        out.mean = {g->mean[1], g->mean[0]};
        out.cov = {{{g->cov[1][1], g->cov[0][1]}, {g->cov[1][0], g->cov[0][0]}}};
        return out;
    }
    const auto& p = std::get<ProductDistribution>(d);
    return ProductDistribution{p.coord2, p.coord1};
}

}  // namespace quadwalk
