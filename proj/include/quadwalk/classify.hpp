#pragma once

// Drift/recurrence classification of the planar Lindley process.  Four
// regimes are distinguished by the increment moments:
//   (a) some coordinate has E X+ < E X-          -> transient
//   (b) both coordinates have E X- < E X+ < inf  -> positive recurrent
//   (c) both centered, enough moments            -> null recurrent iff rho >= 0
//   (d) one centered, the other positive drift   -> null recurrent
// The order matters: (a) is tested first and wins.  When a moment
// hypothesis cannot be verified the verdict is "unknown" and the first
// failing named check is reported.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "assumptions.hpp"
#include "moments.hpp"

namespace quadwalk {

enum class CaseLabel {
    negative_drift,   // (a)
    positive_drift,   // (b)
    both_centered,    // (c)
    mixed_drift,      // (d)
    unknown,
};

enum class Verdict { transient, positive_recurrent, null_recurrent, unknown };

inline const char* to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::negative_drift: return "negative_drift";
        case CaseLabel::positive_drift: return "positive_drift";
        case CaseLabel::both_centered: return "both_centered";
        case CaseLabel::mixed_drift: return "mixed_drift";
        default: return "unknown";
    }
}

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::transient: return "transient";
        case Verdict::positive_recurrent: return "positive_recurrent";
        case Verdict::null_recurrent: return "null_recurrent";
        default: return "unknown";
    }
}

// Decay exponent of the exit-time tail in the centered regime:
// P[tau_x > n] ~ v(x) n^{-1/p} with p = 2 arccos(-rho)/pi.
inline double predicted_exponent(double rho) {
    if (!(rho > -1.0 && rho < 1.0))
        throw std::invalid_argument("predicted_exponent: |rho| must be < 1");
    return std::numbers::pi / (2.0 * std::acos(-rho));
}

// Moment order required by the centered regime: max(2+delta, pi/arccos(-rho)).
inline double required_moment_order(double rho, double delta) {
    if (!(rho > -1.0 && rho < 1.0))
        throw std::invalid_argument("required_moment_order: |rho| must be < 1");
    if (!(delta > 0.0)) throw std::invalid_argument("required_moment_order: delta must be > 0");
    return std::max(2.0 + delta, std::numbers::pi / std::acos(-rho));
}

struct RegimeClassification {
    CaseLabel case_label = CaseLabel::unknown;
    Verdict verdict = Verdict::unknown;
    std::optional<double> tail_exponent;        // power decay of P[tau_x > n], when predicted
    std::optional<double> required_order;       // moment order demanded by the regime
    bool exchanged = false;                     // case (d) entered after swapping coordinates
    std::array<bool, 2> assumed_centered{false, false};
    std::vector<AssumptionCheck> hypotheses;
    std::string reason;                          // first failing check when verdict is unknown
};

inline RegimeClassification classify_regime(const MomentReport& mom,
                                            const AssumptionReport& assum,
                                            double delta = 0.1) {
    if (!(delta > 0.0)) throw std::invalid_argument("classify_regime: delta must be > 0");
    RegimeClassification out;
    out.assumed_centered = mom.assumed_centered;
    auto check = [&](const std::string& name, bool pass) {
        out.hypotheses.push_back({name, pass});
        if (!pass && out.reason.empty()) out.reason = name;
        return pass;
    };
    auto fail = [&](CaseLabel label) {
        out.case_label = label;
        out.verdict = Verdict::unknown;
        return out;
    };

    if (!check("support_spans_plane", assum.spans_plane)) return fail(CaseLabel::unknown);
    if (!check("positive_quadrant_mass", assum.positive_quadrant_mass))
        return fail(CaseLabel::unknown);

    const auto pos = mom.pos_part_mean;
    const auto neg = mom.neg_part_mean;
    std::array<bool, 2> centered{}, drift_up{}, drift_down{};
    for (std::size_t i = 0; i < 2; ++i) {
        centered[i] = mom.centered(static_cast<int>(i));
        if (!centered[i]) {
            drift_down[i] = pos[i] < neg[i];                          // allows neg = inf
            drift_up[i] = neg[i] < pos[i] && std::isfinite(pos[i]);
        }
    }

    // (a) strictly negative drift in some coordinate.
    if (drift_down[0] || drift_down[1]) {
        out.case_label = CaseLabel::negative_drift;
        const int i = drift_down[0] ? 0 : 1;
        check("coord" + std::to_string(i + 1) + "_positive_part_mean_finite",
              std::isfinite(pos[static_cast<std::size_t>(i)]));
        out.verdict = Verdict::transient;
        return out;
    }

    // (b) strictly positive drift in both coordinates.
    if (drift_up[0] && drift_up[1]) {
        out.case_label = CaseLabel::positive_drift;
        check("both_coordinate_means_finite_positive", true);
        out.verdict = Verdict::positive_recurrent;
        return out;
    }

    // (c) both coordinates centered.
    if (centered[0] && centered[1]) {
        out.case_label = CaseLabel::both_centered;
        if (!check("correlation_defined", mom.rho.has_value()))
            return fail(CaseLabel::both_centered);
        const double rho = *mom.rho;
        if (!check("correlation_strictly_inside_unit_interval", std::abs(rho) < 1.0))
            return fail(CaseLabel::both_centered);
        const double order = required_moment_order(rho, delta);
        out.required_order = order;
        bool ok = true;
        for (int i = 0; i < 2; ++i)
            ok = check("coord" + std::to_string(i + 1) + "_abs_moment_order_" +
                           std::to_string(order),
                       mom.moment_finite(i, order)) &&
                 ok;
        if (!ok) return fail(CaseLabel::both_centered);
        out.tail_exponent = predicted_exponent(rho);
        out.verdict = rho >= 0.0 ? Verdict::null_recurrent : Verdict::transient;
        return out;
    }

    // (d) one centered coordinate, the other with positive drift,
    // canonically ordered (centered first) after a possible exchange.
    const bool direct = centered[0] && drift_up[1];
    const bool swapped = centered[1] && drift_up[0];
    if (direct || swapped) {
        out.case_label = CaseLabel::mixed_drift;
        out.exchanged = !direct;
        const int c = direct ? 0 : 1;  // centered coordinate
        const int u = 1 - c;           // drifting coordinate
        out.required_order = 2.0 + delta;
        bool ok = true;
        for (int i : {c, u})
            ok = check("coord" + std::to_string(i + 1) + "_abs_moment_order_" +
                           std::to_string(2.0 + delta),
                       mom.moment_finite(i, 2.0 + delta)) &&
                 ok;
        ok = check("drifting_coord_negative_part_order_" + std::to_string(3.0 + delta),
                   mom.neg_moment_finite(u, 3.0 + delta)) &&
             ok;
        if (!ok) return fail(CaseLabel::mixed_drift);
        out.tail_exponent = 0.5;
        out.verdict = Verdict::null_recurrent;
        return out;
    }

    check("drift_pattern_recognized", false);
    return fail(CaseLabel::unknown);
}

inline RegimeClassification classify_regime(const IncrementDistribution& d, double delta = 0.1) {
    return classify_regime(moments(d), check_assumptions(d), delta);
}

}  // namespace quadwalk
