#pragma once

// Experiment runners behind the command-line tool.  One run = one config =
// one output directory holding config.json (the resolved document),
// results.csv, and report.json.  Return value is the process exit code:
//   0 success, 2 config error, 3 regime/precondition mismatch,
//   4 invariant violation recorded in the report, 5 budget or survivor
//   shortfall.
// Artifacts contain no timestamps and no worker counts, so re-running an
// emitted config.json reproduces every artifact byte for byte.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "assumptions.hpp"
#include "classify.hpp"
#include "config.hpp"
#include "decorrelate.hpp"
#include "distribution.hpp"
#include "harmonic_halfline.hpp"
#include "harmonic_quadrant.hpp"
#include "io.hpp"
#include "lindley.hpp"
#include "lyapunov.hpp"
#include "moments.hpp"
#include "occupation.hpp"
#include "sqrt_tail.hpp"
#include "survival.hpp"
#include "tail_fit.hpp"

namespace quadwalk {

struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRegime = 3;
inline constexpr int kExitViolation = 4;
inline constexpr int kExitBudget = 5;

namespace detail {

inline nlohmann::json json_real(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "infinity" : "-infinity";
}

inline nlohmann::json moments_to_json(const MomentReport& m) {
    nlohmann::json j;
    j["mean"] = {json_real(m.mean[0]), json_real(m.mean[1])};
    j["covariance"] = {{json_real(m.covariance[0][0]), json_real(m.covariance[0][1])},
                       {json_real(m.covariance[1][0]), json_real(m.covariance[1][1])}};
    j["rho"] = m.rho ? nlohmann::json(*m.rho) : nlohmann::json(nullptr);
    j["pos_part_mean"] = {json_real(m.pos_part_mean[0]), json_real(m.pos_part_mean[1])};
    j["neg_part_mean"] = {json_real(m.neg_part_mean[0]), json_real(m.neg_part_mean[1])};
    j["neg_part_second_moment"] = {json_real(m.neg_part_second[0]),
                                   json_real(m.neg_part_second[1])};
    j["abs_moment_order_sup"] = {json_real(m.abs_moment_sup[0]),
                                 json_real(m.abs_moment_sup[1])};
    j["neg_moment_order_sup"] = {json_real(m.neg_moment_sup[0]),
                                 json_real(m.neg_moment_sup[1])};
    j["exact"] = m.exact;
    j["numeric_error"] = m.numeric_error;
    j["assumed_centered"] = {m.assumed_centered[0], m.assumed_centered[1]};
    return j;
}

inline nlohmann::json assumptions_to_json(const AssumptionReport& a) {
    nlohmann::json j;
    j["support_spans_plane"] = a.spans_plane;
    j["positive_quadrant_mass"] = a.positive_quadrant_mass;
    j["quadrant_prob"] = a.quadrant_prob;
    j["nondegenerate"] = {a.nondegenerate[0], a.nondegenerate[1]};
    j["negative_mass"] = {a.negative_mass[0], a.negative_mass[1]};
    j["positive_mass"] = {a.positive_mass[0], a.positive_mass[1]};
    auto& checks = j["checks"] = nlohmann::json::array();
    for (const auto& c : a.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}});
    return j;
}

inline nlohmann::json classification_to_json(const RegimeClassification& c) {
    nlohmann::json j;
    j["case"] = to_string(c.case_label);
    j["verdict"] = to_string(c.verdict);
    j["tail_exponent"] =
        c.tail_exponent ? nlohmann::json(*c.tail_exponent) : nlohmann::json(nullptr);
    j["required_moment_order"] =
        c.required_order ? nlohmann::json(*c.required_order) : nlohmann::json(nullptr);
    j["exchanged"] = c.exchanged;
    j["assumed_centered"] = {c.assumed_centered[0], c.assumed_centered[1]};
    j["reason"] = c.reason;
    auto& checks = j["hypotheses"] = nlohmann::json::array();
    for (const auto& h : c.hypotheses) checks.push_back({{"name", h.name}, {"pass", h.pass}});
    return j;
}

inline nlohmann::json fit_to_json(const ExponentFit& f) {
    nlohmann::json j;
    j["exponent"] = f.exponent;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["amplitude"] = f.amplitude;
    j["stderr"] = f.stderr_exponent;
    j["r_squared"] = f.r_squared;
    j["window"] = {f.window_lo, f.window_hi};
    j["points_used"] = f.points_used;
    return j;
}

inline nlohmann::json harmonic_to_json(const HarmonicEstimate& e) {
    nlohmann::json j;
    j["point"] = e.point;
    j["value"] = e.value;
    j["stat_error"] = e.stat_error;
    j["truncation_bias_bound"] = e.truncation_bias_bound
                                     ? nlohmann::json(*e.truncation_bias_bound)
                                     : nlohmann::json("none");
    j["method"] = to_string(e.method);
    if (e.method == HarmonicMethod::monte_carlo) {
        j["horizon"] = e.horizon;
        j["paths"] = e.paths;
        j["censored_fraction"] = e.censored_fraction;
    } else {
        j["truncation"] = e.truncation;
    }
    if (e.positivity_violation) j["positivity_violation"] = true;
    return j;
}

inline nlohmann::json curve_meta_to_json(const SurvivalCurve& c) {
    nlohmann::json j;
    j["paths"] = c.paths;
    j["master_seed"] = c.seed;
    if (std::isinf(c.start[1]))
        j["start"] = c.start[0];
    else
        j["start"] = {c.start[0], c.start[1]};
    j["censor_horizon"] = c.horizon;
    j["grid_points"] = c.n.size();
    j["survivors_at_n_max"] = c.survivors.back();
    return j;
}

inline const IncrementDistribution& require_dist(const ExperimentConfig& cfg,
                                                 const char* cmd) {
    if (!cfg.dist)
        throw ConfigError("/distribution",
                          std::string(cmd) + " requires a two-dimensional distribution");
    return *cfg.dist;
}

inline const Marginal& require_marginal(const ExperimentConfig& cfg, const char* cmd) {
    if (!cfg.marginal)
        throw ConfigError("/marginal", std::string(cmd) + " requires a one-dimensional marginal");
    return *cfg.marginal;
}

inline void write_artifacts(const std::filesystem::path& out, const ExperimentConfig& cfg,
                            const CsvTable& results, const nlohmann::json& report) {
    std::filesystem::create_directories(out);
    write_text_file(out / "config.json", cfg.resolved().dump(2) + "\n");
    write_text_file(out / "results.csv", results.render());
    write_text_file(out / "report.json", report.dump(2) + "\n");
}

inline nlohmann::json base_report(const std::string& command) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["status"] = "ok";
    return j;
}

inline void record_violation(nlohmann::json& report, const std::string& type,
                             const std::string& message) {
    report["status"] = "violation";
    report["error"] = {{"type", type}, {"message", message}, {"exit_code", kExitViolation}};
}

}  // namespace detail

// --------------------------------------------------------------------------
// classify

inline int run_classify(ExperimentConfig& cfg, const std::filesystem::path& out) {
    const IncrementDistribution& d = detail::require_dist(cfg, "classify");
    const AssumptionReport assum = check_assumptions(d);
    const MomentReport mom = moments(d);
    const RegimeClassification cls = classify_regime(mom, assum, cfg.delta);

    CsvTable t;
    t.header = {"source", "check", "pass"};
    for (const auto& c : assum.checks)
        t.rows.push_back({"assumption", c.name, c.pass ? "true" : "false"});
    for (const auto& h : cls.hypotheses)
        t.rows.push_back({"hypothesis", h.name, h.pass ? "true" : "false"});

    nlohmann::json report = detail::base_report("classify");
    report["assumptions"] = detail::assumptions_to_json(assum);
    report["moments"] = detail::moments_to_json(mom);
    report["classification"] = detail::classification_to_json(cls);
    detail::write_artifacts(out, cfg, t, report);
    return kExitOk;
}

// --------------------------------------------------------------------------
// tail

inline int run_tail(ExperimentConfig& cfg, const std::filesystem::path& out, int workers) {
    const bool two_d = cfg.dist.has_value();
    if (two_d == cfg.marginal.has_value())
        throw ConfigError("", "tail requires exactly one of distribution or marginal");
    if (cfg.paths < 1000) throw ConfigError("/paths", "tail requires paths >= 1000");
    if (cfg.n_grid.empty()) cfg.n_grid = geometric_grid(cfg.n_max, cfg.points_per_decade);
    if (two_d && !(cfg.start[0] > 0.0 && cfg.start[1] > 0.0))
        throw ConfigError("/start", "start must lie in the open quadrant");
    if (!two_d && !(cfg.start[0] > 0.0)) throw ConfigError("/start", "start must be > 0");
    if (!two_d) cfg.start_is_scalar = true;

    const SurvivalCurve curve =
        two_d ? survival_curve(*cfg.dist, cfg.start, cfg.n_grid, cfg.paths, cfg.seed, workers)
              : survival_curve_halfline(*cfg.marginal, cfg.start[0], cfg.n_grid, cfg.paths,
                                        cfg.seed, workers);
    CsvTable t;
    t.header = {"n", "estimate", "ci_low", "ci_high"};
    for (std::size_t j = 0; j < curve.n.size(); ++j)
        t.rows.push_back({format_int(curve.n[j]), format_double(curve.estimate[j]),
                          format_double(curve.ci_low[j]), format_double(curve.ci_high[j])});

    nlohmann::json report = detail::base_report("tail");
    report["curve"] = detail::curve_meta_to_json(curve);
    int code = kExitOk;
    try {
        const ExponentFit fit = fit_tail_exponent(curve, cfg.window_lo, cfg.window_hi);
        report["fit"] = detail::fit_to_json(fit);
        if (two_d) {
            const RegimeClassification cls = classify_regime(*cfg.dist, cfg.delta);
            report["classification"] = detail::classification_to_json(cls);
            if (cls.tail_exponent) {
                report["predicted_exponent"] = *cls.tail_exponent;
                report["exponent_gap"] = std::abs(fit.exponent - *cls.tail_exponent);
            }
        }
    } catch (const InsufficientSurvivorsError& e) {
        report["status"] = "error";
        report["error"] = {{"type", "insufficient_survivors"},
                           {"message", e.what()},
                           {"exit_code", kExitBudget}};
        code = kExitBudget;
    }

    if (!two_d) {
        const MarginalMoments mm = marginal_moments(*cfg.marginal);
        if (std::abs(mm.mean) < kCenteredTol && std::isfinite(mm.variance) &&
            mm.variance > 0.0) {
            // Square-root tail table against kappa * h1; reuse the curve's
            // grid but prefer the exact route when the law allows it.
            const SqrtTailTable table =
                doney_check(*cfg.marginal, cfg.start[0], curve.n,
                            std::min<std::int64_t>(cfg.paths, 200'000), cfg.seed + 1, workers);
            nlohmann::json sq;
            sq["kappa"] = table.kappa;
            sq["h1"] = table.h1_value;
            sq["h1_stat_error"] = table.h1_stat_error;
            sq["reference"] = table.reference;
            sq["exact"] = table.exact;
            auto& rows = sq["rows"] = nlohmann::json::array();
            for (const auto& r : table.rows)
                rows.push_back({{"n", r.n},
                                {"survival", r.survival},
                                {"scaled", r.scaled},
                                {"ratio", r.ratio}});
            report["sqrt_tail"] = sq;
        }
    }
    detail::write_artifacts(out, cfg, t, report);
    return code;
}

// --------------------------------------------------------------------------
// harmonic

inline int run_harmonic(ExperimentConfig& cfg, const std::filesystem::path& out, int workers) {
    if (cfg.horizon == 0) cfg.horizon = 10'000;
    nlohmann::json report = detail::base_report("harmonic");
    CsvTable t;
    int code = kExitOk;

    if (cfg.mode == "h1_mc") {
        const Marginal& m = detail::require_marginal(cfg, "harmonic h1_mc");
        cfg.start_is_scalar = true;
        std::vector<double> xs = cfg.x_list.empty() ? std::vector<double>{cfg.start[0]}
                                                    : cfg.x_list;
        t.header = {"x", "value", "stat_error", "bias_bound", "censored_fraction"};
        auto& ests = report["estimates"] = nlohmann::json::array();
        for (const double x : xs) {
            if (!(x > 0.0)) throw ConfigError("/x_list", "points must be > 0");
            const HarmonicEstimate e =
                h1_estimate(m, x, cfg.horizon, cfg.paths, cfg.seed, workers);
            t.rows.push_back({format_double(x), format_double(e.value),
                              format_double(e.stat_error),
                              format_double(*e.truncation_bias_bound),
                              format_double(e.censored_fraction)});
            ests.push_back(detail::harmonic_to_json(e));
        }
    } else if (cfg.mode == "h1_lattice") {
        const Marginal& m = detail::require_marginal(cfg, "harmonic h1_lattice");
        cfg.start_is_scalar = true;
        const auto* fm = std::get_if<FiniteSupportMarginal>(&m);
        if (fm == nullptr)
            throw ConfigError("/marginal",
                              "h1_lattice needs a finite-support integer-lattice marginal");
        const LatticeHarmonic1D solver(*fm, cfg.truncation);
        std::vector<double> xs = cfg.x_list.empty() ? std::vector<double>{cfg.start[0]}
                                                    : cfg.x_list;
        t.header = {"x", "value", "residual", "bias_bound"};
        auto& ests = report["estimates"] = nlohmann::json::array();
        double max_resid = 0.0;
        for (const double xd : xs) {
            if (!(xd >= 1.0) || xd != std::floor(xd))
                throw ConfigError("/x_list", "lattice points must be integers >= 1");
            const auto x = static_cast<std::int64_t>(std::llround(xd));
            const HarmonicEstimate e = solver.estimate(x);
            const double r = solver.residual(x);
            max_resid = std::max(max_resid, std::abs(r));
            t.rows.push_back({format_int(x), format_double(e.value), format_double(r),
                              format_double(*e.truncation_bias_bound)});
            ests.push_back(detail::harmonic_to_json(e));
        }
        report["truncation"] = cfg.truncation;
        report["min_at_unit"] = solver.min_on_unit_interval();
        report["max_abs_residual"] = max_resid;
        report["residual_tolerance"] = 1e-10;
        if (max_resid > 1e-10) {
            detail::record_violation(report, "harmonicity_residual",
                                     "lattice solution residual exceeds 1e-10");
            code = kExitViolation;
        }
    } else if (cfg.mode == "h2d") {
        const IncrementDistribution& d = detail::require_dist(cfg, "harmonic h2d");
        const RegimeClassification cls = classify_regime(d, cfg.delta);
        if (cls.case_label != CaseLabel::mixed_drift || cls.exchanged)
            throw RegimeError(
                "harmonic h2d requires coordinate 1 centered and coordinate 2 drifting "
                "upward (mixed-drift regime); classification gave case " +
                std::string(to_string(cls.case_label)) +
                (cls.exchanged ? " with coordinates exchanged" : ""));
        std::vector<Vec2> pts = cfg.points2d.empty() ? std::vector<Vec2>{cfg.start}
                                                     : cfg.points2d;
        t.header = {"x1", "x2", "value", "stat_error", "bias_bound", "censored_fraction",
                    "positivity_violation"};
        auto& ests = report["estimates"] = nlohmann::json::array();
        bool violated = false;
        for (const Vec2& p : pts) {
            const HarmonicEstimate e =
                h2d_estimate(d, p, cfg.horizon, cfg.paths, cfg.seed, workers);
            violated = violated || e.positivity_violation;
            t.rows.push_back({format_double(p[0]), format_double(p[1]),
                              format_double(e.value), format_double(e.stat_error),
                              format_double(*e.truncation_bias_bound),
                              format_double(e.censored_fraction),
                              e.positivity_violation ? "true" : "false"});
            ests.push_back(detail::harmonic_to_json(e));
        }
        report["classification"] = detail::classification_to_json(cls);
        if (violated) {
            detail::record_violation(report, "positivity_violation",
                                     "an h estimate is negative beyond 3 standard errors");
            code = kExitViolation;
        }
    } else {
        throw ConfigError("/mode",
                          "harmonic requires mode h1_mc, h1_lattice, or h2d (got \"" +
                              cfg.mode + "\")");
    }
    detail::write_artifacts(out, cfg, t, report);
    return code;
}

// --------------------------------------------------------------------------
// lyapunov

inline int run_lyapunov(ExperimentConfig& cfg, const std::filesystem::path& out) {
    const Marginal& m = detail::require_marginal(cfg, "lyapunov");
    const MarginalMoments mm = marginal_moments(m);
    if (!(std::abs(mm.mean) < kCenteredTol))
        throw RegimeError("lyapunov requires a centered marginal (mean " +
                          format_double(mm.mean) + ")");
    if (!(mm.neg_second > 0.0) || !std::isfinite(mm.neg_second))
        throw RegimeError("lyapunov requires 0 < E(X^-)^2 < infinity");
    if (!(cfg.grid_step > 0.0) || !(cfg.grid_max >= cfg.grid_step))
        throw ConfigError("/grid_step", "need 0 < grid_step <= grid_max");
    if (cfg.grid_max / cfg.grid_step > 2e6)
        throw ConfigError("/grid_step", "grid would exceed 2e6 points");

    const LyapunovSpec spec = build_lyapunov(m);
    std::vector<double> grid;
    for (double x = 0.0; x <= cfg.grid_max + 1e-12 * cfg.grid_max; x += cfg.grid_step)
        grid.push_back(x);
    const SuperharmonicReport sh = superharmonic_check(spec, grid);
    const double tol = spec.exact_closed_form() ? 1e-12 : 1e-6;

    CsvTable t;
    t.header = {"x", "a", "b", "m", "V", "delta"};
    for (std::size_t i = 0; i < sh.grid.size(); ++i) {
        const double x = sh.grid[i];
        t.rows.push_back({format_double(x), format_double(spec.a(x)), format_double(spec.b(x)),
                          format_double(spec.m(x)), format_double(spec.V(x)),
                          format_double(sh.delta[i])});
    }

    nlohmann::json report = detail::base_report("lyapunov");
    report["A"] = spec.A();
    report["x0"] = spec.x0();
    report["R"] = spec.R();
    report["neg_part_mean"] = spec.neg_mean();
    report["neg_part_second_moment"] = spec.neg_second();
    report["m_limit"] = spec.m_limit();
    report["exact_closed_form"] = spec.exact_closed_form();
    nlohmann::json mratio = nlohmann::json::array();
    for (const double x : {10.0, 100.0, 1000.0})
        mratio.push_back({{"x", x}, {"m_over_x", spec.m(x) / x}});
    report["m_over_x"] = mratio;
    report["superharmonic"] = {{"grid_points", sh.grid.size()},
                               {"max_delta", sh.max_delta},
                               {"argmax", sh.argmax},
                               {"tolerance", tol},
                               {"pass", sh.pass(tol)}};
    int code = kExitOk;
    if (!sh.pass(tol)) {
        detail::record_violation(report, "superharmonic",
                                 "max one-step drift of V exceeds tolerance");
        code = kExitViolation;
    }
    detail::write_artifacts(out, cfg, t, report);
    return code;
}

// --------------------------------------------------------------------------
// duality

inline int run_duality(ExperimentConfig& cfg, const std::filesystem::path& out) {
    const IncrementDistribution& d = detail::require_dist(cfg, "duality");
    const IncrementSampler sampler(d);
    constexpr double kTol = 1e-9;

    // For integer-valued laws pick integer starts so every arithmetic step
    // stays on the lattice and both evaluation orders agree bit for bit; a
    // fractional start would round differently along the two routes.
    const auto* fs = std::get_if<FiniteSupport2D>(&d);
    const bool lattice = fs != nullptr && is_integer_lattice(*fs);

    CsvTable t;
    t.header = {"trial", "n", "start1", "start2", "deviation"};
    double max_dev = 0.0;
    for (std::int64_t trial = 0; trial < cfg.trials; ++trial) {
        RngStream rng = RngStream::for_path(cfg.seed, trial);
        const auto n = static_cast<std::int64_t>(
            1 + rng.next_u64() % static_cast<std::uint64_t>(cfg.n_max));
        Vec2 w0{0.0, 0.0};
        if (rng.uniform01() >= 0.25) {
            w0 = {3.0 * rng.uniform01(), 3.0 * rng.uniform01()};
            if (lattice) w0 = {std::floor(w0[0]), std::floor(w0[1])};
        }

        std::vector<Vec2> inc(static_cast<std::size_t>(n));
        for (auto& x : inc) x = sampler.draw(rng);
        // Recursive queueing iteration...
        Vec2 w = w0;
        Vec2 s{0.0, 0.0};
        for (const Vec2& x : inc) {
            w = lindley_step(w, x);
            s[0] += x[0];
            s[1] += x[1];
        }
        // ...against the unrolled maximum: W(n) = max(W0(n), w0 - S(n)),
        // with W0 the running dual maximum over suffix sums.
        const Vec2 dual = dual_waiting_time(inc);
        double dev = 0.0;
        for (int i = 0; i < 2; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double unrolled = std::max(dual[k], w0[k] - s[k]);
            dev = std::max(dev, std::abs(w[k] - unrolled) / std::max(1.0, std::abs(w[k])));
        }
        max_dev = std::max(max_dev, dev);
        t.rows.push_back({format_int(trial), format_int(n), format_double(w0[0]),
                          format_double(w0[1]), format_double(dev)});
    }

    nlohmann::json report = detail::base_report("duality");
    report["trials"] = cfg.trials;
    report["n_max"] = cfg.n_max;
    report["max_relative_deviation"] = max_dev;
    report["tolerance"] = kTol;
    report["pass"] = max_dev <= kTol;
    int code = kExitOk;
    if (max_dev > kTol) {
        detail::record_violation(report, "duality",
                                 "recursion and unrolled form disagree beyond tolerance");
        code = kExitViolation;
    }
    detail::write_artifacts(out, cfg, t, report);
    return code;
}

// --------------------------------------------------------------------------
// occupation

inline int run_occupation(ExperimentConfig& cfg, const std::filesystem::path& out,
                          int workers) {
    const IncrementDistribution& d = detail::require_dist(cfg, "occupation");
    if (!cfg.box) throw ConfigError("/box", "occupation requires a box [x1, x2]");
    const OccupationSeries s =
        occupation_series(d, *cfg.box, cfg.n_max, cfg.paths, cfg.seed, workers);

    CsvTable t;
    t.header = {"n",         "occ_term",    "occ_stderr",   "occ_partial",
                "exit_term", "exit_ci_low", "exit_ci_high", "exit_partial"};
    for (std::size_t i = 0; i < s.n.size(); ++i)
        t.rows.push_back({format_int(s.n[i]), format_double(s.occ_term[i]),
                          format_double(s.occ_stderr[i]), format_double(s.occ_partial[i]),
                          format_double(s.exit_term[i]), format_double(s.exit_ci_low[i]),
                          format_double(s.exit_ci_high[i]), format_double(s.exit_partial[i])});

    // Term-wise agreement in units of the joint standard error.
    double max_z = 0.0;
    std::int64_t argmax = 0;
    std::int64_t within4 = 0;
    for (std::size_t i = 0; i < s.n.size(); ++i) {
        const double se_exit = (s.exit_ci_high[i] - s.exit_ci_low[i]) / (2.0 * kZ95);
        const double joint = std::sqrt(s.occ_stderr[i] * s.occ_stderr[i] + se_exit * se_exit);
        const double diff = std::abs(s.occ_term[i] - s.exit_term[i]);
        const double z = diff == 0.0 ? 0.0 : diff / std::max(joint, 1e-300);
        if (z > max_z) {
            max_z = z;
            argmax = s.n[i];
        }
        if (z <= 4.0) ++within4;
    }
    const double gate = 5.0;

    nlohmann::json report = detail::base_report("occupation");
    report["box"] = {(*cfg.box)[0], (*cfg.box)[1]};
    report["n_max"] = cfg.n_max;
    report["paths"] = cfg.paths;
    report["expected_visits"] = s.occ_partial.back();
    report["agreement"] = {{"max_z", max_z},
                           {"argmax_n", argmax},
                           {"fraction_within_4sigma",
                            static_cast<double>(within4) / static_cast<double>(s.n.size())},
                           {"gate", gate},
                           {"pass", max_z <= gate}};
    int code = kExitOk;
    if (max_z > gate) {
        detail::record_violation(report, "occupation_duality",
                                 "occupation and exit-time series disagree beyond the gate");
        code = kExitViolation;
    }
    detail::write_artifacts(out, cfg, t, report);
    return code;
}

// --------------------------------------------------------------------------
// dispatch

inline int run_experiment(ExperimentConfig& cfg, const std::string& command,
                          const std::filesystem::path& out, int workers) {
    if (!cfg.command.empty() && cfg.command != command)
        throw ConfigError("/command", "config file names command \"" + cfg.command +
                                          "\" but \"" + command + "\" was invoked");
    cfg.command = command;
    if (command == "classify") return run_classify(cfg, out);
    if (command == "tail") return run_tail(cfg, out, workers);
    if (command == "harmonic") return run_harmonic(cfg, out, workers);
    if (command == "lyapunov") return run_lyapunov(cfg, out);
    if (command == "duality") return run_duality(cfg, out);
    if (command == "occupation") return run_occupation(cfg, out, workers);
    throw ConfigError("/command", "unknown command \"" + command + "\"");
}

}  // namespace quadwalk
