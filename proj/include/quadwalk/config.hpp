#pragma once

// Experiment configuration: one JSON document per run.  The schema covers
// the increment law (kind tag plus kind-specific fields) and the command
// parameters; probabilities and values may be given as numbers or as
// decimal / fraction strings ("0.25", "2/3"), parsed to correctly rounded
// doubles.  Field errors carry a JSON-pointer-style path.  A parsed config
// re-serializes to a canonical resolved document; re-running that document
// reproduces every artifact byte for byte.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "distribution.hpp"
#include "io.hpp"
#include "moments.hpp"

namespace quadwalk {

inline constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
    std::string pointer;
    ConfigError(std::string ptr, const std::string& msg)
        : std::runtime_error(ptr + ": " + msg), pointer(std::move(ptr)) {}
};

struct ExperimentConfig {
    std::string command;  // classify | tail | harmonic | lyapunov | duality | occupation

    std::optional<IncrementDistribution> dist;
    std::optional<Marginal> marginal;

    Vec2 start{1.0, 1.0};
    bool start_is_scalar = false;  // "start" given as a single number (1-D runs)
    std::vector<std::int64_t> n_grid;  // resolved survival grid
    std::int64_t n_max = 10'000;
    int points_per_decade = 8;
    std::int64_t paths = 100'000;
    std::uint64_t seed = 1;
    std::int64_t horizon = 0;  // 0 = command default
    std::int64_t trials = 10'000;
    std::int64_t truncation = 10'000;
    std::string mode;  // harmonic: h1_mc | h1_lattice | h2d
    std::int64_t window_lo = 0, window_hi = 0;  // 0 = fitter default
    double delta = 0.1;
    double grid_max = 10.0, grid_step = 0.01;
    std::optional<Vec2> box;
    std::vector<double> x_list;   // 1-D harmonic table points
    std::vector<Vec2> points2d;   // 2-D harmonic table points

    nlohmann::json resolved() const;
};

namespace detail {

inline std::string join_ptr(const std::string& base, const std::string& key) {
    return base + "/" + key;
}
inline std::string join_ptr(const std::string& base, std::size_t idx) {
    return base + "/" + std::to_string(idx);
}

inline double parse_decimal(const std::string& s, const std::string& ptr) {
    double out = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    const auto res = std::from_chars(b, e, out);
    if (res.ec != std::errc{} || res.ptr != e)
        throw ConfigError(ptr, "not a decimal number: \"" + s + "\"");
    return out;
}

// Number, decimal string, or fraction string "a/b".
inline double parse_real(const nlohmann::json& j, const std::string& ptr) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        const auto slash = s.find('/');
        if (slash == std::string::npos) return parse_decimal(s, ptr);
        const double num = parse_decimal(s.substr(0, slash), ptr);
        const double den = parse_decimal(s.substr(slash + 1), ptr);
        if (den == 0.0) throw ConfigError(ptr, "fraction with zero denominator");
        return num / den;
    }
    throw ConfigError(ptr, "expected a number or numeric string");
}

inline double parse_prob(const nlohmann::json& j, const std::string& ptr) {
    const double p = parse_real(j, ptr);
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError(ptr, "probability must lie in (0, 1]");
    return p;
}

inline std::int64_t parse_int(const nlohmann::json& j, const std::string& ptr) {
    if (!j.is_number_integer()) throw ConfigError(ptr, "expected an integer");
    return j.get<std::int64_t>();
}

inline const nlohmann::json& require_key(const nlohmann::json& j, const std::string& key,
                                         const std::string& ptr) {
    if (!j.is_object()) throw ConfigError(ptr, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError(join_ptr(ptr, key), "missing required field");
    return *it;
}

inline void reject_unknown_keys(const nlohmann::json& j, const std::string& ptr,
                                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigError(join_ptr(ptr, key), "unknown field");
    }
}

inline Marginal parse_marginal(const nlohmann::json& j, const std::string& ptr) {
    const std::string kind = require_key(j, "kind", ptr).get<std::string>();
    if (kind == "finite_support") {
        reject_unknown_keys(j, ptr, {"kind", "atoms"});
        const auto& atoms = require_key(j, "atoms", ptr);
        if (!atoms.is_array() || atoms.empty())
            throw ConfigError(join_ptr(ptr, "atoms"), "expected a non-empty array");
        FiniteSupportMarginal m;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const std::string aptr = join_ptr(join_ptr(ptr, "atoms"), i);
            const auto& a = atoms[i];
            if (!a.is_array() || a.size() != 2)
                throw ConfigError(aptr, "expected [value, probability]");
            m.atoms.emplace_back(parse_real(a[0], join_ptr(aptr, 0)),
                                 parse_prob(a[1], join_ptr(aptr, 1)));
        }
        try {
            validate(m);
        } catch (const std::exception& e) {
            throw ConfigError(join_ptr(ptr, "atoms"), e.what());
        }
        return m;
    }
    if (kind == "gaussian") {
        reject_unknown_keys(j, ptr, {"kind", "mean", "variance"});
        GaussianMarginal g;
        g.mean = parse_real(require_key(j, "mean", ptr), join_ptr(ptr, "mean"));
        g.variance = parse_real(require_key(j, "variance", ptr), join_ptr(ptr, "variance"));
        try {
            validate(g);
        } catch (const std::exception& e) {
            throw ConfigError(ptr, e.what());
        }
        return g;
    }
    if (kind == "power_negative_tail") {
        reject_unknown_keys(j, ptr,
                            {"kind", "beta", "weight", "mean", "shift", "positive_value"});
        const double beta = parse_real(require_key(j, "beta", ptr), join_ptr(ptr, "beta"));
        double weight = 0.5;
        if (j.contains("weight")) weight = parse_real(j["weight"], join_ptr(ptr, "weight"));
        const bool has_mean = j.contains("mean") || j.contains("shift");
        if (has_mean && j.contains("positive_value"))
            throw ConfigError(ptr, "give either mean/shift or positive_value, not both");
        PowerNegativeTailMarginal m;
        try {
            if (has_mean) {
                const char* key = j.contains("mean") ? "mean" : "shift";
                m = make_power_negative_tail(beta, parse_real(j[key], join_ptr(ptr, key)),
                                             weight);
            } else {
                m.beta = beta;
                m.neg_weight = weight;
                m.pos_value = j.contains("positive_value")
                                  ? parse_real(j["positive_value"],
                                               join_ptr(ptr, "positive_value"))
                                  : 0.0;
            }
            validate(m);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(ptr, e.what());
        }
        return m;
    }
    throw ConfigError(join_ptr(ptr, "kind"),
                      "unknown marginal kind \"" + kind +
                          "\" (expected finite_support, gaussian, power_negative_tail)");
}

inline IncrementDistribution parse_distribution(const nlohmann::json& j,
                                                const std::string& ptr) {
    const std::string kind = require_key(j, "kind", ptr).get<std::string>();
    if (kind == "finite_support_2d") {
        reject_unknown_keys(j, ptr, {"kind", "atoms"});
        const auto& atoms = require_key(j, "atoms", ptr);
        if (!atoms.is_array() || atoms.empty())
            throw ConfigError(join_ptr(ptr, "atoms"), "expected a non-empty array");
        FiniteSupport2D d;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const std::string aptr = join_ptr(join_ptr(ptr, "atoms"), i);
            const auto& a = atoms[i];
            if (!a.is_array() || a.size() != 2 || !a[0].is_array() || a[0].size() != 2)
                throw ConfigError(aptr, "expected [[v1, v2], probability]");
            FiniteSupport2D::Atom atom;
            atom.value = {parse_real(a[0][0], join_ptr(join_ptr(aptr, 0), 0)),
                          parse_real(a[0][1], join_ptr(join_ptr(aptr, 0), 1))};
            atom.prob = parse_prob(a[1], join_ptr(aptr, 1));
            d.atoms.push_back(atom);
        }
        try {
            validate(d);
        } catch (const std::exception& e) {
            throw ConfigError(join_ptr(ptr, "atoms"), e.what());
        }
        return d;
    }
    if (kind == "bivariate_gaussian") {
        reject_unknown_keys(j, ptr, {"kind", "mean", "cov"});
        BivariateGaussian g;
        const auto& mean = require_key(j, "mean", ptr);
        if (!mean.is_array() || mean.size() != 2)
            throw ConfigError(join_ptr(ptr, "mean"), "expected [m1, m2]");
        g.mean = {parse_real(mean[0], join_ptr(join_ptr(ptr, "mean"), 0)),
                  parse_real(mean[1], join_ptr(join_ptr(ptr, "mean"), 1))};
        const auto& cov = require_key(j, "cov", ptr);
        if (!cov.is_array() || cov.size() != 2 || !cov[0].is_array() || cov[0].size() != 2 ||
            !cov[1].is_array() || cov[1].size() != 2)
            throw ConfigError(join_ptr(ptr, "cov"), "expected a 2x2 matrix");
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c)
                g.cov[r][c] =
                    parse_real(cov[r][c], join_ptr(join_ptr(join_ptr(ptr, "cov"), r), c));
        try {
            validate(g);
        } catch (const std::exception& e) {
            throw ConfigError(join_ptr(ptr, "cov"), e.what());
        }
        return g;
    }
    if (kind == "product") {
        reject_unknown_keys(j, ptr, {"kind", "coord1", "coord2"});
        ProductDistribution p;
        p.coord1 = parse_marginal(require_key(j, "coord1", ptr), join_ptr(ptr, "coord1"));
        p.coord2 = parse_marginal(require_key(j, "coord2", ptr), join_ptr(ptr, "coord2"));
        return p;
    }
    throw ConfigError(join_ptr(ptr, "kind"),
                      "unknown distribution kind \"" + kind +
                          "\" (expected finite_support_2d, bivariate_gaussian, product)");
}

inline nlohmann::json marginal_to_json(const Marginal& m) {
    nlohmann::json j;
    if (const auto* f = std::get_if<FiniteSupportMarginal>(&m)) {
        j["kind"] = "finite_support";
        auto& atoms = j["atoms"] = nlohmann::json::array();
        for (const auto& [v, p] : f->atoms) atoms.push_back({v, p});
    } else if (const auto* g = std::get_if<GaussianMarginal>(&m)) {
        j["kind"] = "gaussian";
        j["mean"] = g->mean;
        j["variance"] = g->variance;
    } else {
        const auto& p = std::get<PowerNegativeTailMarginal>(m);
        j["kind"] = "power_negative_tail";
        j["beta"] = p.beta;
        j["weight"] = p.neg_weight;
        j["positive_value"] = p.pos_value;
    }
    return j;
}

inline nlohmann::json distribution_to_json(const IncrementDistribution& d) {
    nlohmann::json j;
    if (const auto* f = std::get_if<FiniteSupport2D>(&d)) {
        j["kind"] = "finite_support_2d";
        auto& atoms = j["atoms"] = nlohmann::json::array();
        for (const auto& a : f->atoms)
            atoms.push_back({{a.value[0], a.value[1]}, a.prob});
    } else if (const auto* g = std::get_if<BivariateGaussian>(&d)) {
        j["kind"] = "bivariate_gaussian";
        j["mean"] = {g->mean[0], g->mean[1]};
        j["cov"] = {{g->cov[0][0], g->cov[0][1]}, {g->cov[1][0], g->cov[1][1]}};
    } else {
        const auto& p = std::get<ProductDistribution>(d);
        j["kind"] = "product";
        j["coord1"] = marginal_to_json(p.coord1);
        j["coord2"] = marginal_to_json(p.coord2);
    }
    return j;
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    const std::string root;
    if (!j.is_object()) throw ConfigError("", "config root must be an object");
    detail::reject_unknown_keys(
        j, root,
        {"schema_version", "command", "distribution", "marginal", "start", "n_grid", "n_max",
         "points_per_decade", "paths", "seed", "horizon", "trials", "truncation", "mode",
         "window", "delta", "grid_max", "grid_step", "box", "x_list", "points"});
    ExperimentConfig cfg;
    if (j.contains("schema_version")) {
        const auto v = detail::parse_int(j["schema_version"], "/schema_version");
        if (v != kSchemaVersion)
            throw ConfigError("/schema_version",
                              "unsupported schema version " + std::to_string(v));
    }
    if (j.contains("command")) cfg.command = j["command"].get<std::string>();
    if (j.contains("distribution"))
        cfg.dist = detail::parse_distribution(j["distribution"], "/distribution");
    if (j.contains("marginal")) cfg.marginal = detail::parse_marginal(j["marginal"], "/marginal");
    if (j.contains("start")) {
        const auto& s = j["start"];
        if (s.is_array()) {
            if (s.size() != 2) throw ConfigError("/start", "expected [x1, x2] or a number");
            cfg.start = {detail::parse_real(s[0], "/start/0"),
                         detail::parse_real(s[1], "/start/1")};
        } else {
            cfg.start = {detail::parse_real(s, "/start"), 0.0};
            cfg.start_is_scalar = true;
        }
    }
    if (j.contains("n_grid")) {
        const auto& g = j["n_grid"];
        if (!g.is_array() || g.empty())
            throw ConfigError("/n_grid", "expected a non-empty array of integers");
        for (std::size_t i = 0; i < g.size(); ++i)
            cfg.n_grid.push_back(detail::parse_int(g[i], detail::join_ptr("/n_grid", i)));
    }
    auto opt_int = [&](const char* key, std::int64_t& slot, std::int64_t lo) {
        if (!j.contains(key)) return;
        slot = detail::parse_int(j[key], std::string("/") + key);
        if (slot < lo)
            throw ConfigError(std::string("/") + key,
                              "must be >= " + std::to_string(lo));
    };
    opt_int("n_max", cfg.n_max, 1);
    opt_int("paths", cfg.paths, 1);
    opt_int("horizon", cfg.horizon, 0);
    opt_int("trials", cfg.trials, 1);
    opt_int("truncation", cfg.truncation, 1);
    if (j.contains("points_per_decade")) {
        const auto v = detail::parse_int(j["points_per_decade"], "/points_per_decade");
        if (v < 1) throw ConfigError("/points_per_decade", "must be >= 1");
        cfg.points_per_decade = static_cast<int>(v);
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer())
            throw ConfigError("/seed", "expected a 64-bit integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("mode")) cfg.mode = j["mode"].get<std::string>();
    if (j.contains("window")) {
        const auto& w = j["window"];
        if (!w.is_array() || w.size() != 2)
            throw ConfigError("/window", "expected [n_lo, n_hi]");
        cfg.window_lo = detail::parse_int(w[0], "/window/0");
        cfg.window_hi = detail::parse_int(w[1], "/window/1");
    }
    if (j.contains("delta")) cfg.delta = detail::parse_real(j["delta"], "/delta");
    if (j.contains("grid_max")) cfg.grid_max = detail::parse_real(j["grid_max"], "/grid_max");
    if (j.contains("grid_step"))
        cfg.grid_step = detail::parse_real(j["grid_step"], "/grid_step");
    if (j.contains("box")) {
        const auto& b = j["box"];
        if (!b.is_array() || b.size() != 2) throw ConfigError("/box", "expected [x1, x2]");
        cfg.box = Vec2{detail::parse_real(b[0], "/box/0"), detail::parse_real(b[1], "/box/1")};
    }
    if (j.contains("x_list")) {
        const auto& xs = j["x_list"];
        if (!xs.is_array() || xs.empty())
            throw ConfigError("/x_list", "expected a non-empty array");
        for (std::size_t i = 0; i < xs.size(); ++i)
            cfg.x_list.push_back(detail::parse_real(xs[i], detail::join_ptr("/x_list", i)));
    }
    if (j.contains("points")) {
        const auto& ps = j["points"];
        if (!ps.is_array() || ps.empty())
            throw ConfigError("/points", "expected a non-empty array of [x1, x2]");
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const auto& p = ps[i];
            const std::string pptr = detail::join_ptr("/points", i);
            if (!p.is_array() || p.size() != 2) throw ConfigError(pptr, "expected [x1, x2]");
            cfg.points2d.push_back(Vec2{detail::parse_real(p[0], detail::join_ptr(pptr, 0)),
                                        detail::parse_real(p[1], detail::join_ptr(pptr, 1))});
        }
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("", std::string("cannot read config: ") + e.what());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("JSON parse error in ") + path.string() + ": " +
                                  e.what());
    }
    return parse_config(j);
}

inline nlohmann::json ExperimentConfig::resolved() const {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    if (dist) j["distribution"] = detail::distribution_to_json(*dist);
    if (marginal) j["marginal"] = detail::marginal_to_json(*marginal);
    if (command == "classify") {
        j["delta"] = delta;
    } else if (command == "tail") {
        if (start_is_scalar)
            j["start"] = start[0];
        else
            j["start"] = {start[0], start[1]};
        j["n_grid"] = n_grid;
        j["paths"] = paths;
        j["seed"] = seed;
        if (window_lo != 0 || window_hi != 0) j["window"] = {window_lo, window_hi};
    } else if (command == "harmonic") {
        j["mode"] = mode;
        if (mode == "h2d") {
            j["start"] = {start[0], start[1]};
            if (!points2d.empty()) {
                auto& ps = j["points"] = nlohmann::json::array();
                for (const auto& p : points2d) ps.push_back({p[0], p[1]});
            }
            j["horizon"] = horizon;
            j["paths"] = paths;
            j["seed"] = seed;
        } else if (mode == "h1_lattice") {
            j["start"] = start[0];
            if (!x_list.empty()) j["x_list"] = x_list;
            j["truncation"] = truncation;
        } else {
            j["start"] = start[0];
            if (!x_list.empty()) j["x_list"] = x_list;
            j["horizon"] = horizon;
            j["paths"] = paths;
            j["seed"] = seed;
        }
    } else if (command == "lyapunov") {
        j["grid_max"] = grid_max;
        j["grid_step"] = grid_step;
    } else if (command == "duality") {
        j["trials"] = trials;
        j["n_max"] = n_max;
        j["seed"] = seed;
    } else if (command == "occupation") {
        j["box"] = {(*box)[0], (*box)[1]};
        j["n_max"] = n_max;
        j["paths"] = paths;
        j["seed"] = seed;
    }
    return j;
}

}  // namespace quadwalk
