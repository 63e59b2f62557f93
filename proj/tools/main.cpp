// quadwalk — command-line front end for the experiment runners.
//
// Usage:  quadwalk <command> --config PATH --out DIR [--workers N] [--seed U64]
//
// Every run writes three artifacts into the output directory: config.json
// (the fully resolved configuration, replayable bit for bit), results.csv,
// and report.json.  Exit codes: 0 success, 2 config error, 3 regime or
// precondition mismatch, 4 invariant violation (details in report.json),
// 5 budget exhausted or too few surviving paths.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadwalk/experiments.hpp"
#include "quadwalk/lattice_tail.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int workers = 0;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    // No ExistingFile check here: a missing file must surface as a config
    // error (exit 2), not a CLI validation error.
    sub->add_option("--config", opts.config_path, "Path to a JSON config file")->required();
    sub->add_option("--out", opts.out_dir, "Directory for artifacts (created if missing)")
        ->required();
    sub->add_option("--workers", opts.workers,
                    "Worker threads (0 = hardware default); results are identical for any "
                    "value");
    sub->add_option("--seed", opts.seed, "Override the config's master seed");
}

void write_failure_record(const std::string& out_dir, const std::string& command,
                          const std::string& type, const std::string& message,
                          int exit_code) {
    if (out_dir.empty()) return;
    try {
        std::filesystem::create_directories(out_dir);
        nlohmann::json j;
        j["schema_version"] = quadwalk::kSchemaVersion;
        j["command"] = command;
        j["status"] = "error";
        j["error"] = {{"type", type}, {"message", message}, {"exit_code", exit_code}};
        quadwalk::write_text_file(std::filesystem::path(out_dir) / "report.json",
                                  j.dump(2) + "\n");
    } catch (...) {
        // Reporting is best effort; the exit code still carries the failure.
    }
}

int run(const std::string& command, const CommonOpts& opts) {
    try {
        quadwalk::ExperimentConfig cfg = quadwalk::load_config(opts.config_path);
        if (opts.seed) cfg.seed = *opts.seed;
        return quadwalk::run_experiment(cfg, command, opts.out_dir, opts.workers);
    } catch (const quadwalk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        write_failure_record(opts.out_dir, command, "config", e.what(), quadwalk::kExitConfig);
        return quadwalk::kExitConfig;
    } catch (const quadwalk::RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        write_failure_record(opts.out_dir, command, "regime", e.what(), quadwalk::kExitRegime);
        return quadwalk::kExitRegime;
    } catch (const quadwalk::LatticeBudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        write_failure_record(opts.out_dir, command, "budget", e.what(), quadwalk::kExitBudget);
        return quadwalk::kExitBudget;
    } catch (const quadwalk::InsufficientSurvivorsError& e) {
        std::cerr << "estimation error: " << e.what() << "\n";
        write_failure_record(opts.out_dir, command, "insufficient_survivors", e.what(),
                             quadwalk::kExitBudget);
        return quadwalk::kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_failure_record(opts.out_dir, command, "internal", e.what(), 1);
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "quadwalk — simulation and numerical analysis of two-dimensional queueing "
        "recursions and quadrant exit times"};
    app.require_subcommand(1);

    static const struct {
        const char* name;
        const char* help;
    } kCommands[] = {
        {"classify", "Check model assumptions and classify the recurrence regime"},
        {"tail", "Estimate the exit-time tail and fit its polynomial decay exponent"},
        {"harmonic", "Estimate harmonic functions of the killed walk (h1 or 2-D h)"},
        {"lyapunov", "Build the drift function V and verify it is superharmonic"},
        {"duality", "Randomized check of the recursion against its unrolled dual form"},
        {"occupation", "Compare occupation-time and exit-time series for the dual pair"},
    };

    CommonOpts opts[std::size(kCommands)];
    CLI::App* subs[std::size(kCommands)];
    for (std::size_t i = 0; i < std::size(kCommands); ++i) {
        subs[i] = app.add_subcommand(kCommands[i].name, kCommands[i].help);
        add_common(subs[i], opts[i]);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < std::size(kCommands); ++i)
        if (subs[i]->parsed()) return run(kCommands[i].name, opts[i]);
    return 1;
}
