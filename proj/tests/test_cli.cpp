#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "quadwalk/io.hpp"

// QUADWALK_CLI_PATH and QUADWALK_CONFIG_DIR come from the build system.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kBase = fs::temp_directory_path() / "quadwalk_cli_tests";

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(QUADWALK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = kBase / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string bundled(const std::string& name) {
    return std::string(QUADWALK_CONFIG_DIR) + "/" + name;
}

json read_json(const fs::path& p) {
    return json::parse(quadwalk::read_text_file(p));
}

void write_small_tail_config(const fs::path& p, std::uint64_t seed) {
    json cfg{{"schema_version", 1},
             {"command", "tail"},
             {"marginal",
              json{{"kind", "finite_support"},
                   {"atoms", json::array({json::array({1, "1/2"}),
                                          json::array({-1, "1/2"})})}}},
             {"start", 1},
             {"n_max", 400},
             {"paths", 20000},
             {"seed", seed}};
    quadwalk::write_text_file(p, cfg.dump(2) + "\n");
}

}  // namespace

TEST(CliClassify, BundledConfigsProduceTheExpectedVerdicts) {
    const struct {
        const char* config;
        const char* case_label;
        const char* verdict;
    } cases[] = {
        {"classify_drift_down.json", "negative_drift", "transient"},
        {"classify_drift_up.json", "positive_drift", "positive_recurrent"},
        {"classify_centered_rho0.json", "both_centered", "null_recurrent"},
        {"classify_centered_rho_neg.json", "both_centered", "transient"},
        {"classify_centered_rho_pos.json", "both_centered", "null_recurrent"},
        {"classify_mixed_drift.json", "mixed_drift", "null_recurrent"},
    };
    for (const auto& c : cases) {
        const fs::path out = fresh_dir(std::string("classify_") + c.case_label +
                                       "_" + c.verdict);
        ASSERT_EQ(run_cli("classify --config " + bundled(c.config) + " --out " +
                          out.string()),
                  0)
            << c.config;
        const json report = read_json(out / "report.json");
        EXPECT_EQ(report["schema_version"], 1);
        EXPECT_EQ(report["status"], "ok");
        EXPECT_EQ(report["classification"]["case"], c.case_label) << c.config;
        EXPECT_EQ(report["classification"]["verdict"], c.verdict) << c.config;
        EXPECT_TRUE(fs::exists(out / "config.json"));
        EXPECT_TRUE(fs::exists(out / "results.csv"));
    }
}

TEST(CliTail, ReplayOfEmittedConfigIsBitIdentical) {
    const fs::path out1 = fresh_dir("tail_run1");
    const fs::path out2 = fresh_dir("tail_run2");
    const fs::path cfg = kBase / "tail_small.json";
    write_small_tail_config(cfg, 7);

    ASSERT_EQ(run_cli("tail --config " + cfg.string() + " --out " + out1.string()), 0);
    // Re-run from the resolved config the first run emitted.
    ASSERT_EQ(run_cli("tail --config " + (out1 / "config.json").string() + " --out " +
                      out2.string()),
              0);
    for (const char* name : {"config.json", "results.csv", "report.json"}) {
        EXPECT_EQ(quadwalk::read_text_file(out1 / name),
                  quadwalk::read_text_file(out2 / name))
            << name;
    }
    const json report = read_json(out1 / "report.json");
    EXPECT_EQ(report["command"], "tail");
    EXPECT_TRUE(report.contains("fit"));
    EXPECT_TRUE(report.contains("sqrt_tail"));  // centered 1-D law
}

TEST(CliTail, SeedFlagOverridesConfigAndChangesResults) {
    const fs::path out1 = fresh_dir("tail_seed_base");
    const fs::path out2 = fresh_dir("tail_seed_override");
    const fs::path cfg = kBase / "tail_seed.json";
    write_small_tail_config(cfg, 7);

    ASSERT_EQ(run_cli("tail --config " + cfg.string() + " --out " + out1.string()), 0);
    ASSERT_EQ(run_cli("tail --config " + cfg.string() + " --seed 99 --out " +
                      out2.string()),
              0);
    EXPECT_NE(quadwalk::read_text_file(out1 / "results.csv"),
              quadwalk::read_text_file(out2 / "results.csv"));
    EXPECT_EQ(read_json(out2 / "config.json")["seed"], 99);
    EXPECT_EQ(read_json(out1 / "config.json")["seed"], 7);
}

TEST(CliTail, WorkerCountDoesNotChangeArtifacts) {
    const fs::path out1 = fresh_dir("tail_w1");
    const fs::path out3 = fresh_dir("tail_w3");
    const fs::path cfg = kBase / "tail_workers.json";
    write_small_tail_config(cfg, 11);

    ASSERT_EQ(run_cli("tail --config " + cfg.string() + " --workers 1 --out " +
                      out1.string()),
              0);
    ASSERT_EQ(run_cli("tail --config " + cfg.string() + " --workers 3 --out " +
                      out3.string()),
              0);
    for (const char* name : {"config.json", "results.csv", "report.json"}) {
        EXPECT_EQ(quadwalk::read_text_file(out1 / name),
                  quadwalk::read_text_file(out3 / name))
            << name;
    }
}

TEST(CliErrors, ExitCodesFollowTheContract) {
    const fs::path out = fresh_dir("errors");

    // Missing config file.
    EXPECT_EQ(run_cli("classify --config " + (kBase / "no_such.json").string() +
                      " --out " + out.string()),
              2);

    // Malformed JSON.
    const fs::path broken = kBase / "broken.json";
    quadwalk::write_text_file(broken, "{ nope");
    EXPECT_EQ(run_cli("classify --config " + broken.string() + " --out " + out.string()),
              2);

    // Config names a different command than the one invoked.
    EXPECT_EQ(run_cli("tail --config " + bundled("classify_centered_rho0.json") +
                      " --out " + out.string()),
              2);

    // Harmonic with an unknown mode.
    const fs::path badmode = kBase / "badmode.json";
    quadwalk::write_text_file(
        badmode,
        json{{"schema_version", 1},
             {"command", "harmonic"},
             {"mode", "h9"},
             {"marginal",
              json{{"kind", "finite_support"},
                   {"atoms", json::array({json::array({1, "1/2"}),
                                          json::array({-1, "1/2"})})}}}}
                .dump(2));
    EXPECT_EQ(run_cli("harmonic --config " + badmode.string() + " --out " + out.string()),
              2);

    // Lyapunov on a drifting marginal: regime error.
    const fs::path drifting = kBase / "drifting.json";
    quadwalk::write_text_file(
        drifting,
        json{{"schema_version", 1},
             {"command", "lyapunov"},
             {"marginal",
              json{{"kind", "finite_support"},
                   {"atoms", json::array({json::array({1, "3/4"}),
                                          json::array({-1, "1/4"})})}}}}
                .dump(2));
    const fs::path out_regime = fresh_dir("regime_error");
    EXPECT_EQ(run_cli("lyapunov --config " + drifting.string() + " --out " +
                      out_regime.string()),
              3);
    const json failure = read_json(out_regime / "report.json");
    EXPECT_EQ(failure["status"], "error");
    EXPECT_EQ(failure["error"]["exit_code"], 3);

    // Tail whose survivors die out long before the fit window.
    const fs::path starved = kBase / "starved.json";
    quadwalk::write_text_file(
        starved,
        json{{"schema_version", 1},
             {"command", "tail"},
             {"marginal",
              json{{"kind", "finite_support"},
                   {"atoms", json::array({json::array({1, "1/4"}),
                                          json::array({-1, "3/4"})})}}},
             {"start", 1},
             {"n_max", 1000},
             {"paths", 1000},
             {"window", json::array({100, 1000})},
             {"seed", 5}}
                .dump(2));
    const fs::path out_starved = fresh_dir("starved");
    EXPECT_EQ(run_cli("tail --config " + starved.string() + " --out " +
                      out_starved.string()),
              5);
    const json starved_report = read_json(out_starved / "report.json");
    EXPECT_EQ(starved_report["status"], "error");
    EXPECT_EQ(starved_report["error"]["type"], "insufficient_survivors");
}

TEST(CliLyapunov, BundledUnitStepTable) {
    const fs::path out = fresh_dir("lyapunov_pm1");
    ASSERT_EQ(run_cli("lyapunov --config " + bundled("lyapunov_pm1.json") + " --out " +
                      out.string()),
              0);
    const json report = read_json(out / "report.json");
    EXPECT_EQ(report["A"], 8.0);
    EXPECT_NEAR(report["x0"].get<double>(), 1.0, 1e-9);
    EXPECT_NEAR(report["R"].get<double>(), 3.0, 1e-9);
    EXPECT_TRUE(report["exact_closed_form"].get<bool>());
    EXPECT_TRUE(report["superharmonic"]["pass"].get<bool>());
    EXPECT_LE(report["superharmonic"]["max_delta"].get<double>(), 1e-12);

    std::ifstream csv(out / "results.csv");
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "x,a,b,m,V,delta");
}

TEST(CliDuality, BundledLatticeConfigMatchesExactly) {
    const fs::path out = fresh_dir("duality_lattice");
    ASSERT_EQ(run_cli("duality --config " + bundled("duality_lattice.json") + " --out " +
                      out.string()),
              0);
    const json report = read_json(out / "report.json");
    EXPECT_TRUE(report["pass"].get<bool>());
    EXPECT_EQ(report["max_relative_deviation"], 0.0);  // lattice arithmetic is exact
    EXPECT_EQ(report["trials"], 10000);
}

TEST(CliOccupation, BundledRecurrentConfigAgrees) {
    const fs::path out = fresh_dir("occupation_recurrent");
    ASSERT_EQ(run_cli("occupation --config " + bundled("occupation_recurrent.json") +
                      " --out " + out.string()),
              0);
    const json report = read_json(out / "report.json");
    EXPECT_TRUE(report["agreement"]["pass"].get<bool>());
    EXPECT_GT(report["expected_visits"].get<double>(), 1.0);
}

TEST(CliHarmonic, BundledLatticeTableIsSelfConsistent) {
    const fs::path out = fresh_dir("harmonic_lattice");
    ASSERT_EQ(run_cli("harmonic --config " + bundled("harmonic_h1_lattice.json") +
                      " --out " + out.string()),
              0);
    const json report = read_json(out / "report.json");
    EXPECT_EQ(report["status"], "ok");
    EXPECT_LE(report["max_abs_residual"].get<double>(), 1e-10);
    std::ifstream csv(out / "results.csv");
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "x,value,residual,bias_bound");
}
