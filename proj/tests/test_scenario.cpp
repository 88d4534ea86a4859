#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hballs/errors.hpp"
#include "hballs/scenario.hpp"

using namespace hballs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path root;
    TempDir() {
        root = fs::temp_directory_path() / ("hballs_test_" + std::to_string(::getpid()));
        fs::create_directories(root);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(root, ec);
    }
    std::string file(const std::string& name, const json& body) const {
        fs::path p = root / name;
        std::ofstream(p) << body.dump(2);
        return p.string();
    }
    std::string sub(const std::string& name) const { return (root / name).string(); }
};

// contact ball against a flat wall, coarse enough to run in milliseconds.
// rel_tol absorbs the O(h) free-boundary band in the node-counted mass.
json contact_config(const std::string& out) {
    return json{
        {"kind", "ball"},
        {"grid",
         {{"x_min", -0.6}, {"x_max", 0.6}, {"y_min", 0.0}, {"y_max", 0.8}, {"h", 0.02}}},
        {"domain", {{"type", "half_plane"}}},
        {"x0", {0.0, 0.1}},
        {"alpha", 0.12566370614359172},
        {"checks", {{"rel_tol", 0.10}}},
        {"probes",
         {{"arc",
           {{"radius", 0.5}, {"count", 8}, {"angle0", 0.15}, {"angle1", 3.0}}}}},
        {"out", out}};
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    json j;
    f >> j;
    return j;
}

}  // namespace

TEST_CASE("compute runs a scenario and writes the full artifact set") {
    TempDir td;
    RunRequest req;
    req.config_path = td.file("ball.json", contact_config(td.sub("out")));
    CHECK(run_scenario(req) == ExitPass);

    for (const char* f : {"summary.json", "omega.pgm", "u.csv", "nu.csv", "probes.csv"})
        CHECK(fs::exists(td.root / "out" / f));

    json s = read_json(td.sub("out/summary.json"));
    CHECK(s.at("overall").get<bool>());
    CHECK(s.at("kind") == "ball");
    const json& checks = s.at("checks");
    for (const char* name : {"u_nonnegative", "mass_balance", "mean_value[0]"}) {
        INFO(name);
        REQUIRE(checks.contains(name));
        const json& c = checks.at(name);
        CHECK(c.contains("value"));
        CHECK(c.contains("tol"));
        CHECK(c.at("pass").get<bool>());
    }
    const json& st = s.at("stats");
    for (const char* k : {"lambda_omega", "nu_total", "iterations", "residual"})
        CHECK(st.contains(k));
    CHECK(st.at("lambda_omega").get<double>() > 0.0);
}

TEST_CASE("verify writes only the summary") {
    TempDir td;
    RunRequest req;
    req.config_path = td.file("ball.json", contact_config(td.sub("vout")));
    req.write_artifacts = false;
    CHECK(run_scenario(req) == ExitPass);
    CHECK(fs::exists(td.root / "vout" / "summary.json"));
    CHECK_FALSE(fs::exists(td.root / "vout" / "omega.pgm"));
    CHECK_FALSE(fs::exists(td.root / "vout" / "u.csv"));
}

TEST_CASE("config and solver failures map to exit codes") {
    TempDir td;

    RunRequest missing;
    missing.config_path = td.sub("nope.json");
    CHECK(run_scenario(missing) == ExitConfigError);
    CHECK_THROWS_AS(load_config(missing), ConfigError);

    fs::path bad = td.root / "bad.json";
    std::ofstream(bad) << "{ not json";
    RunRequest badreq;
    badreq.config_path = bad.string();
    CHECK(run_scenario(badreq) == ExitConfigError);

    RunRequest unknown;
    unknown.config_path = td.file("ball.json", contact_config(td.sub("o1")));
    unknown.overrides = {"kind=bogus"};
    CHECK(run_scenario(unknown) == ExitConfigError);

    // geometry that cannot hold the ball is a config-class error
    RunRequest toosmall;
    toosmall.config_path = td.file("ball2.json", contact_config(td.sub("o2")));
    toosmall.overrides = {"alpha=3.0"};
    CHECK(run_scenario(toosmall) == ExitConfigError);

    RunRequest stuck;
    stuck.config_path = td.file("ball3.json", contact_config(td.sub("o3")));
    stuck.overrides = {"solver.max_sweeps=3"};
    CHECK(run_scenario(stuck) == ExitSolverError);
    json s = read_json(td.sub("o3/summary.json"));
    CHECK_FALSE(s.at("overall").get<bool>());
    CHECK(s.at("exit_code").get<int>() == ExitSolverError);

    RunRequest strict;
    strict.config_path = td.file("ball4.json", contact_config(td.sub("o4")));
    strict.overrides = {"checks.rel_tol=1e-9"};
    CHECK(run_scenario(strict) == ExitCheckFailed);
    CHECK_FALSE(read_json(td.sub("o4/summary.json")).at("overall").get<bool>());
}

TEST_CASE("overrides reach nested keys and flags rewrite the config") {
    TempDir td;
    RunRequest req;
    req.config_path = td.file("ball.json", contact_config("unused"));
    req.overrides = {"grid.h=0.04", "alpha=0.05", "solver.mode=serial"};
    req.green = "numeric";
    req.out_dir = td.sub("elsewhere");
    json cfg = load_config(req);
    CHECK(cfg["grid"]["h"].get<double>() == 0.04);
    CHECK(cfg["alpha"].get<double>() == 0.05);
    CHECK(cfg["solver"]["mode"] == "serial");
    CHECK(cfg["green"] == "numeric");
    CHECK(cfg["out"] == td.sub("elsewhere"));

    RunRequest badkey = req;
    badkey.overrides = {"no_equals_sign"};
    CHECK_THROWS_AS(load_config(badkey), ConfigError);
}

TEST_CASE("alpha sweep checks nesting and writes the table") {
    TempDir td;
    RunRequest req;
    req.config_path = td.file("ball.json", contact_config(td.sub("sweep")));
    req.overrides = {"checks.rel_tol=0.2"};  // smaller alpha, thicker relative band
    req.write_artifacts = false;
    CHECK(run_sweep(req, "alpha", {0.05, 0.12566370614359172}) == ExitPass);

    CHECK(fs::exists(td.root / "sweep" / "alpha=0.05" / "summary.json"));
    std::ifstream csv(td.sub("sweep/sweep.csv"));
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header.find("value,exit,overall") == 0);
    for (const char* col : {"lambda_omega", "nu_total", "residual"}) {
        INFO(col);
        CHECK(header.find(col) != std::string::npos);
    }
    int rows = 0;
    for (std::string line; std::getline(csv, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == 2);

    json s = read_json(td.sub("sweep/sweep_summary.json"));
    CHECK(s.at("exit_code").get<int>() == ExitPass);
    CHECK(s.at("nesting").at("pass").get<bool>());
    CHECK(s.at("nesting").at("escaped_nodes").get<int>() == 0);
}

TEST_CASE("h sweep reruns the grid without a nesting block") {
    TempDir td;
    RunRequest req;
    req.config_path = td.file("ball.json", contact_config(td.sub("hsweep")));
    req.overrides = {"checks.rel_tol=0.2"};
    req.write_artifacts = false;
    // keep the atom's 2-cell interior margin: y0 = 0.1 needs h <= 0.1/3
    CHECK(run_sweep(req, "h", {0.025, 0.02}) == ExitPass);
    json s = read_json(td.sub("hsweep/sweep_summary.json"));
    CHECK_FALSE(s.contains("nesting"));

    CHECK(run_sweep(req, "radius", {0.1}) == ExitConfigError);
    CHECK(run_sweep(req, "alpha", {}) == ExitConfigError);
}
