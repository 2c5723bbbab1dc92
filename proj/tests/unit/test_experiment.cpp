#include "doctest.h"

#include "inls/errors.hpp"
#include "inls/experiment.hpp"
#include "inls/initial_data.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace inls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("inls_unit_" + name);
    fs::remove_all(p);
    return p;
}

RunConfig tiny(const fs::path& out) {
    RunConfig c;
    c.n = 32;
    c.length = 16.0;
    c.dt = 0.01;
    c.t_end = 0.2;
    c.snapshot_stride = 5;
    c.escape_policy = EscapePolicy::record;
    c.diagnostics = {"conserved"};
    c.output_dir = out.string();
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config json round trip and hash") {
    RunConfig c = tiny("a");
    c.p = "3/2";
    c.weight = {"inverse_quadratic", {{"width", 2.0}}};
    c.initial = {"ring", {{"amplitude", 0.5}, {"radius", 3.0}, {"width", 1.0}}};
    c.perturbation = InitialDataSpec{"gaussian", {{"amplitude", 0.01}}};
    const RunConfig back = parse_run_config(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(c).size() == 64);

    RunConfig moved = c;
    moved.output_dir = "elsewhere";
    CHECK(config_hash(moved) == config_hash(c));
    moved.dt = 0.02;
    CHECK(config_hash(moved) != config_hash(c));
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(parse_run_config("{\"dt\": 0.1, \"colour\": 3}"), ValidationError);
    CHECK_THROWS_AS(parse_run_config("not json"), ValidationError);
    CHECK_THROWS_AS(parse_run_config("{\"schema_version\": 99}"), ValidationError);
    CHECK_THROWS_AS(parse_run_config("{\"grid\": {\"n\": 32, \"size\": 4}}"), ValidationError);
    const RunConfig c = parse_run_config("{\"grid\": {\"n\": 64, \"length\": 20}, \"p\": \"3\"}");
    CHECK(c.n == 64);
    CHECK(c.length == 20.0);
    CHECK(c.p == "3");
}

TEST_CASE("overrides") {
    RunConfig c;
    apply_override(c, "dt", "0.005");
    apply_override(c, "amplitude", "2");
    apply_override(c, "weight", "anisotropic");
    apply_override(c, "initial.cx", "1.5");
    apply_override(c, "diagnostics", "conserved,morawetz");
    apply_override(c, "escape_policy", "record");
    CHECK(c.dt == 0.005);
    CHECK(c.initial.params.at("amplitude") == 2.0);
    CHECK(c.initial.params.at("cx") == 1.5);
    CHECK(c.weight.family == "anisotropic");
    CHECK(c.diagnostics.size() == 2);
    CHECK(c.escape_policy == EscapePolicy::record);
    CHECK_THROWS_AS(apply_override(c, "dt", "fast"), ValidationError);
    CHECK_THROWS_AS(apply_override(c, "colour", "red"), ValidationError);
    CHECK_THROWS_AS(apply_override(c, "escape_policy", "maybe"), ValidationError);
    CHECK_THROWS_AS(parse_overrides({"novalue"}), ValidationError);
    CHECK(parse_overrides({"a=b=c"}).front().second == "b=c");
}

TEST_CASE("every preset references catalog entries") {
    for (const auto& p : preset_catalog()) {
        INFO(p.name);
        CHECK_NOTHROW(make_weight(p.config.weight));
        CHECK_NOTHROW(make_initial_data(p.config.initial, Grid(p.config.n, p.config.length)));
        CHECK_NOTHROW(to_solver_config(p.config));
        for (const auto& cell : p.matrix) {
            RunConfig c = p.config;
            for (const auto& [k, v] : cell) CHECK_NOTHROW(apply_override(c, k, v));
        }
    }
    CHECK_THROWS_AS(find_preset("nope"), ValidationError);
    CHECK(find_preset("morawetz-matrix").matrix.size() == 9);
}

TEST_CASE("execute_run writes a verifiable manifest") {
    const fs::path out = scratch("run");
    RunConfig c = tiny(out);
    c.weight = {"zero", {}};
    const RunManifest m = execute_run(c);
    CHECK(m.status == "ok");
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "summary.json"));
    CHECK(fs::exists(out / "conserved.csv"));
    CHECK(m.scalars.at("max_mass_drift") < 1e-13);
    std::vector<std::string> problems;
    CHECK(verify_manifest(out / "manifest.json", &problems));
    CHECK(problems.empty());

    const RunManifest back = read_manifest(out / "manifest.json");
    CHECK(back.config_hash == m.config_hash);
    CHECK(back.files.size() == m.files.size());
    // the manifest doubles as a config file
    CHECK(config_hash(load_run_config(out / "manifest.json")) == m.config_hash);

    // potential energy column is zero throughout for the free flow
    std::istringstream csv(slurp(out / "conserved.csv"));
    std::string line;
    std::getline(csv, line);
    REQUIRE(line.find("potential") != std::string::npos);
    int col = 0;
    {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',') && cell != "potential") ++col;
    }
    while (std::getline(csv, line)) {
        std::istringstream r(line);
        std::string cell;
        for (int k = 0; k <= col; ++k) std::getline(r, cell, ',');
        CHECK(std::stod(cell) == 0.0);
    }

    {
        std::ofstream tamper(out / "conserved.csv", std::ios::app);
        tamper << "0,0,0,0,0\n";
    }
    problems.clear();
    CHECK_FALSE(verify_manifest(out / "manifest.json", &problems));
    CHECK_FALSE(problems.empty());
    fs::remove_all(out);
}

TEST_CASE("reproduction is bit exact") {
    const fs::path out = scratch("repro");
    RunConfig c = tiny(out / "first");
    c.diagnostics = {"conserved", "duhamel"};
    c.t_end = 0.3;
    c.snapshot_stride = 1;
    execute_run(c);
    const auto rep = reproduce_manifest(out / "first" / "manifest.json", out / "second");
    CHECK(rep.identical);
    CHECK_FALSE(rep.compared.empty());
    CHECK(rep.mismatched.empty());
    fs::remove_all(out);
}

TEST_CASE("inadmissible weights are refused unless waived") {
    const fs::path out = scratch("adm");
    RunConfig c = tiny(out);
    c.weight = {"constant", {}};
    c.p = "2";
    CHECK_THROWS_AS(execute_run(c), ValidationError);
    c.waive_admissibility = true;
    CHECK_NOTHROW(execute_run(c));
    fs::remove_all(out);
}

TEST_CASE("sweep") {
    const fs::path out = scratch("sweep");
    CHECK(sweep("plane-wave", "dt", {}, {{"output_dir", out.string()}}).empty());
    CHECK_THROWS_AS(sweep("plane-wave", "colour", {1.0}), ValidationError);

    const auto entries = sweep("plane-wave", "dt", {1e-2, 5e-3, 3e-3}, {{"output_dir", out.string()}}, 2);
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].manifest.has_value());
    CHECK(entries[1].manifest.has_value());
    // 1 / 3e-3 is not an integer step count: recorded, not thrown
    CHECK_FALSE(entries[2].manifest.has_value());
    CHECK(entries[2].exit_code == 2);
    CHECK(fs::exists(out / "sweep_dt" / "sweep.csv"));
    fs::remove_all(out);
}

}
