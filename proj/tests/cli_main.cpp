// End-to-end tests of the command-line tool: exit codes, file outputs, and
// the scripting contract (0 ok, 2 config error, 3 numerical failure).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef SQFIELD_CLI_PATH
#error "SQFIELD_CLI_PATH must be defined"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(SQFIELD_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path make_workdir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("sqfield_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const json& j) {
    const fs::path p = dir / "config.json";
    std::ofstream out(p);
    out << j.dump(2);
    return p;
}

json fig1_profile() {
    return {{"variant", "piecewise_linear"}, {"omega_i", 3.0}, {"omega_f", 8.0},
            {"t_a", 10.0},                   {"t_b", 20.0}};
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("profile evaluation table and domain guard") {
    const auto dir = make_workdir("profile");
    const auto cfg = write_config(dir, {{"profile", fig1_profile()}});
    const auto r = run_cli("--config " + cfg.string() + " profile --at 10 --at 15", dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("10,9") != std::string::npos);
    CHECK(r.out.find("15,36.5") != std::string::npos);

    const auto bad = run_cli("--config " + cfg.string() + " profile --at -1", dir);
    CHECK(bad.exit_code == 2);
}

TEST_CASE("malformed config names the offending key, exit 2") {
    const auto dir = make_workdir("badcfg");
    const auto cfg = write_config(
        dir, {{"profile", {{"variant", "piecewise_linear"}, {"omega_x", 3.0}}}});
    const auto r = run_cli("--config " + cfg.string() + " profile --at 1", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("omega_x") != std::string::npos);
}

TEST_CASE("squeeze reports the reference value and constancy residual") {
    const auto dir = make_workdir("squeeze");
    const double ta = 1.5 * M_PI;
    const auto cfg = write_config(
        dir, {{"profile",
               {{"variant", "sine_squared"}, {"omega_i", 1.0}, {"omega_f", 100.0},
                {"t_a", ta}, {"t_b", ta + 0.05}, {"n", 1}}}});
    const auto r = run_cli("--config " + cfg.string() + " squeeze", dir);
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.out);
    CHECK(std::abs(out.at("cosh2eta").get<double>() - 25.62206) < 0.03);
    CHECK(out.at("constancy_residual").get<double>() < 1e-7);
    CHECK(!out.at("phase_undefined").get<bool>());
}

TEST_CASE("squeeze exit 3 on Wronskian alarm") {
    const auto dir = make_workdir("drift");
    json cfg_json = {{"profile", fig1_profile()},
                     {"solver", {{"wronskian_alarm", 1e-18}}}};
    const auto cfg = write_config(dir, cfg_json);
    const auto r = run_cli("--config " + cfg.string() + " squeeze", dir);
    CHECK(r.exit_code == 3);
}

TEST_CASE("shift sweep is flat and replayable from metadata") {
    const auto dir = make_workdir("sweep");
    const auto cfg = write_config(dir, {{"profile", fig1_profile()}});
    const auto r = run_cli("--config " + cfg.string() + " --out " + dir.string() +
                               " sweep --axis shift --range 0 7 --samples 5 --observe 30",
                           dir);
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp(dir / "sweep.csv");
    CHECK(count_lines(csv) == 6);  // header + 5 rows
    CHECK(csv.find("axis_value,eta,") != std::string::npos);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    double eta_min = 1e300, eta_max = -1e300;
    while (std::getline(lines, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double eta = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        eta_min = std::min(eta_min, eta);
        eta_max = std::max(eta_max, eta);
        CHECK(line.rfind(",ok") == line.size() - 3);
    }
    CHECK((eta_max - eta_min) / eta_min < 1e-7);

    const json meta = json::parse(slurp(dir / "sweep.meta.json"));
    CHECK(meta.at("axis") == "shift");
    CHECK(meta.at("samples") == 5);
    CHECK(meta.contains("code_version"));
    CHECK(meta.at("solver").contains("rel_tol"));

    const auto usage = run_cli("--config " + cfg.string() +
                                   " sweep --axis shift --range 0 7 --samples 1",
                               dir);
    CHECK(usage.exit_code == 2);
}

TEST_CASE("stability grid with family curve") {
    const auto dir = make_workdir("stability");
    const auto cfg = write_config(
        dir, {{"profile",
               {{"variant", "sine_squared"}, {"omega_i", 3.0}, {"omega_f", 8.0},
                {"t_a", 10.0}, {"t_b", 15.0}, {"n", 11}}}});
    const auto r = run_cli("--config " + cfg.string() + " --out " + dir.string() +
                               " stability --a-range 0 4 --q-range 0 1 --res 5" +
                               " --curve-tb 10.5 15 --curve-samples 8",
                           dir);
    REQUIRE(r.exit_code == 0);
    // default grid is trimmed to the physical wedge q <= a/2: 19 of 25 cells
    CHECK(count_lines(slurp(dir / "stability_grid.csv")) == 20);
    CHECK(count_lines(slurp(dir / "stability_curve.csv")) == 9);
    const json meta = json::parse(slurp(dir / "stability.meta.json"));
    CHECK(meta.at("res") == 5);
    CHECK(meta.at("wedge_only") == true);

    const auto full = run_cli("--config " + cfg.string() + " --out " + dir.string() +
                                  " stability --a-range 0 4 --q-range 0 1 --res 5" +
                                  " --full-plane --curve-tb 10.5 15 --curve-samples 8",
                              dir);
    REQUIRE(full.exit_code == 0);
    CHECK(count_lines(slurp(dir / "stability_grid.csv")) == 26);

    const auto usage =
        run_cli("--config " + cfg.string() + " stability --res 1", dir);
    CHECK(usage.exit_code == 2);
}

TEST_CASE("observables rows carry the cancellation") {
    const auto dir = make_workdir("observables");
    const auto cfg = write_config(
        dir, {{"atom", {{"m", 1.0}, {"gamma", 0.2}, {"omega_r", 1.0}}},
              {"bath", {{"beta_T", 2.0}, {"eta", 0.0}}}});
    const auto r = run_cli("--config " + cfg.string() + " --out " + dir.string() +
                               " observables --r 10 --t-range 12 14 --samples 2",
                           dir);
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(slurp(dir / "observables.csv"));
    std::string header, row;
    std::getline(lines, header);
    CHECK(header ==
          "r,t,tr_st_rr,tr_st_hr,tr_ns_rr,tr_ns_hr,tt_st,tt_ns,err");
    int rows = 0;
    while (std::getline(lines, row)) {
        ++rows;
        std::istringstream cells(row);
        std::string cell;
        std::vector<double> v;
        while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
        REQUIRE(v.size() == 9);
        CHECK(std::abs(v[2] + v[3]) <= std::max(v[8], 1e-8 * std::abs(v[2])));
        CHECK(v[4] == 0.0);  // eta = 0: no nonstationary flux
    }
    CHECK(rows == 2);
}

TEST_CASE("selftest single criterion and seedless flag contract") {
    const auto dir = make_workdir("selftest");
    const auto r = run_cli("selftest --criterion 11", dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("criterion 11 [PASS]") != std::string::npos);

    const auto flag = run_cli("--seedless selftest --criterion 11", dir);
    CHECK(flag.exit_code == 0);

    const auto misuse = run_cli("--seedless=true selftest --criterion 11", dir);
    CHECK(misuse.exit_code == 2);
}
