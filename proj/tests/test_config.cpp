#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "sqfield/config.hpp"

using namespace sqfield;
using nlohmann::json;

TEST_SUITE_BEGIN("config");

TEST_CASE("defaults and full parse") {
    const auto cfg = parse_config(json::object());
    CHECK(cfg.profile.variant == ProfileVariant::Constant);
    CHECK(cfg.bath.zero_temperature());
    CHECK(cfg.solver.rel_tol == doctest::Approx(1e-10));

    const json j = {
        {"profile",
         {{"variant", "sine_squared"}, {"omega_i", 1.0}, {"omega_f", 100.0},
          {"t_a", 4.71238898038469}, {"t_b", 4.76238898038469}, {"n", 1}}},
        {"atom", {{"m", 1.0}, {"gamma", 0.2}, {"omega_r", 1.0}}},
        {"bath", {{"beta_T", 2.0}, {"eta", 0.5}, {"theta", 0.0}}},
        {"solver", {{"rel_tol", 1e-11}}},
        {"output", {{"directory", "out"}, {"format", "csv"}}},
    };
    const auto full = parse_config(j);
    CHECK(full.profile.variant == ProfileVariant::SineSquared);
    CHECK(full.profile.omega_f == doctest::Approx(100.0));
    CHECK(full.atom.gamma == doctest::Approx(0.2));
    CHECK(full.bath.beta_T == doctest::Approx(2.0));
    CHECK(full.solver.rel_tol == doctest::Approx(1e-11));
    CHECK(full.output.directory == "out");
}

TEST_CASE("unknown keys are rejected everywhere") {
    CHECK_THROWS_AS(parse_config({{"profil", json::object()}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"profile", {{"omega", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"atom", {{"mass", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"bath", {{"temperature", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"solver", {{"tol", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"output", {{"fmt", "csv"}}}}), ConfigError);
}

TEST_CASE("bath temperature forms") {
    const auto zero =
        parse_config({{"bath", {{"zero_temperature", true}, {"eta", 1.0}}}});
    CHECK(zero.bath.zero_temperature());
    const auto warm = parse_config({{"bath", {{"beta_T", 3.0}}}});
    CHECK(warm.bath.beta_T == doctest::Approx(3.0));
    CHECK_THROWS_AS(
        parse_config({{"bath", {{"beta_T", 3.0}, {"zero_temperature", true}}}}),
        ConfigError);
    CHECK_THROWS_AS(parse_config({{"bath", {{"zero_temperature", false}}}}),
                    ConfigError);
    CHECK_THROWS_AS(parse_config({{"bath", {{"eta", -0.5}}}}), ConfigError);
}

TEST_CASE("strict numeric and physical validation") {
    CHECK_THROWS_AS(parse_config({{"atom", {{"gamma", 2.0}, {"omega_r", 1.0}}}}),
                    ConfigError);
    CHECK_THROWS_AS(parse_config({{"solver", {{"rel_tol", -1.0}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"output", {{"format", "xml"}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"profile", {{"variant", "cubic"}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"profile", {{"variant", "sine_squared"},
                                               {"omega_i", "three"}}}}),
                    ConfigError);
}

TEST_CASE("custom profile table round trip") {
    const std::string path = "config_test_table.txt";
    {
        std::ofstream out(path);
        out << "# t omega_sq\n";
        for (int k = 0; k <= 16; ++k) {
            const double x = k / 16.0;
            out << 5.0 + x << ' ' << 9.0 + 55.0 * x << '\n';
        }
    }
    const auto cfg = parse_config(
        {{"profile", {{"variant", "custom"}, {"table_path", path}}}});
    CHECK(cfg.profile.variant == ProfileVariant::Custom);
    CHECK(cfg.profile.omega_i == doctest::Approx(3.0));
    CHECK(cfg.profile.omega_f == doctest::Approx(8.0));
    CHECK(eval_omega_sq(cfg.profile, 5.5) == doctest::Approx(36.5).epsilon(1e-12));
    std::remove(path.c_str());

    CHECK_THROWS_AS(
        parse_config({{"profile", {{"variant", "custom"}, {"table_path", "absent.txt"}}}}),
        ConfigError);
    CHECK_THROWS_AS(parse_config({{"profile", {{"variant", "custom"}}}}), ConfigError);
}

TEST_CASE("descending or non-positive tables rejected") {
    const std::string path = "config_test_bad_table.txt";
    {
        std::ofstream out(path);
        out << "1.0 4.0\n0.5 9.0\n";
    }
    CHECK_THROWS_AS(
        parse_config({{"profile", {{"variant", "custom"}, {"table_path", path}}}}),
        ConfigError);
    {
        std::ofstream out(path);
        out << "0.0 4.0\n1.0 -9.0\n";
    }
    CHECK_THROWS_AS(
        parse_config({{"profile", {{"variant", "custom"}, {"table_path", path}}}}),
        ConfigError);
    std::remove(path.c_str());
}

TEST_SUITE_END();
