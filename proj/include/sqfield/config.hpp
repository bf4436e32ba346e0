#pragma once

#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "atomfield.hpp"
#include "errors.hpp"
#include "mode_evolution.hpp"
#include "profiles.hpp"

namespace sqfield {

struct OutputConfig {
    std::string directory = ".";
    std::string format = "csv";  // csv | json
};

struct RunConfig {
    ParametricProfile profile;
    AtomParams atom;
    BathSpec bath;
    SolverConfig solver;
    OutputConfig output;
};

namespace detail_cfg {

using json = nlohmann::json;

inline void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                                const std::string& section) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in section '" + section +
                              "'");
    }
}

inline double require_number(const json& j, const std::string& key,
                             const std::string& section) {
    if (!j.at(key).is_number())
        throw ConfigError("key '" + key + "' in section '" + section +
                          "' must be a number");
    return j.at(key).get<double>();
}

inline double number_or(const json& j, const std::string& key, double fallback,
                        const std::string& section) {
    if (!j.contains(key)) return fallback;
    return require_number(j, key, section);
}

inline TabulatedOmegaSq load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open profile table '" + path + "'");
    TabulatedOmegaSq tab;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double t, v;
        if (ls >> t >> v) {
            if (!(v > 0.0))
                throw ConfigError("profile table '" + path + "' has non-positive omega_sq");
            tab.t.push_back(t);
            tab.v.push_back(v);
        }
    }
    if (tab.t.size() < 2)
        throw ConfigError("profile table '" + path + "' needs >= 2 numeric rows");
    return tab;
}

inline ParametricProfile parse_profile(const json& j) {
    reject_unknown_keys(j, {"variant", "omega_i", "omega_f", "t_a", "t_b", "n",
                            "shift", "table_path"},
                        "profile");
    const std::string variant = j.value("variant", std::string("constant"));
    const double shift = number_or(j, "shift", 0.0, "profile");
    try {
        if (variant == "constant") {
            auto p = constant_profile(number_or(j, "omega_i", 1.0, "profile"));
            p.shift = shift;
            return p;
        }
        if (variant == "custom") {
            if (!j.contains("table_path"))
                throw ConfigError("custom profile requires table_path");
            return custom_profile(load_table(j.at("table_path").get<std::string>()),
                                  shift);
        }
        const double wi = require_number(j, "omega_i", "profile");
        const double wf = require_number(j, "omega_f", "profile");
        const double ta = require_number(j, "t_a", "profile");
        const double tb = require_number(j, "t_b", "profile");
        if (variant == "piecewise_linear")
            return piecewise_linear(wi, wf, ta, tb, shift);
        if (variant == "sine_squared")
            return sine_squared(wi, wf, ta, tb, j.value("n", 1), shift);
        if (variant == "smooth_septic") return smooth_septic(wi, wf, ta, tb, shift);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("profile section: ") + e.what());
    }
    throw ConfigError("unknown profile variant '" + variant + "'");
}

inline AtomParams parse_atom(const json& j) {
    reject_unknown_keys(j, {"m", "gamma", "omega_r"}, "atom");
    AtomParams a;
    a.m = number_or(j, "m", 1.0, "atom");
    a.gamma = number_or(j, "gamma", 0.1, "atom");
    a.omega_r = number_or(j, "omega_r", 1.0, "atom");
    validate(a);
    return a;
}

inline BathSpec parse_bath(const json& j) {
    reject_unknown_keys(j, {"beta_T", "zero_temperature", "eta", "theta"}, "bath");
    BathSpec b;
    const bool has_beta = j.contains("beta_T");
    const bool has_zero = j.contains("zero_temperature");
    if (has_beta && has_zero)
        throw ConfigError("bath: give either beta_T or zero_temperature, not both");
    if (has_beta) {
        b.beta_T = require_number(j, "beta_T", "bath");
    } else if (has_zero) {
        if (!j.at("zero_temperature").is_boolean() || !j.at("zero_temperature").get<bool>())
            throw ConfigError("bath: zero_temperature must be true when present");
        b.beta_T = std::numeric_limits<double>::infinity();
    }
    b.eta = number_or(j, "eta", 0.0, "bath");
    b.theta = number_or(j, "theta", 0.0, "bath");
    validate(b);
    return b;
}

inline SolverConfig parse_solver(const json& j) {
    reject_unknown_keys(j, {"rel_tol", "abs_tol", "max_step", "wronskian_alarm"},
                        "solver");
    SolverConfig s;
    s.rel_tol = number_or(j, "rel_tol", s.rel_tol, "solver");
    s.abs_tol = number_or(j, "abs_tol", s.abs_tol, "solver");
    s.max_step = number_or(j, "max_step", s.max_step, "solver");
    s.wronskian_alarm = number_or(j, "wronskian_alarm", s.wronskian_alarm, "solver");
    if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0))
        throw ConfigError("solver tolerances must be positive");
    return s;
}

inline OutputConfig parse_output(const json& j) {
    reject_unknown_keys(j, {"directory", "format"}, "output");
    OutputConfig o;
    o.directory = j.value("directory", o.directory);
    o.format = j.value("format", o.format);
    if (o.format != "csv" && o.format != "json")
        throw ConfigError("output.format must be 'csv' or 'json'");
    return o;
}

} // namespace detail_cfg

inline RunConfig parse_config(const nlohmann::json& j) {
    detail_cfg::reject_unknown_keys(j, {"profile", "atom", "bath", "solver", "output"},
                                    "(top level)");
    RunConfig cfg;
    if (j.contains("profile")) cfg.profile = detail_cfg::parse_profile(j.at("profile"));
    if (j.contains("atom")) cfg.atom = detail_cfg::parse_atom(j.at("atom"));
    if (j.contains("bath")) cfg.bath = detail_cfg::parse_bath(j.at("bath"));
    if (j.contains("solver")) cfg.solver = detail_cfg::parse_solver(j.at("solver"));
    if (j.contains("output")) cfg.output = detail_cfg::parse_output(j.at("output"));
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    return parse_config(j);
}

} // namespace sqfield
