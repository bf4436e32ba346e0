// Command-line front end: profile evaluation, squeeze extraction, parameter
// sweeps, Mathieu stability grids, stress-tensor observables, and the
// self-test suite. All quantities are in natural units (hbar = c = 1).

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqfield/acceptance.hpp"
#include "sqfield/config.hpp"
#include "sqfield/observables.hpp"
#include "sqfield/output.hpp"
#include "sqfield/squeeze.hpp"
#include "sqfield/stability.hpp"
#include "sqfield/sweeps.hpp"
#include "sqfield/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

using nlohmann::json;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    unsigned threads = 1;
};

sqfield::RunConfig load(const GlobalArgs& g) {
    sqfield::RunConfig cfg;
    if (!g.config_path.empty()) cfg = sqfield::load_config(g.config_path);
    if (!g.out_dir.empty()) cfg.output.directory = g.out_dir;
    std::filesystem::create_directories(cfg.output.directory);
    return cfg;
}

std::string out_path(const sqfield::RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output.directory) / name).string();
}

json profile_meta(const sqfield::ParametricProfile& p) {
    json j{{"variant", sqfield::to_string(p.variant)}, {"omega_i", p.omega_i},
           {"omega_f", p.omega_f},  {"t_a", p.t_a},
           {"t_b", p.t_b},          {"n", p.n},
           {"shift", p.shift}};
    return j;
}

json solver_meta(const sqfield::SolverConfig& s) {
    return json{{"rel_tol", s.rel_tol},
                {"abs_tol", s.abs_tol},
                {"max_step", s.max_step},
                {"wronskian_alarm", s.wronskian_alarm}};
}

json squeeze_to_json(const sqfield::SqueezeResult& r) {
    return json{{"eta", r.eta},
                {"theta", r.theta},
                {"cosh2eta", r.cosh2eta},
                {"sinh2eta", r.sinh2eta},
                {"residual_unitarity", r.residual_unitarity},
                {"residual_hyperbolic", r.residual_hyperbolic},
                {"phase_undefined", r.phase_undefined}};
}

int cmd_profile(const GlobalArgs& g, const std::vector<double>& at) {
    const auto cfg = load(g);
    for (double t : at)
        if (t < 0.0)
            throw sqfield::ConfigError("--at times must be >= 0 (motion starts at t=0)");
    std::cout << "t,omega_sq\n";
    for (double t : at)
        std::cout << sqfield::format_double(t) << ','
                  << sqfield::format_double(sqfield::eval_omega_sq(cfg.profile, t))
                  << '\n';
    return kExitOk;
}

int cmd_squeeze(const GlobalArgs& g, const std::string& trajectory_path) {
    const auto cfg = load(g);
    const double tb = cfg.profile.window_end();
    const double later = tb + 5.0 / cfg.profile.omega_f;
    const auto at_tb = sqfield::extract_squeeze(cfg.profile, tb, cfg.solver);
    const auto at_later = sqfield::extract_squeeze(cfg.profile, later, cfg.solver);
    json out = squeeze_to_json(at_tb);
    out["observation_time"] = tb;
    out["constancy_residual"] =
        std::abs(at_later.cosh2eta - at_tb.cosh2eta) / at_tb.cosh2eta;
    out["code_version"] = sqfield::kVersion;
    if (!trajectory_path.empty()) {
        sqfield::CsvWriter csv(trajectory_path,
                               {"t", "d1", "d1_dot", "d2", "d2_dot", "W"});
        for (const auto& s :
             sqfield::sample_trajectory(cfg.profile, 0.0, later, 400, cfg.solver))
            csv.write_row({s.t, s.d1, s.d1_dot, s.d2, s.d2_dot, s.wronskian()});
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_sweep(const GlobalArgs& g, const std::string& axis,
              const std::vector<double>& range, int samples, double observe) {
    const auto cfg = load(g);
    sqfield::SweepSpec spec;
    spec.profile_template = cfg.profile;
    spec.solver = cfg.solver;
    if (axis == "tb")
        spec.axis = sqfield::SweepAxis::EndTime_tb;
    else if (axis == "mode_frequency")
        spec.axis = sqfield::SweepAxis::ModeFrequency;
    else if (axis == "shift")
        spec.axis = sqfield::SweepAxis::Shift;
    else
        throw sqfield::ConfigError("--axis must be tb, mode_frequency, or shift");
    spec.lo = range.at(0);
    spec.hi = range.at(1);
    spec.samples = samples;
    spec.observation_time = observe;
    const auto rows = sqfield::run_sweep(spec, g.threads);

    const std::string csv_path = out_path(cfg, "sweep.csv");
    sqfield::CsvWriter csv(csv_path, {"axis_value", "eta", "cosh2eta", "theta",
                                      "residual_hyperbolic", "a", "q", "trace",
                                      "error"});
    for (const auto& row : rows)
        csv.write_row({row.axis_value, row.eta, row.cosh2eta, row.theta,
                       row.residual_hyperbolic, row.a, row.q, row.trace},
                      row.error.empty() ? "ok" : row.error);
    json meta{{"command", "sweep"},
              {"axis", axis},
              {"range", range},
              {"samples", samples},
              {"observation_time", observe},
              {"profile", profile_meta(cfg.profile)},
              {"solver", solver_meta(cfg.solver)}};
    if (axis == "mode_frequency")
        meta["spectral_normalization"] =
            "both process endpoints scale with the swept mode; window fixed";
    sqfield::write_metadata(out_path(cfg, "sweep.meta.json"), meta);
    std::cout << "wrote " << csv_path << " (" << rows.size() << " rows)\n";
    return kExitOk;
}

int cmd_stability(const GlobalArgs& g, const std::vector<double>& a_range,
                  const std::vector<double>& q_range, int res, bool full_plane,
                  const std::vector<double>& curve_tb, int curve_samples) {
    const auto cfg = load(g);
    const auto cells = sqfield::stability_scan(a_range.at(0), a_range.at(1), res,
                                               q_range.at(0), q_range.at(1), res,
                                               !full_plane, g.threads);
    const std::string grid_path = out_path(cfg, "stability_grid.csv");
    sqfield::CsvWriter grid(grid_path, {"a", "q", "trace", "stable"});
    for (const auto& c : cells)
        grid.write_row({c.a, c.q, c.trace, c.stable ? 1.0 : 0.0});

    json meta{{"command", "stability"},
              {"a_range", a_range},
              {"q_range", q_range},
              {"res", res},
              {"wedge_only", !full_plane},
              {"stable_convention", "|trace| <= 2 marked stable=1"}};
    if (cfg.profile.variant == sqfield::ProfileVariant::SineSquared) {
        const auto curve = sqfield::profile_family_curve(cfg.profile, curve_tb.at(0),
                                                         curve_tb.at(1), curve_samples);
        const std::string curve_path = out_path(cfg, "stability_curve.csv");
        sqfield::CsvWriter cc(curve_path, {"t_b", "a", "q", "trace"});
        for (const auto& p : curve) cc.write_row({p.t_b, p.a, p.q, p.trace});
        meta["curve"] = json{{"tb_range", curve_tb},
                             {"samples", curve_samples},
                             {"profile", profile_meta(cfg.profile)}};
        std::cout << "wrote " << curve_path << '\n';
    }
    sqfield::write_metadata(out_path(cfg, "stability.meta.json"), meta);
    std::cout << "wrote " << grid_path << " (" << cells.size() << " cells)\n";
    return kExitOk;
}

int cmd_observables(const GlobalArgs& g, double r, const std::vector<double>& t_range,
                    int samples) {
    const auto cfg = load(g);
    const std::string csv_path = out_path(cfg, "observables.csv");
    sqfield::CsvWriter csv(csv_path,
                           {"r", "t", "tr_st_rr", "tr_st_hr", "tr_ns_rr", "tr_ns_hr",
                            "tt_st", "tt_ns", "err"});
    for (int i = 0; i < samples; ++i) {
        const double t =
            t_range.at(0) + (t_range.at(1) - t_range.at(0)) * i / (samples - 1);
        const auto c = sqfield::evaluate_stress_tensor(cfg.atom, cfg.bath, {r, t});
        csv.write_row({r, t, c.tr_st_rr, c.tr_st_hr, c.tr_ns_rr, c.tr_ns_hr,
                       c.tt_st_total, c.tt_ns_total, c.quadrature_error});
    }
    sqfield::write_metadata(
        out_path(cfg, "observables.meta.json"),
        json{{"command", "observables"},
             {"r", r},
             {"t_range", t_range},
             {"samples", samples},
             {"atom", json{{"m", cfg.atom.m},
                           {"gamma", cfg.atom.gamma},
                           {"omega_r", cfg.atom.omega_r}}},
             {"bath", json{{"beta_T", cfg.bath.zero_temperature()
                                          ? json("zero_temperature")
                                          : json(cfg.bath.beta_T)},
                           {"eta", cfg.bath.eta},
                           {"theta", cfg.bath.theta}}},
             {"flux_sign", "outward-positive"}});
    std::cout << "wrote " << csv_path << " (" << samples << " rows)\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    // --seedless is reserved and must stay a bare flag
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]).rfind("--seedless=", 0) == 0) {
            std::cerr << "config error: --seedless takes no value\n";
            return kExitConfig;
        }
    }

    CLI::App app{
        "squeezed-field parametric process toolkit\n"
        "All quantities are in natural units (hbar = c = 1): frequencies and\n"
        "rates in inverse time, distances in time units."};
    app.set_version_flag("--version", sqfield::kVersion);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "JSON run configuration");
    app.add_option("--out", g.out_dir, "output directory (overrides config)");
    app.add_option("--threads", g.threads, "worker threads for sweeps/scans")
        ->check(CLI::Range(1u, 256u));
    app.add_flag("--seedless", "reserved: no RNG is used anywhere")
        ->disable_flag_override();
    app.require_subcommand(1);

    auto* p_profile = app.add_subcommand("profile", "evaluate omega^2(t)");
    std::vector<double> at_times;
    p_profile->add_option("--at", at_times, "evaluation times (repeatable)")
        ->required();

    auto* p_squeeze =
        app.add_subcommand("squeeze", "evolve the process and report (eta, theta)");
    std::string trajectory_path;
    p_squeeze->add_option("--dump-trajectory", trajectory_path,
                          "write the fundamental-solution trajectory CSV");

    auto* p_sweep = app.add_subcommand("sweep", "sweep eta along an axis");
    std::string axis = "tb";
    std::vector<double> range;
    int samples = 0;
    double observe = 20.0;
    p_sweep->add_option("--axis", axis, "tb | mode_frequency | shift");
    p_sweep->add_option("--range", range, "lo hi")->expected(2)->required();
    p_sweep->add_option("--samples", samples, "number of sweep points")
        ->required()
        ->check(CLI::Range(2, 1000000));
    p_sweep->add_option("--observe", observe, "out-region observation time");

    auto* p_stab = app.add_subcommand("stability", "Mathieu stability grid");
    std::vector<double> a_range{0.0, 10.0}, q_range{0.0, 5.0}, curve_tb{10.5, 15.0};
    int res = 400, curve_samples = 200;
    bool full_plane = false;
    p_stab->add_option("--a-range", a_range, "a lo hi")->expected(2);
    p_stab->add_option("--q-range", q_range, "q lo hi")->expected(2);
    p_stab->add_option("--res", res, "grid resolution per axis")
        ->check(CLI::Range(2, 10000));
    p_stab->add_flag("--full-plane", full_plane,
                     "keep cells outside the physical wedge q <= a/2");
    p_stab->add_option("--curve-tb", curve_tb, "t_b range for the family curve")
        ->expected(2);
    p_stab->add_option("--curve-samples", curve_samples, "family curve samples")
        ->check(CLI::Range(2, 1000000));

    auto* p_obs = app.add_subcommand("observables", "stress-tensor components");
    double obs_r = 10.0;
    std::vector<double> t_range;
    int obs_samples = 0;
    p_obs->add_option("--r", obs_r, "observation radius")->required();
    p_obs->add_option("--t-range", t_range, "t lo hi")->expected(2)->required();
    p_obs->add_option("--samples", obs_samples, "number of time samples")
        ->required()
        ->check(CLI::Range(2, 1000000));

    auto* p_self = app.add_subcommand("selftest", "run the acceptance suite");
    int criterion = 0;
    p_self->add_option("--criterion", criterion, "run a single criterion (1-11)")
        ->check(CLI::Range(1, 11));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (p_profile->parsed()) return cmd_profile(g, at_times);
        if (p_squeeze->parsed()) return cmd_squeeze(g, trajectory_path);
        if (p_sweep->parsed()) return cmd_sweep(g, axis, range, samples, observe);
        if (p_stab->parsed())
            return cmd_stability(g, a_range, q_range, res, full_plane, curve_tb,
                                 curve_samples);
        if (p_obs->parsed()) return cmd_observables(g, obs_r, t_range, obs_samples);
        if (p_self->parsed())
            return sqfield::acceptance::run(std::cout, criterion) == 0 ? kExitOk
                                                                       : kExitNumerical;
    } catch (const sqfield::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitConfig;
}
