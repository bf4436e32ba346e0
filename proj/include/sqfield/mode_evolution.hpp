#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "ode.hpp"
#include "profiles.hpp"

namespace sqfield {

// The two fundamental solutions of d'' + omega^2(t) d = 0 with canonical
// initial data d1(0)=1, d1'(0)=0, d2(0)=0, d2'(0)=1, sampled at time t.
// Their Wronskian d1*d2' - d1'*d2 equals 1 for all t.
struct FundamentalSolution {
    double t = 0.0;
    double d1 = 1.0;
    double d1_dot = 0.0;
    double d2 = 0.0;
    double d2_dot = 1.0;

    double wronskian() const { return d1 * d2_dot - d1_dot * d2; }
};

struct SolverConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;
    double wronskian_alarm = 1e-8;

    // The stepper runs below the configured tolerance so the accumulated
    // Wronskian drift stays inside the 1e-9 conservation contract.
    ode::StepControl step_control() const {
        ode::StepControl c;
        c.rel_tol = 0.02 * rel_tol;
        c.abs_tol = 0.02 * abs_tol;
        c.max_step = max_step;
        return c;
    }
};

// Closed form while omega(t) = omega_i (valid from t=0 up to the window).
inline FundamentalSolution in_region_solution(double omega_i, double t) {
    FundamentalSolution s;
    s.t = t;
    s.d1 = std::cos(omega_i * t);
    s.d1_dot = -omega_i * std::sin(omega_i * t);
    s.d2 = std::sin(omega_i * t) / omega_i;
    s.d2_dot = std::cos(omega_i * t);
    return s;
}

// Analytic continuation in the constant-frequency out-region: a rotation
// that preserves the Wronskian exactly.
inline FundamentalSolution continue_out_region(const FundamentalSolution& s,
                                               double omega_f, double t) {
    if (t < s.t) throw StepLimit("continue_out_region requires t >= solution time");
    const double ph = omega_f * (t - s.t);
    const double c = std::cos(ph), sn = std::sin(ph);
    FundamentalSolution out;
    out.t = t;
    out.d1 = s.d1 * c + s.d1_dot * sn / omega_f;
    out.d1_dot = -omega_f * s.d1 * sn + s.d1_dot * c;
    out.d2 = s.d2 * c + s.d2_dot * sn / omega_f;
    out.d2_dot = -omega_f * s.d2 * sn + s.d2_dot * c;
    return out;
}

namespace detail {

inline FundamentalSolution integrate_window(const ParametricProfile& p, double t_from,
                                            FundamentalSolution s, double t_to,
                                            const SolverConfig& cfg) {
    auto rhs = [&p](double t, const std::array<double, 4>& y) {
        const double w2 = eval_omega_sq(p, t);
        return std::array<double, 4>{y[1], -w2 * y[0], y[3], -w2 * y[2]};
    };
    std::array<double, 4> y{s.d1, s.d1_dot, s.d2, s.d2_dot};
    y = ode::integrate<4>(rhs, t_from, t_to, y, cfg.step_control());
    FundamentalSolution out;
    out.t = t_to;
    out.d1 = y[0];
    out.d1_dot = y[1];
    out.d2 = y[2];
    out.d2_dot = y[3];
    return out;
}

} // namespace detail

// Evolves the fundamental solutions to t_target: closed form in the
// in-region, adaptive ODE stepping across the transition window, analytic
// rotation beyond it. Raises WronskianDrift if conservation fails.
inline FundamentalSolution evolve(const ParametricProfile& p, double t_target,
                                  const SolverConfig& cfg = {}) {
    validate(p);
    if (t_target < 0.0) throw ConfigError("evolve requires t_target >= 0");

    FundamentalSolution s;
    if (p.variant == ProfileVariant::Constant) {
        s = in_region_solution(p.omega_i, t_target);
    } else {
        const double wa = p.window_start();
        const double wb = p.window_end();
        if (t_target <= wa) {
            s = in_region_solution(p.omega_i, t_target);
        } else {
            FundamentalSolution at_wa = in_region_solution(p.omega_i, wa);
            if (t_target <= wb) {
                s = detail::integrate_window(p, wa, at_wa, t_target, cfg);
            } else {
                FundamentalSolution at_wb =
                    detail::integrate_window(p, wa, at_wa, wb, cfg);
                s = continue_out_region(at_wb, p.omega_f, t_target);
            }
        }
    }
    const double drift = std::abs(s.wronskian() - 1.0);
    if (drift > cfg.wronskian_alarm) throw WronskianDrift(t_target, s.wronskian());
    return s;
}

// Uniform samples of the trajectory, for CSV dumps.
inline std::vector<FundamentalSolution> sample_trajectory(const ParametricProfile& p,
                                                          double t0, double t1,
                                                          int samples,
                                                          const SolverConfig& cfg = {}) {
    if (samples < 2) throw ConfigError("sample_trajectory requires samples >= 2");
    std::vector<FundamentalSolution> out;
    out.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = t0 + (t1 - t0) * i / (samples - 1);
        out.push_back(evolve(p, t, cfg));
    }
    return out;
}

} // namespace sqfield
