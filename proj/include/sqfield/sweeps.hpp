#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "profiles.hpp"
#include "squeeze.hpp"
#include "stability.hpp"

namespace sqfield {

enum class SweepAxis { EndTime_tb, ModeFrequency, Shift };

inline const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::EndTime_tb: return "tb";
        case SweepAxis::ModeFrequency: return "mode_frequency";
        case SweepAxis::Shift: return "shift";
    }
    return "?";
}

struct SweepSpec {
    ParametricProfile profile_template;
    SweepAxis axis = SweepAxis::EndTime_tb;
    double lo = 0.0;
    double hi = 1.0;
    int samples = 2;
    double observation_time = 0.0;
    SolverConfig solver;
};

inline void validate(const SweepSpec& s) {
    validate(s.profile_template);
    if (s.samples < 2) throw ConfigError("sweep requires samples >= 2");
    if (!(s.hi > s.lo)) throw ConfigError("sweep requires hi > lo");
    if (s.axis == SweepAxis::EndTime_tb && !(s.hi < s.observation_time))
        throw ConfigError("end-time sweep must observe in the out-region (hi < observation_time)");
}

struct SweepRow {
    double axis_value = 0.0;
    double eta = 0.0;
    double cosh2eta = 1.0;
    double theta = 0.0;
    double residual_hyperbolic = 0.0;
    // Mathieu attachments, SineSquared only
    bool has_mathieu = false;
    double a = 0.0;
    double q = 0.0;
    double trace = 0.0;
    std::string error;  // per-point failure, sweep continues
};

namespace detail_sweep {

inline ParametricProfile at_axis_value(const SweepSpec& s, double x) {
    ParametricProfile p = s.profile_template;
    switch (s.axis) {
        case SweepAxis::EndTime_tb:
            p.t_b = x;
            break;
        case SweepAxis::ModeFrequency: {
            // both process endpoints scale with the mode frequency
            const double scale = x / s.profile_template.omega_i;
            p.omega_i *= scale;
            p.omega_f *= scale;
            break;
        }
        case SweepAxis::Shift:
            p.shift = x;
            break;
    }
    return p;
}

inline SweepRow run_point(const SweepSpec& s, double x) {
    SweepRow row;
    row.axis_value = x;
    try {
        const ParametricProfile p = at_axis_value(s, x);
        validate(p);
        const double t_obs = std::max(s.observation_time, p.window_end());
        const SqueezeResult sq = extract_squeeze(p, t_obs, s.solver);
        row.eta = sq.eta;
        row.cosh2eta = sq.cosh2eta;
        row.theta = sq.theta;
        row.residual_hyperbolic = sq.residual_hyperbolic;
        if (p.variant == ProfileVariant::SineSquared) {
            const MathieuParams m = to_mathieu(p);
            row.a = m.a;
            row.q = m.q;
            row.trace = monodromy_trace(m.a, m.q);
            row.has_mathieu = true;
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

} // namespace detail_sweep

// Sweeps the squeeze extraction along one axis; rows come back in axis
// order regardless of execution order, and per-point failures are recorded
// in-row.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 1) {
    validate(spec);
    std::vector<SweepRow> rows(spec.samples);
    auto work = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const double x = spec.lo + (spec.hi - spec.lo) * i / (spec.samples - 1);
            rows[i] = detail_sweep::run_point(spec, x);
        }
    };
    if (threads <= 1 || spec.samples < 8) {
        work(0, spec.samples);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (spec.samples + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const int b = std::min<int>(spec.samples, w * chunk);
            const int e = std::min<int>(spec.samples, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return rows;
}

struct SpectralRow {
    double omega_mode = 0.0;
    double eta = 0.0;
    double theta = 0.0;
    std::string error;
};

// eta(omega) across the mode spectrum: the process template is rescaled so
// both endpoint frequencies track the swept mode, durations fixed.
inline std::vector<SpectralRow> spectral_sweep(const ParametricProfile& tmpl,
                                               double omega_lo, double omega_hi,
                                               int samples,
                                               const SolverConfig& solver = {}) {
    validate(tmpl);
    if (samples < 2) throw ConfigError("spectral_sweep requires samples >= 2");
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo))
        throw ConfigError("spectral_sweep requires 0 < omega_lo < omega_hi");
    SweepSpec s;
    s.profile_template = tmpl;
    s.axis = SweepAxis::ModeFrequency;
    s.solver = solver;
    std::vector<SpectralRow> rows;
    rows.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double w = omega_lo + (omega_hi - omega_lo) * i / (samples - 1);
        SpectralRow r;
        r.omega_mode = w;
        try {
            const ParametricProfile p = detail_sweep::at_axis_value(s, w);
            validate(p);
            const SqueezeResult sq = extract_squeeze(p, p.window_end(), solver);
            r.eta = sq.eta;
            r.theta = sq.theta;
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        rows.push_back(r);
    }
    return rows;
}

} // namespace sqfield
