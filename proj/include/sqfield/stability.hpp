#pragma once

#include <array>
#include <cmath>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "ode.hpp"
#include "profiles.hpp"

namespace sqfield {

// Canonical Mathieu parameters of a SineSquared process,
// x''(tau) + [a - 2q cos(2 tau)] x(tau) = 0 with Omega*t = 2*tau.
struct MathieuParams {
    double a = 0.0;
    double q = 0.0;
    double Omega = 0.0;
    double A_sq = 0.0;  // (omega_f^2 + omega_i^2)/2
    double B_sq = 0.0;  // (omega_f^2 - omega_i^2)/2
};

inline MathieuParams to_mathieu(const ParametricProfile& p) {
    if (p.variant != ProfileVariant::SineSquared)
        throw WrongVariant("to_mathieu requires a sine_squared profile");
    validate(p);
    MathieuParams m;
    m.Omega = p.n * M_PI / (p.t_b - p.t_a);
    m.A_sq = 0.5 * (p.omega_f * p.omega_f + p.omega_i * p.omega_i);
    m.B_sq = 0.5 * (p.omega_f * p.omega_f - p.omega_i * p.omega_i);
    m.a = 4.0 * m.A_sq / (m.Omega * m.Omega);
    m.q = 2.0 * m.B_sq / (m.Omega * m.Omega);
    return m;
}

// Monodromy matrix of the Mathieu equation over one period tau in [0, pi],
// columns = solutions with initial data (1,0) and (0,1).
struct Monodromy {
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
    double trace() const { return m11 + m22; }
    double det() const { return m11 * m22 - m12 * m21; }
};

inline Monodromy monodromy(double a, double q, double periods = 1.0,
                           const ode::StepControl& ctl = {1e-12, 1e-14, 0.0, 2'000'000}) {
    auto rhs = [a, q](double tau, const std::array<double, 4>& y) {
        const double k = a - 2.0 * q * std::cos(2.0 * tau);
        return std::array<double, 4>{y[1], -k * y[0], y[3], -k * y[2]};
    };
    std::array<double, 4> y{1.0, 0.0, 0.0, 1.0};
    y = ode::integrate<4>(rhs, 0.0, periods * M_PI, y, ctl);
    Monodromy m;
    m.m11 = y[0];
    m.m21 = y[1];
    m.m12 = y[2];
    m.m22 = y[3];
    return m;
}

inline double monodromy_trace(double a, double q) { return monodromy(a, q).trace(); }

// Bounded Floquet solutions iff |trace| <= 2.
inline bool mathieu_stable(double a, double q) {
    return std::abs(monodromy_trace(a, q)) <= 2.0;
}

struct StabilityCell {
    double a = 0.0;
    double q = 0.0;
    double trace = 0.0;
    bool stable = true;
};

// Grid of monodromy traces, row-major over (a, q), deterministic order.
// Cells outside the physical wedge q <= a/2 can be skipped.
inline std::vector<StabilityCell> stability_scan(double a_lo, double a_hi, int na,
                                                 double q_lo, double q_hi, int nq,
                                                 bool wedge_only = false,
                                                 unsigned threads = 1) {
    if (na < 2 || nq < 2) throw ConfigError("stability_scan requires resolution >= 2 per axis");
    std::vector<StabilityCell> cells;
    cells.reserve(static_cast<std::size_t>(na) * nq);
    for (int i = 0; i < na; ++i) {
        const double a = a_lo + (a_hi - a_lo) * i / (na - 1);
        for (int j = 0; j < nq; ++j) {
            const double q = q_lo + (q_hi - q_lo) * j / (nq - 1);
            if (wedge_only && q > a / 2.0) continue;
            cells.push_back({a, q, 0.0, true});
        }
    }
    auto work = [&cells](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            cells[k].trace = monodromy_trace(cells[k].a, cells[k].q);
            cells[k].stable = std::abs(cells[k].trace) <= 2.0;
        }
    };
    if (threads <= 1 || cells.size() < 64) {
        work(0, cells.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cells.size() + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t b = std::min(cells.size(), w * chunk);
            const std::size_t e = std::min(cells.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return cells;
}

struct FamilyPoint {
    double t_b = 0.0;
    double a = 0.0;
    double q = 0.0;
    double trace = 0.0;
};

// The (a(t_b), q(t_b)) curve traced by a SineSquared family as the end time
// varies, for overlay on the stability grid.
inline std::vector<FamilyPoint> profile_family_curve(const ParametricProfile& tmpl,
                                                     double tb_lo, double tb_hi,
                                                     int samples) {
    if (samples < 2) throw ConfigError("profile_family_curve requires samples >= 2");
    if (tmpl.variant != ProfileVariant::SineSquared)
        throw WrongVariant("profile_family_curve requires a sine_squared profile");
    std::vector<FamilyPoint> pts;
    pts.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        ParametricProfile p = tmpl;
        p.t_b = tb_lo + (tb_hi - tb_lo) * i / (samples - 1);
        const MathieuParams m = to_mathieu(p);
        pts.push_back({p.t_b, m.a, m.q, monodromy_trace(m.a, m.q)});
    }
    return pts;
}

} // namespace sqfield
