#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace sqfield {

enum class ProfileVariant { Constant, PiecewiseLinear, SineSquared, SmoothSeptic, Custom };

inline const char* to_string(ProfileVariant v) {
    switch (v) {
        case ProfileVariant::Constant: return "constant";
        case ProfileVariant::PiecewiseLinear: return "piecewise_linear";
        case ProfileVariant::SineSquared: return "sine_squared";
        case ProfileVariant::SmoothSeptic: return "smooth_septic";
        case ProfileVariant::Custom: return "custom";
    }
    return "?";
}

// Tabulated omega^2(t) on a strictly ascending grid, interpolated with a
// monotone cubic (Fritsch-Carlson). Clamped to the endpoint values outside
// the table.
struct TabulatedOmegaSq {
    std::vector<double> t;
    std::vector<double> v;      // omega^2 samples
    std::vector<double> slope;  // Fritsch-Carlson limited slopes

    void build_slopes() {
        const std::size_t n = t.size();
        if (n < 2) throw ConfigError("custom profile table needs >= 2 rows");
        for (std::size_t i = 1; i < n; ++i)
            if (!(t[i] > t[i - 1]))
                throw ConfigError("custom profile table must have strictly ascending t");
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            d[i] = (v[i + 1] - v[i]) / (t[i + 1] - t[i]);
        slope.assign(n, 0.0);
        slope[0] = d[0];
        slope[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                slope[i] = 0.0;
            } else {
                // harmonic-mean limiter keeps the interpolant monotone
                const double w1 = 2.0 * (t[i + 1] - t[i]) + (t[i] - t[i - 1]);
                const double w2 = (t[i + 1] - t[i]) + 2.0 * (t[i] - t[i - 1]);
                slope[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    double eval(double x) const {
        if (x <= t.front()) return v.front();
        if (x >= t.back()) return v.back();
        const auto it = std::upper_bound(t.begin(), t.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
        const double h = t[i + 1] - t[i];
        const double s = (x - t[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        return h00 * v[i] + h * h10 * slope[i] + h01 * v[i + 1] + h * h11 * slope[i + 1];
    }
};

// A finite-duration parametric frequency process: omega^2(t) equals
// omega_i^2 for t <= t_a + shift, omega_f^2 for t >= t_b + shift, and
// follows the selected transition shape in between. Immutable value type;
// evaluation is a pure function.
struct ParametricProfile {
    ProfileVariant variant = ProfileVariant::Constant;
    double omega_i = 1.0;
    double omega_f = 1.0;
    double t_a = 0.0;
    double t_b = 1.0;
    int n = 1;           // SineSquared oscillation count, odd
    double shift = 0.0;  // rigid time translation of the process
    TabulatedOmegaSq table;  // Custom only

    double window_start() const { return t_a + shift; }
    double window_end() const { return t_b + shift; }
};

inline void validate(const ParametricProfile& p) {
    if (!(p.omega_i > 0.0) || !(p.omega_f > 0.0))
        throw ConfigError("profile frequencies must be positive");
    if (p.variant != ProfileVariant::Constant && !(p.t_b > p.t_a))
        throw ConfigError("profile requires t_b > t_a");
    if (!(p.shift >= 0.0))
        throw ConfigError("profile shift must be >= 0");
    if (p.variant == ProfileVariant::SineSquared) {
        if (p.n < 1 || p.n % 2 == 0)
            throw ConfigError("sine_squared requires odd n >= 1 for endpoint continuity");
    }
    if (p.variant == ProfileVariant::Custom && p.table.t.size() < 2)
        throw ConfigError("custom profile requires a table");
}

inline ParametricProfile constant_profile(double omega) {
    ParametricProfile p;
    p.variant = ProfileVariant::Constant;
    p.omega_i = p.omega_f = omega;
    validate(p);
    return p;
}

inline ParametricProfile piecewise_linear(double omega_i, double omega_f, double t_a,
                                          double t_b, double shift = 0.0) {
    ParametricProfile p;
    p.variant = ProfileVariant::PiecewiseLinear;
    p.omega_i = omega_i;
    p.omega_f = omega_f;
    p.t_a = t_a;
    p.t_b = t_b;
    p.shift = shift;
    validate(p);
    return p;
}

inline ParametricProfile sine_squared(double omega_i, double omega_f, double t_a,
                                      double t_b, int n, double shift = 0.0) {
    ParametricProfile p;
    p.variant = ProfileVariant::SineSquared;
    p.omega_i = omega_i;
    p.omega_f = omega_f;
    p.t_a = t_a;
    p.t_b = t_b;
    p.n = n;
    p.shift = shift;
    validate(p);
    return p;
}

inline ParametricProfile smooth_septic(double omega_i, double omega_f, double t_a,
                                       double t_b, double shift = 0.0) {
    ParametricProfile p;
    p.variant = ProfileVariant::SmoothSeptic;
    p.omega_i = omega_i;
    p.omega_f = omega_f;
    p.t_a = t_a;
    p.t_b = t_b;
    p.shift = shift;
    validate(p);
    return p;
}

inline ParametricProfile custom_profile(TabulatedOmegaSq table, double shift = 0.0) {
    ParametricProfile p;
    p.variant = ProfileVariant::Custom;
    table.build_slopes();
    p.table = std::move(table);
    p.t_a = p.table.t.front();
    p.t_b = p.table.t.back();
    p.omega_i = std::sqrt(p.table.v.front());
    p.omega_f = std::sqrt(p.table.v.back());
    p.shift = shift;
    validate(p);
    return p;
}

// Normalized septic transition shape: S(0)=0, S(1)=1, with three vanishing
// derivatives at each end.
inline double septic_smoothstep(double x) {
    const double x2 = x * x;
    return x2 * x2 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
}

inline double eval_omega_sq(const ParametricProfile& p, double t) {
    const double wi2 = p.omega_i * p.omega_i;
    const double wf2 = p.omega_f * p.omega_f;
    if (p.variant == ProfileVariant::Constant) return wi2;
    const double u = t - p.shift;
    if (u <= p.t_a) return wi2;
    if (u >= p.t_b) return wf2;
    const double x = (u - p.t_a) / (p.t_b - p.t_a);
    switch (p.variant) {
        case ProfileVariant::PiecewiseLinear:
            return wi2 + (wf2 - wi2) * x;
        case ProfileVariant::SineSquared: {
            const double s = std::sin(x * p.n * M_PI / 2.0);
            return wi2 + (wf2 - wi2) * s * s;
        }
        case ProfileVariant::SmoothSeptic:
            return wi2 + (wf2 - wi2) * septic_smoothstep(x);
        case ProfileVariant::Custom:
            return p.table.eval(u);
        default:
            return wi2;
    }
}

struct SmoothnessReport {
    int order_at_ta = 0;  // highest matching one-sided derivative order
    int order_at_tb = 0;
    bool smooth = false;  // no mismatch detectable up to the probed order
};

namespace detail {

// k-th one-sided derivative at x0 from the 6-point stencil x0 + sgn*j*h,
// j = 0..5 (standard one-sided finite-difference weights).
inline double one_sided_derivative(const ParametricProfile& p, double x0, double h,
                                   int k, int sgn) {
    static const double c1[6] = {-137.0 / 60, 5.0, -5.0, 10.0 / 3, -5.0 / 4, 1.0 / 5};
    static const double c2[6] = {15.0 / 4, -77.0 / 6, 107.0 / 6, -13.0, 61.0 / 12, -5.0 / 6};
    static const double c3[6] = {-17.0 / 4, 71.0 / 4, -59.0 / 2, 49.0 / 2, -41.0 / 4, 7.0 / 4};
    static const double c4[6] = {3.0, -14.0, 26.0, -24.0, 11.0, -2.0};
    const double* c = k == 1 ? c1 : k == 2 ? c2 : k == 3 ? c3 : c4;
    double acc = 0.0;
    for (int j = 0; j < 6; ++j)
        acc += c[j] * eval_omega_sq(p, x0 + sgn * j * h);
    return acc / std::pow(sgn * h, k);
}

} // namespace detail

// Estimates how many one-sided derivatives of omega^2 agree at each
// junction: 0 for a slope kink, >= 3 for the septic shape.
inline SmoothnessReport smoothness_report(const ParametricProfile& p) {
    validate(p);
    SmoothnessReport rep;
    if (p.variant == ProfileVariant::Constant) {
        rep.order_at_ta = rep.order_at_tb = 4;
        rep.smooth = true;
        return rep;
    }
    const double span = p.t_b - p.t_a;
    // probe inside the fastest internal oscillation for SineSquared
    const double h = span / 128.0 / (p.variant == ProfileVariant::SineSquared ? p.n : 1);
    const double scale0 = std::abs(p.omega_f * p.omega_f - p.omega_i * p.omega_i) +
                          std::abs(p.omega_i * p.omega_i);
    auto order_at = [&](double x0) {
        int order = 0;
        for (int k = 1; k <= 4; ++k) {
            const double dl = detail::one_sided_derivative(p, x0, h, k, -1);
            const double dr = detail::one_sided_derivative(p, x0, h, k, +1);
            const double scale = std::max({std::abs(dl), std::abs(dr),
                                           scale0 / std::pow(span, k)});
            if (std::abs(dl - dr) > 0.05 * scale) break;
            order = k;
        }
        return order;
    };
    rep.order_at_ta = order_at(p.window_start());
    rep.order_at_tb = order_at(p.window_end());
    rep.smooth = (rep.order_at_ta >= 4 && rep.order_at_tb >= 4);
    return rep;
}

} // namespace sqfield
