#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "errors.hpp"

namespace sqfield::ode {

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;  // 0 = uncapped
    long max_steps = 2'000'000;
};

namespace detail {

// Dormand-Prince 5(4) tableau
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                        e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640,
                        e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

} // namespace detail

// Integrates dy/dt = f(t, y) from t0 to t1 (t1 >= t0) with an adaptive
// embedded Runge-Kutta 5(4) pair. The final step is clamped to land on t1
// exactly. Throws StepLimit if the step budget is exhausted or the step
// size underflows.
template <std::size_t N, class F>
std::array<double, N> integrate(F&& f, double t0, double t1, std::array<double, N> y,
                                const StepControl& ctl = {}) {
    using V = std::array<double, N>;
    if (t1 <= t0) {
        if (t1 == t0) return y;
        throw StepLimit("ode::integrate requires t1 >= t0");
    }

    V k1 = f(t0, y);
    auto scaled_norm = [&](const V& err, const V& y0, const V& y1) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = ctl.abs_tol +
                              ctl.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            const double q = err[i] / sc;
            s += q * q;
        }
        return std::sqrt(s / N);
    };

    // initial step size from the local derivative magnitude
    double ynorm = 0.0, fnorm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        ynorm = std::max(ynorm, std::abs(y[i]));
        fnorm = std::max(fnorm, std::abs(k1[i]));
    }
    double h = (fnorm > 0.0) ? 0.01 * std::max(ynorm, 1.0) / fnorm : (t1 - t0) / 100.0;
    h = std::min(h, t1 - t0);
    if (ctl.max_step > 0.0) h = std::min(h, ctl.max_step);

    double t = t0;
    long steps = 0;
    while (t < t1) {
        if (++steps > ctl.max_steps)
            throw StepLimit("ode::integrate exceeded max_steps");
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }
        if (!(h > std::abs(t) * 1e-15 + 1e-300))
            throw StepLimit("ode::integrate step size underflow");

        V y2, y3, y4, y5, y6, y7;
        using namespace detail;
        for (std::size_t i = 0; i < N; ++i) y2[i] = y[i] + h * a21 * k1[i];
        V k2 = f(t + c2 * h, y2);
        for (std::size_t i = 0; i < N; ++i)
            y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        V k3 = f(t + c3 * h, y3);
        for (std::size_t i = 0; i < N; ++i)
            y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        V k4 = f(t + c4 * h, y4);
        for (std::size_t i = 0; i < N; ++i)
            y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        V k5 = f(t + c5 * h, y5);
        for (std::size_t i = 0; i < N; ++i)
            y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                a65 * k5[i]);
        V k6 = f(t + h, y6);
        for (std::size_t i = 0; i < N; ++i)
            y7[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                b6 * k6[i]);
        V k7 = f(t + h, y7);

        V err;
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                          e6 * k6[i] + e7 * k7[i]);
        const double errn = scaled_norm(err, y, y7);

        if (errn <= 1.0) {
            t += h;
            y = y7;
            k1 = k7;  // FSAL
            if (last && t >= t1) break;
        }
        double fac = 0.9 * std::pow(std::max(errn, 1e-16), -0.2);
        fac = std::clamp(fac, 0.2, 5.0);
        h *= fac;
        if (ctl.max_step > 0.0) h = std::min(h, ctl.max_step);
    }
    return y;
}

} // namespace sqfield::ode
