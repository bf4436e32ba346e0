#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace sqfield::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    // stop when the error also drops below l1_rel_tol * sum(|panel values|);
    // keeps strongly self-cancelling oscillatory integrals from subdividing
    // past the rounding floor
    double l1_rel_tol = 0.0;
    int max_panels = 60000;
};

struct Result {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
    long evaluations = 0;
    bool converged = true;

    double real() const { return value.real(); }
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double kx[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
inline constexpr double kw[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double gw[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870};

template <class F>
inline void gk15(F& f, double a, double b, std::complex<double>& k15, double& err,
                 long& evals) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    std::complex<double> fc = f(mid);
    std::complex<double> g7 = gw[0] * fc;
    k15 = kw[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double dx = hw * kx[i];
        const std::complex<double> s = f(mid + dx) + f(mid - dx);
        k15 += kw[i] * s;
        if (i % 2 == 0) g7 += gw[i / 2] * s;
    }
    evals += 15;
    g7 *= hw;
    k15 *= hw;
    // conservative panel error: the Gauss-Kronrod gap
    err = std::abs(k15 - g7);
}

struct Panel {
    double a, b;
    std::complex<double> value;
    double error;
};

} // namespace detail

// Adaptive Gauss-Kronrod on [a, b] for a complex-valued integrand.
// seed_chunks pre-splits the interval so oscillations are resolved before
// the error estimate is trusted.
template <class F>
Result integrate(F f, double a, double b, Options opt = {}, int seed_chunks = 1) {
    Result res;
    if (!(b > a)) return res;
    seed_chunks = std::max(1, seed_chunks);
    std::vector<detail::Panel> heap;
    heap.reserve(256);
    std::complex<double> total{0.0, 0.0};
    double total_err = 0.0;
    double total_l1 = 0.0;
    for (int i = 0; i < seed_chunks; ++i) {
        const double pa = a + (b - a) * i / seed_chunks;
        const double pb = a + (b - a) * (i + 1) / seed_chunks;
        detail::Panel p{pa, pb, {}, 0.0};
        detail::gk15(f, pa, pb, p.value, p.error, res.evaluations);
        total += p.value;
        total_err += p.error;
        total_l1 += std::abs(p.value);
        heap.push_back(p);
    }
    auto cmp = [](const detail::Panel& x, const detail::Panel& y) {
        return x.error < y.error;
    };
    auto limit = [&] {
        return std::max({opt.abs_tol, opt.rel_tol * std::abs(total),
                         opt.l1_rel_tol * total_l1});
    };
    std::make_heap(heap.begin(), heap.end(), cmp);
    int panels = seed_chunks;
    while (panels < opt.max_panels && total_err > limit()) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        detail::Panel worst = heap.back();
        heap.pop_back();
        if (worst.b - worst.a < 1e-15 * (std::abs(worst.a) + 1.0)) {
            // cannot refine further; accept this panel's error
            heap.push_back({worst.a, worst.b, worst.value, 0.0});
            std::push_heap(heap.begin(), heap.end(), cmp);
            continue;
        }
        total -= worst.value;
        total_err -= worst.error;
        total_l1 -= std::abs(worst.value);
        const double mid = 0.5 * (worst.a + worst.b);
        detail::Panel left{worst.a, mid, {}, 0.0}, right{mid, worst.b, {}, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error, res.evaluations);
        detail::gk15(f, right.a, right.b, right.value, right.error, res.evaluations);
        total += left.value + right.value;
        total_err += left.error + right.error;
        total_l1 += std::abs(left.value) + std::abs(right.value);
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), cmp);
        ++panels;
    }
    res.value = total;
    res.error = total_err;
    res.converged = total_err <= limit();
    return res;
}

// Tail of an oscillatory integral over [b, infinity): sums half-period
// blocks and accelerates the (eventually alternating) series by repeated
// averaging of partial sums. Returns the Abel-summed value, which is the
// analytic continuation the late-time closed forms use.
template <class F>
Result oscillatory_tail(F f, double b, double half_period, int blocks = 48,
                        Options opt = {}) {
    Result res;
    if (!(half_period > 0.0)) throw ConfigError("oscillatory_tail requires half_period > 0");
    blocks = std::max(8, blocks);
    std::vector<std::complex<double>> partial;
    partial.reserve(blocks);
    std::complex<double> acc{0.0, 0.0};
    double block_err = 0.0;
    Options bl = opt;
    bl.max_panels = 64;
    double last_block_mag = 0.0;
    for (int k = 0; k < blocks; ++k) {
        const double pa = b + k * half_period;
        const double pb = pa + half_period;
        Result blk = integrate(f, pa, pb, bl, 2);
        res.evaluations += blk.evaluations;
        acc += blk.value;
        block_err += blk.error;
        last_block_mag = std::abs(blk.value);
        partial.push_back(acc);
    }
    // repeated pairwise averaging (Euler transform on the partial sums)
    std::vector<std::complex<double>> row = partial;
    std::complex<double> prev = row.back();
    while (row.size() > 1) {
        prev = row[0];
        for (std::size_t i = 0; i + 1 < row.size(); ++i)
            row[i] = 0.5 * (row[i] + row[i + 1]);
        row.pop_back();
    }
    res.value = row[0];
    res.error = block_err + std::abs(row[0] - prev) + last_block_mag * std::pow(0.5, blocks / 4);
    return res;
}

// Integral over [0, infinity) of an integrand oscillating like
// exp(i*s*omega): adaptive panels to w_cut (pre-chunked against the fastest
// phase s_fast), then an accelerated tail driven by the slowest phase
// s_slow.
template <class F>
Result spectral_integral(F f, double w_cut, double s_fast, double s_slow,
                         Options opt = {}, int tail_blocks = 48) {
    const double span_phase = std::abs(s_fast) * w_cut;
    int chunks = 1 + static_cast<int>(span_phase / M_PI);
    chunks = std::min(chunks, opt.max_panels / 4);
    Result head = integrate(f, 0.0, w_cut, opt, chunks);
    Result tail;
    if (std::abs(s_slow) > 0.0) {
        tail = oscillatory_tail(f, w_cut, M_PI / std::abs(s_slow), tail_blocks, opt);
    }
    Result res;
    res.value = head.value + tail.value;
    res.error = head.error + tail.error;
    res.evaluations = head.evaluations + tail.evaluations;
    res.converged = head.converged;
    return res;
}

} // namespace sqfield::quad
