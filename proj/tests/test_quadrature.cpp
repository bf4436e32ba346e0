#include <doctest.h>

#include <cmath>
#include <complex>

#include "sqfield/atomfield.hpp"
#include "sqfield/quadrature.hpp"

using namespace sqfield;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("polynomial and trigonometric basics") {
    auto sq = [](double x) { return std::complex<double>(x * x, 0.0); };
    const auto a = quad::integrate(sq, 0.0, 1.0);
    CHECK(a.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(a.error <= 1e-10);

    auto s = [](double x) { return std::complex<double>(std::sin(x), 0.0); };
    CHECK(quad::integrate(s, 0.0, M_PI).real() == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("damped oscillation against the closed form") {
    auto f = [](double x) {
        return std::complex<double>(std::exp(-x) * std::cos(10.0 * x), 0.0);
    };
    const auto r = quad::integrate(f, 0.0, 60.0, {1e-12, 0.0, 0.0, 60000}, 128);
    CHECK(r.real() == doctest::Approx(1.0 / 101.0).epsilon(1e-11));
}

TEST_CASE("adaptive refinement finds a narrow Lorentzian peak") {
    // spectral sum rule: Int_{-inf}^{inf} w Im G(w) dw = pi / m
    const AtomParams atom{1.0, 0.2, 1.0};
    const double W = 2000.0;
    auto f = [&](double w) {
        return std::complex<double>(w * chi_retarded_ft(atom, w).imag(), 0.0);
    };
    const auto r = quad::integrate(f, 0.0, W, {1e-12, 0.0, 0.0, 60000}, 64);
    const double tail = 2.0 * atom.gamma / (atom.m * W);  // Int_W^inf 2 gamma / (m w^2)
    const double total = 2.0 * r.real() + 2.0 * tail;
    CHECK(total == doctest::Approx(M_PI / atom.m).epsilon(1e-9));
}

TEST_CASE("oscillatory tail sums the Abel value of a pure phase") {
    // Int_0^inf e^{3 i w} dw -> i/3
    auto f = [](double w) { return std::polar(1.0, 3.0 * w); };
    const auto r = quad::spectral_integral(f, 5.0, 3.0, 3.0, {1e-12, 0.0, 0.0, 60000});
    CHECK(std::abs(r.value - std::complex<double>(0.0, 1.0 / 3.0)) <= 1e-6);
}

TEST_CASE("spectral integral with algebraic envelope") {
    // Int_0^inf cos(3 w) / (1 + w^2) dw = (pi/2) e^{-3}
    auto f = [](double w) { return std::polar(1.0, 3.0 * w) / (1.0 + w * w); };
    const auto r = quad::spectral_integral(f, 30.0, 3.0, 3.0, {1e-12, 0.0, 0.0, 60000});
    CHECK(r.value.real() == doctest::Approx(0.5 * M_PI * std::exp(-3.0)).epsilon(1e-8));
}

TEST_CASE("panel budget exhaustion is reported") {
    auto nasty = [](double x) {
        return std::complex<double>(std::cos(4000.0 * x), 0.0);
    };
    quad::Options opt;
    opt.rel_tol = 1e-14;
    opt.max_panels = 8;
    const auto r = quad::integrate(nasty, 0.0, 10.0, opt);
    CHECK(!r.converged);
}

TEST_SUITE_END();
