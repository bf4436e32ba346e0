#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "errors.hpp"

namespace sqfield {

// Internal oscillator of the atom: mass m, damping gamma, renormalized
// frequency omega_r. Underdamped regime required. The coupling is fixed by
// e^2 = 8*pi*gamma*m and never set independently.
struct AtomParams {
    double m = 1.0;
    double gamma = 0.1;
    double omega_r = 1.0;

    double Omega_d() const { return std::sqrt(omega_r * omega_r - gamma * gamma); }
    double e_sq() const { return 8.0 * M_PI * gamma * m; }
};

inline void validate(const AtomParams& a) {
    if (!(a.m > 0.0) || !(a.gamma > 0.0) || !(a.omega_r > 0.0))
        throw ConfigError("atom parameters must be positive");
    if (!(a.gamma < a.omega_r))
        throw ConfigError("atom must be underdamped (gamma < omega_r)");
}

// State of the field the atom couples to: inverse temperature (infinity
// means exact zero temperature) and the mode-independent squeeze (eta, theta).
struct BathSpec {
    double beta_T = std::numeric_limits<double>::infinity();
    double eta = 0.0;
    double theta = 0.0;

    bool zero_temperature() const { return std::isinf(beta_T); }
};

inline void validate(const BathSpec& b) {
    if (!(b.beta_T > 0.0)) throw ConfigError("beta_T must be positive (or infinite)");
    if (b.eta < 0.0) throw ConfigError("bath eta must be >= 0");
}

// coth(beta*omega/2); the zero-temperature limit is the exact sign function,
// handled as its own code path.
inline double coth_half(double beta_T, double omega) {
    if (std::isinf(beta_T)) return omega >= 0.0 ? 1.0 : -1.0;
    return 1.0 / std::tanh(0.5 * beta_T * omega);
}

// Retarded response of the atom's internal coordinate, time domain:
// exp(-gamma*tau) * sin(Omega*tau) / (m*Omega) for tau >= 0.
inline double chi_retarded(const AtomParams& a, double tau) {
    if (tau < 0.0) return 0.0;
    const double Om = a.Omega_d();
    return std::exp(-a.gamma * tau) * std::sin(Om * tau) / (a.m * Om);
}

// Fourier transform under f(t) = Int dw/2pi f~(w) e^{-iwt}:
// 1 / (m (omega_r^2 - w^2 - 2 i gamma w)). No real-axis poles for gamma > 0.
inline std::complex<double> chi_retarded_ft(const AtomParams& a, double omega) {
    const std::complex<double> den(a.omega_r * a.omega_r - omega * omega,
                                   -2.0 * a.gamma * omega);
    return 1.0 / (a.m * den);
}

// Free-field spherical-wave propagator e^{i w r} / (4 pi r).
inline std::complex<double> field_retarded_ft(double r, double omega) {
    if (!(r > 0.0)) throw ConfigError("field_retarded_ft requires r > 0");
    return std::polar(1.0 / (4.0 * M_PI * r), omega * r);
}

// Stationary / nonstationary spectral weights of the squeezed thermal field:
// cosh(2 eta) coth(beta w/2) and sinh(2 eta) coth(beta w/2).
struct SpectralKernels {
    double rho_st = 0.0;
    double rho_ns = 0.0;
};

inline SpectralKernels spectral_kernels(const BathSpec& b, double omega) {
    const double c = coth_half(b.beta_T, omega);
    return {std::cosh(2.0 * b.eta) * c, std::sinh(2.0 * b.eta) * c};
}

// Second moments of a pair of thermal modes (mean numbers nbar1, nbar2)
// acted on by the two-mode squeeze operator. <a_i^2> vanishes identically.
struct TmstMoments {
    double a1_a1dag = 0.0;   // <a1 a1+>
    double a1dag_a1 = 0.0;   // <a1+ a1>
    double a2_a2dag = 0.0;
    double a2dag_a2 = 0.0;
    std::complex<double> a1_a2;      // <a1 a2>
    std::complex<double> a1dag_a2dag;
};

inline TmstMoments tmst_expectations(const BathSpec& b, double nbar1, double nbar2) {
    if (nbar1 < 0.0 || nbar2 < 0.0) throw ConfigError("mean numbers must be >= 0");
    const double ch = std::cosh(b.eta), sh = std::sinh(b.eta);
    const double ch2 = ch * ch, sh2 = sh * sh;
    TmstMoments m;
    m.a1_a1dag = (nbar1 + 1.0) * ch2 + nbar2 * sh2;
    m.a1dag_a1 = nbar1 * ch2 + (nbar2 + 1.0) * sh2;
    m.a2_a2dag = (nbar2 + 1.0) * ch2 + nbar1 * sh2;
    m.a2dag_a2 = nbar2 * ch2 + (nbar1 + 1.0) * sh2;
    const double pair = -0.5 * (nbar1 + nbar2 + 1.0) * std::sinh(2.0 * b.eta);
    m.a1_a2 = pair * std::polar(1.0, b.theta);
    m.a1dag_a2dag = pair * std::polar(1.0, -b.theta);
    return m;
}

} // namespace sqfield
