#pragma once

#include <cmath>
#include <complex>

#include "atomfield.hpp"
#include "errors.hpp"
#include "quadrature.hpp"

namespace sqfield {

// Where the stress tensor is probed. Radiation formulas assume t > r.
struct ObservationPoint {
    double r = 1.0;
    double t = 0.0;
};

// Quadrature controls for the frequency integrals. omega_cut = 0 picks
// max(40*omega_r, 60/min(r, 1/gamma)); the oscillatory remainder beyond the
// cutoff is summed by accelerated half-period blocks.
struct ObsOptions {
    double rel_tol = 1e-11;
    double l1_rel_tol = 1e-13;
    double omega_cut = 0.0;
    int tail_blocks = 48;
    int max_panels = 60000;

    quad::Options quad_options() const {
        quad::Options q;
        q.rel_tol = rel_tol;
        q.l1_rel_tol = l1_rel_tol;
        q.max_panels = max_panels;
        return q;
    }
    double cutoff(const AtomParams& atom, double r) const {
        if (omega_cut > 0.0) return omega_cut;
        const double near_scale = std::min(r, 1.0 / atom.gamma);
        return std::max(40.0 * atom.omega_r, 60.0 / near_scale);
    }
};

namespace detail_obs {

inline void require_converged(const quad::Result& res, const char* what) {
    if (!res.converged) throw QuadratureFailure(what, res.error);
}

// value of "Z e^{i theta} + C.C."
inline double twice_real(const std::complex<double>& z, double theta) {
    return 2.0 * std::real(z * std::polar(1.0, theta));
}

} // namespace detail_obs

// ---------------------------------------------------------------------------
// Energy flux (t-r component). Public values use the outward-positive sign
// convention: positive = net energy flowing away from the atom. The tensor
// component T_rt itself is the negative of these.
// ---------------------------------------------------------------------------

struct StationaryFlux {
    double rr = 0.0;  // purely from the radiation field (outward-positive)
    double hr = 0.0;  // radiation/free-field cross term
    double error = 0.0;
};

// Both frequency integrals of the late-time stationary flux. They are
// reported separately so their cancellation is a measured outcome; each one
// alone depends logarithmically on the spectral cutoff, the sum does not.
inline StationaryFlux flux_stationary(const AtomParams& atom, const BathSpec& bath,
                                      double r, const ObsOptions& opt = {}) {
    validate(atom);
    validate(bath);
    if (!(r > 0.0)) throw ConfigError("flux_stationary requires r > 0");
    const double wcut = opt.cutoff(atom, r);
    const double e2 = atom.e_sq();
    StationaryFlux out;

    // radiation-radiation part via the fluctuation-dissipation identification
    auto f_rr = [&](double w) -> std::complex<double> {
        const double rho_st = spectral_kernels(bath, w).rho_st;
        return w * w * rho_st * std::imag(chi_retarded_ft(atom, w)) *
               std::norm(field_retarded_ft(r, w));
    };
    quad::Result rr = quad::integrate(f_rr, 0.0, wcut, opt.quad_options(), 64);
    detail_obs::require_converged(rr, "stationary flux (radiation part)");
    out.rr = (e2 / M_PI) * rr.real();  // outward-positive: -tensor

    // cross part, full complex integrand over the whole line
    auto f_hr = [&](double w) -> std::complex<double> {
        const double rho_st = spectral_kernels(bath, w).rho_st;
        return std::complex<double>(0.0, -1.0) * w * w * rho_st *
               chi_retarded_ft(atom, w) * std::norm(field_retarded_ft(r, w));
    };
    quad::Result hr_neg = quad::integrate(f_hr, -wcut, 0.0, opt.quad_options(), 64);
    quad::Result hr_pos = quad::integrate(f_hr, 0.0, wcut, opt.quad_options(), 64);
    detail_obs::require_converged(hr_neg, "stationary flux (cross part)");
    detail_obs::require_converged(hr_pos, "stationary flux (cross part)");
    const std::complex<double> hr = hr_neg.value + hr_pos.value;
    out.hr = -(e2 / (2.0 * M_PI)) * hr.real();
    out.error = (e2 / M_PI) * rr.error +
                (e2 / (2.0 * M_PI)) * (hr_neg.error + hr_pos.error + std::abs(hr.imag()));
    return out;
}

struct NonstationaryFlux {
    double rr = 0.0;
    double hr = 0.0;
    double combined_leading = 0.0;  // the 1/r^2-order combined form
    double r_terms = 0.0;           // the remaining 1/r^3-order terms
    double error = 0.0;
};

// The oscillatory e^{-2 i w t + i theta} flux integrals at time t.
// rr + hr equals combined_leading + r_terms up to quadrature error.
inline NonstationaryFlux flux_nonstationary(const AtomParams& atom, const BathSpec& bath,
                                            double r, double t,
                                            const ObsOptions& opt = {}) {
    validate(atom);
    validate(bath);
    if (!(r > 0.0) || !(t > r))
        throw ConfigError("flux_nonstationary requires t > r > 0");
    NonstationaryFlux out;
    if (bath.eta == 0.0) return out;  // sinh(2 eta) factor: exactly zero

    const double wcut = opt.cutoff(atom, r);
    const double e2 = atom.e_sq();
    const double s_fast = 2.0 * t;
    const double s_slow = 2.0 * (t - r);
    const auto qopt = opt.quad_options();

    auto rho = [&](double w) { return spectral_kernels(bath, w).rho_ns; };
    auto phase = [&](double w) {
        return std::polar(1.0, -2.0 * w * t);
    };

    auto f_rr = [&](double w) -> std::complex<double> {
        const std::complex<double> gc = chi_retarded_ft(atom, w);
        const std::complex<double> gf = field_retarded_ft(r, w);
        const std::complex<double> gg = gc * gf;
        return w * w * rho(w) * (std::complex<double>(0.0, w) - 1.0 / r) * gg * gg *
               phase(w);
    };
    quad::Result rr = quad::spectral_integral(f_rr, wcut, s_fast, s_slow, qopt,
                                              opt.tail_blocks);
    detail_obs::require_converged(rr, "nonstationary flux (radiation part)");
    const std::complex<double> zi(0.0, 1.0);
    out.rr = -detail_obs::twice_real(zi * (e2 * e2 / (8.0 * M_PI * M_PI)) * rr.value,
                                     bath.theta);

    auto f_hr = [&](double w) -> std::complex<double> {
        const std::complex<double> gc = chi_retarded_ft(atom, w);
        const std::complex<double> gf = field_retarded_ft(r, w);
        return w * rho(w) * gc * gf * (w * gf - (2.0 / r) * std::imag(gf)) * phase(w);
    };
    quad::Result hr = quad::spectral_integral(f_hr, wcut, s_fast, s_slow, qopt,
                                              opt.tail_blocks);
    detail_obs::require_converged(hr, "nonstationary flux (cross part)");
    out.hr = -detail_obs::twice_real(zi * (e2 / (2.0 * M_PI)) * hr.value, bath.theta);

    auto f_comb = [&](double w) -> std::complex<double> {
        const std::complex<double> gc = chi_retarded_ft(atom, w);
        const std::complex<double> gf = field_retarded_ft(r, w);
        return w * w * rho(w) * std::real(gc) * (gc / std::conj(gc)) * gf * gf *
               phase(w);
    };
    quad::Result comb = quad::spectral_integral(f_comb, wcut, s_fast, s_slow, qopt,
                                                opt.tail_blocks);
    detail_obs::require_converged(comb, "nonstationary flux (combined form)");
    out.combined_leading =
        -detail_obs::twice_real(zi * (e2 / (2.0 * M_PI)) * comb.value, bath.theta);

    // complement of the combined form; regrouping the 1/r pieces of the
    // radiation and cross terms gives ReGc (Gc/Gc*) Gf^2 - Gc |Gf|^2
    auto f_rt = [&](double w) -> std::complex<double> {
        const std::complex<double> gc = chi_retarded_ft(atom, w);
        const std::complex<double> gf = field_retarded_ft(r, w);
        return w * rho(w) *
               (gf * gf * (gc / std::conj(gc)) * std::real(gc) - gc * std::norm(gf)) *
               phase(w);
    };
    quad::Result rt = quad::spectral_integral(f_rt, wcut, s_fast, s_slow, qopt,
                                              opt.tail_blocks);
    detail_obs::require_converged(rt, "nonstationary flux (1/r terms)");
    out.r_terms =
        -detail_obs::twice_real(-(e2 / (2.0 * M_PI * r)) * rt.value, bath.theta);

    const double pref = std::max(e2 * e2 / (8.0 * M_PI * M_PI), e2 / (2.0 * M_PI));
    out.error = 2.0 * pref * (rr.error + hr.error + comb.error + rt.error);
    return out;
}

// ---------------------------------------------------------------------------
// Energy density (t-t component), reported with the tensor's own sign.
// ---------------------------------------------------------------------------

struct DensityResult {
    double value = 0.0;
    double error = 0.0;
};

// Late-time constant energy density residual around the atom.
inline DensityResult density_stationary(const AtomParams& atom, const BathSpec& bath,
                                        double r, const ObsOptions& opt = {}) {
    validate(atom);
    validate(bath);
    if (!(r > 0.0)) throw ConfigError("density_stationary requires r > 0");
    const double wcut = opt.cutoff(atom, r);
    const double e2 = atom.e_sq();
    const double s = 2.0 * r;
    // assembled as the explicitly regular real combination: the coth pole at
    // w = 0 multiplies Im[Gc Gf^2], which vanishes linearly there
    auto f = [&](double w) -> std::complex<double> {
        const double rho_st = spectral_kernels(bath, w).rho_st;
        const std::complex<double> gf = field_retarded_ft(r, w);
        const std::complex<double> z = chi_retarded_ft(atom, w) * gf * gf;
        return std::complex<double>(
            rho_st * ((w / r) * z.real() - z.imag() / (2.0 * r * r)), 0.0);
    };
    quad::Result res = quad::spectral_integral(f, wcut, s, s, opt.quad_options(),
                                               opt.tail_blocks);
    detail_obs::require_converged(res, "stationary density");
    DensityResult out;
    out.value = -(e2 / M_PI) * res.value.real();
    out.error = (e2 / M_PI) * res.error;
    return out;
}

struct NsDensityResult {
    double value = 0.0;     // combined late-time form
    double rr_part = 0.0;   // purely-radiation split, for the continuity check
    double hr_part = 0.0;   // cross-term split
    double error = 0.0;
};

// Nonstationary energy density; decays to zero at late times.
inline NsDensityResult density_nonstationary(const AtomParams& atom,
                                             const BathSpec& bath, double r, double t,
                                             const ObsOptions& opt = {}) {
    validate(atom);
    validate(bath);
    if (!(r > 0.0) || !(t > r))
        throw ConfigError("density_nonstationary requires t > r > 0");
    NsDensityResult out;
    if (bath.eta == 0.0) return out;

    const double wcut = opt.cutoff(atom, r);
    const double e2 = atom.e_sq();
    const double s_fast = 2.0 * t;
    const double s_slow = 2.0 * (t - r);
    const auto qopt = opt.quad_options();
    const std::complex<double> zi(0.0, 1.0);

    auto rho = [&](double w) { return spectral_kernels(bath, w).rho_ns; };
    auto phase = [&](double w) { return std::polar(1.0, -2.0 * w * t); };

    // combining the radiation and cross pieces through the damping identity
    // leaves  poly * Gf^2 (Gc/Gc*) ReGc + Gc |Gf|^2 / (2 r^2)  under the
    // overall -i prefactor
    auto f_comb = [&](double w) -> std::complex<double> {
        const std::complex<double> gc = chi_retarded_ft(atom, w);
        const std::complex<double> gf = field_retarded_ft(r, w);
        const std::complex<double> poly(w * w - 1.0 / (2.0 * r * r), w / r);
        return rho(w) *
               (poly * gf * gf * (gc / std::conj(gc)) * std::real(gc) +
                (1.0 / (2.0 * r * r)) * gc * std::norm(gf)) *
               phase(w);
    };
    quad::Result comb = quad::spectral_integral(f_comb, wcut, s_fast, s_slow, qopt,
                                                opt.tail_blocks);
    detail_obs::require_converged(comb, "nonstationary density");
    out.value = detail_obs::twice_real(-zi * (e2 / (2.0 * M_PI)) * comb.value,
                                       bath.theta);

    auto f_rr = [&](double w) -> std::complex<double> {
        const std::complex<double> gc = chi_retarded_ft(atom, w);
        const std::complex<double> gf = field_retarded_ft(r, w);
        const std::complex<double> gg = gc * gf;
        const std::complex<double> poly(w * w - 1.0 / (2.0 * r * r), w / r);
        return w * rho(w) * poly * gg * gg * phase(w);
    };
    quad::Result rr = quad::spectral_integral(f_rr, wcut, s_fast, s_slow, qopt,
                                              opt.tail_blocks);
    detail_obs::require_converged(rr, "nonstationary density (radiation part)");
    out.rr_part = detail_obs::twice_real(
        (e2 * e2 / (8.0 * M_PI * M_PI)) * rr.value, bath.theta);

    auto f_hr = [&](double w) -> std::complex<double> {
        const std::complex<double> gc = chi_retarded_ft(atom, w);
        const std::complex<double> gf = field_retarded_ft(r, w);
        const std::complex<double> poly(w * w, w / r);
        return rho(w) * gc *
               (zi * poly * gf * gf + (1.0 / (r * r)) * gf * std::imag(gf)) * phase(w);
    };
    quad::Result hr = quad::spectral_integral(f_hr, wcut, s_fast, s_slow, qopt,
                                              opt.tail_blocks);
    detail_obs::require_converged(hr, "nonstationary density (cross part)");
    out.hr_part =
        detail_obs::twice_real(-(e2 / (2.0 * M_PI)) * hr.value, bath.theta);

    out.error = 2.0 * (e2 / (2.0 * M_PI)) * (comb.error + hr.error) +
                2.0 * (e2 * e2 / (8.0 * M_PI * M_PI)) * rr.error;
    return out;
}

// ---------------------------------------------------------------------------
// Late-time nonstationary power exchange at the atom.
// ---------------------------------------------------------------------------

struct NsPower {
    double p_xi = 0.0;     // delivered by free-field fluctuations
    double p_gamma = 0.0;  // lost to radiation damping
    double error = 0.0;
};

inline NsPower power_nonstationary(const AtomParams& atom, const BathSpec& bath,
                                   double t, const ObsOptions& opt = {}) {
    validate(atom);
    validate(bath);
    if (!(t > 0.0)) throw ConfigError("power_nonstationary requires t > 0");
    NsPower out;
    if (bath.eta == 0.0) return out;
    const double wcut = std::max(40.0 * atom.omega_r, 60.0 * atom.gamma);
    const double e2 = atom.e_sq();
    const double s = 2.0 * t;
    const auto qopt = opt.quad_options();
    const std::complex<double> zi(0.0, 1.0);
    auto rho = [&](double w) { return spectral_kernels(bath, w).rho_ns; };

    auto f_xi = [&](double w) -> std::complex<double> {
        return w * w * rho(w) * chi_retarded_ft(atom, w) *
               std::polar(1.0, -2.0 * w * t);
    };
    quad::Result xi = quad::spectral_integral(f_xi, wcut, s, s, qopt, opt.tail_blocks);
    detail_obs::require_converged(xi, "nonstationary power (fluctuations)");
    out.p_xi = detail_obs::twice_real(zi * (e2 / (8.0 * M_PI * M_PI)) * xi.value,
                                      bath.theta);

    auto f_ga = [&](double w) -> std::complex<double> {
        const std::complex<double> gc = chi_retarded_ft(atom, w);
        return w * w * w * rho(w) * gc * gc * std::polar(1.0, -2.0 * w * t);
    };
    quad::Result ga = quad::spectral_integral(f_ga, wcut, s, s, qopt, opt.tail_blocks);
    detail_obs::require_converged(ga, "nonstationary power (damping)");
    out.p_gamma = detail_obs::twice_real(
        -(e2 * e2 / (32.0 * M_PI * M_PI * M_PI)) * ga.value, bath.theta);

    out.error = 2.0 * (e2 / (8.0 * M_PI * M_PI)) * xi.error +
                2.0 * (e2 * e2 / (32.0 * M_PI * M_PI * M_PI)) * ga.error;
    return out;
}

// ---------------------------------------------------------------------------
// Continuity of the nonstationary components:
// d/dt T_tt = (1/r^2) d/dr (r^2 T_rt), by central finite differences.
// ---------------------------------------------------------------------------

struct ContinuityReport {
    double residual = 0.0;
    double dt_density = 0.0;
    double div_flux = 0.0;
    bool degenerate = false;  // both sides vanish (e.g. eta = 0)
};

inline ContinuityReport continuity_check(const AtomParams& atom, const BathSpec& bath,
                                         double r, double t, double h_r, double h_t,
                                         const ObsOptions& opt = {}) {
    if (!(t - r > h_t) || !(r > h_r))
        throw ConfigError("continuity_check requires t - r > h_t and r > h_r");
    ContinuityReport rep;
    if (bath.eta == 0.0) {
        rep.degenerate = true;
        return rep;
    }
    ObsOptions fixed = opt;
    fixed.omega_cut = opt.cutoff(atom, r);  // same cutoff on both sides of r
    auto tensor_flux = [&](double rr, double tt) {
        const NonstationaryFlux f = flux_nonstationary(atom, bath, rr, tt, fixed);
        return -(f.rr + f.hr);  // back to the T_rt sign
    };
    auto tensor_density = [&](double tt) {
        const NsDensityResult d = density_nonstationary(atom, bath, r, tt, fixed);
        return d.rr_part + d.hr_part;
    };
    rep.dt_density =
        (tensor_density(t + h_t) - tensor_density(t - h_t)) / (2.0 * h_t);

    const double rp = r + h_r, rm = r - h_r;
    const double fp = tensor_flux(rp, t), fm = tensor_flux(rm, t);
    rep.div_flux = (rp * rp * fp - rm * rm * fm) / (2.0 * h_r * r * r);

    const double scale = std::max(std::abs(rep.dt_density), std::abs(rep.div_flux));
    if (scale < 1e-300) {
        rep.degenerate = true;
        return rep;
    }
    rep.residual = std::abs(rep.dt_density - rep.div_flux) / scale;
    return rep;
}

// ---------------------------------------------------------------------------
// Batch record matching the CSV output.
// ---------------------------------------------------------------------------

struct StressTensorComponents {
    double tr_st_rr = 0.0;
    double tr_st_hr = 0.0;
    double tr_ns_rr = 0.0;
    double tr_ns_hr = 0.0;
    double tt_st_total = 0.0;
    double tt_ns_total = 0.0;
    double quadrature_error = 0.0;
};

inline StressTensorComponents evaluate_stress_tensor(const AtomParams& atom,
                                                     const BathSpec& bath,
                                                     const ObservationPoint& x,
                                                     const ObsOptions& opt = {}) {
    StressTensorComponents out;
    const StationaryFlux st = flux_stationary(atom, bath, x.r, opt);
    out.tr_st_rr = st.rr;
    out.tr_st_hr = st.hr;
    out.quadrature_error = st.error;
    const DensityResult dst = density_stationary(atom, bath, x.r, opt);
    out.tt_st_total = dst.value;
    out.quadrature_error += dst.error;
    if (x.t > x.r) {
        const NonstationaryFlux ns = flux_nonstationary(atom, bath, x.r, x.t, opt);
        out.tr_ns_rr = ns.rr;
        out.tr_ns_hr = ns.hr;
        const NsDensityResult dns = density_nonstationary(atom, bath, x.r, x.t, opt);
        out.tt_ns_total = dns.value;
        out.quadrature_error += ns.error + dns.error;
    }
    return out;
}

} // namespace sqfield
