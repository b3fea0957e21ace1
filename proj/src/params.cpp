#include "optomech/params.hpp"

#include <cmath>

namespace optomech {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid parameter: ") + what);
}

// Bose occupation 1/(exp(x)-1) with overflow clamp.
double bose_occupation(double omega, double temperature) {
    const double x = k_hbar * omega / (k_boltzmann * temperature);
    if (x > Tolerances::bose_exp_cutoff) return 0.0;
    return 1.0 / std::expm1(x);
}

}  // namespace

void SystemParams::validate() const {
    require(kappa > 0.0, "kappa");
    require(omega_m > 0.0, "omega_m");
    require(gamma_m > 0.0, "gamma_m");
    require(gamma_c > 0.0, "gamma_c");
    require(eta >= 0.0, "eta");
    require(omega_r > 0.0, "omega_r");
    require(omega_sw >= 0.0, "omega_sw");
    require(xi1 >= 0.0, "xi1");
    require(n_atoms > 0.0, "n_atoms");
    require(u0 > 0.0, "u0");
    require(temperature > 0.0, "temperature");
    require(n_s >= 0.0, "n_s");
    require(std::isfinite(xi2) && std::isfinite(delta_c) && std::isfinite(phi),
            "non-finite field");
}

DerivedParams derive_params(const SystemParams& p) {
    p.validate();
    DerivedParams d;
    const double lo = 4.0 * p.omega_r + 0.5 * p.omega_sw;
    const double hi = 4.0 * p.omega_r + 1.5 * p.omega_sw;
    d.chi = std::pow(hi / lo, 0.25);
    d.omega_c = std::sqrt(lo * hi);
    d.zeta = std::sqrt(p.n_atoms) * p.u0 / (2.0 * d.chi);
    d.n_m = bose_occupation(p.omega_m, p.temperature);
    d.n_c = bose_occupation(d.omega_c, p.temperature);
    d.r_sq = std::asinh(std::sqrt(p.n_s));
    const double ms_mag = 0.5 * std::sinh(2.0 * d.r_sq);  // = sqrt(Ns(Ns+1))
    d.m_s_re = ms_mag * std::cos(p.phi);
    d.m_s_im = ms_mag * std::sin(p.phi);
    for (double v : {d.chi, d.omega_c, d.zeta, d.n_m, d.n_c, d.r_sq, d.m_s_re, d.m_s_im}) {
        if (!std::isfinite(v)) throw NumericalError("derive_params: non-finite derived quantity");
    }
    return d;
}

ValidityReport validity_check(const SystemParams& p, const DerivedParams&,
                              double photon_number) {
    ValidityReport r;
    r.backaction_ratio = p.u0 * photon_number / (10.0 * p.omega_r);
    r.backaction_ok = r.backaction_ratio <= 1.0;
    r.sideband_ratio = p.kappa / p.omega_m;
    r.unresolved_sideband = r.sideband_ratio > 1.0;
    return r;
}

}  // namespace optomech
